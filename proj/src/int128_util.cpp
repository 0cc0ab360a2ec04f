#include "heckeps/int128_util.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace heckeps {

std::string i128_to_string(i128 x)
{
    if (x == 0) return "0";
    const bool neg = x < 0;
    u128 v = neg ? -(u128)x : (u128)x;
    std::string s;
    while (v) {
        s += char('0' + (int)(v % 10));
        v /= 10;
    }
    if (neg) s += '-';
    std::reverse(s.begin(), s.end());
    return s;
}

i128 i128_from_string(const std::string& s)
{
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i == s.size())
        throw std::invalid_argument("i128_from_string: empty digit string '" + s + "'");

    const u128 max_mag = neg ? ((u128)1 << 127) : ((u128)1 << 127) - 1;
    u128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("i128_from_string: bad character in '" + s + "'");
        unsigned d = unsigned(s[i] - '0');
        if (v > (max_mag - d) / 10)
            throw std::overflow_error("i128_from_string: value out of range: " + s);
        v = v * 10 + d;
    }
    return neg ? -(i128)v : (i128)v;
}

double i128_to_double(i128 x)
{
    return (double)(long double)x;
}

} // namespace heckeps
