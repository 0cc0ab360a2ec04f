#pragma once

#include <cstdint>
#include <string>

namespace heckeps {

using i128 = __int128_t;
using u128 = __uint128_t;

std::string i128_to_string(i128 x);

// Parses an optionally signed decimal string.  Throws std::invalid_argument
// on malformed input, std::overflow_error if the value exceeds 128 bits.
i128 i128_from_string(const std::string& s);

// i128 -> double via long double (64-bit mantissa), then one rounding.
double i128_to_double(i128 x);

} // namespace heckeps
