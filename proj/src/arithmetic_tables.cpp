#include "heckeps/arithmetic_tables.hpp"

#include <cmath>
#include <stdexcept>

namespace heckeps {

ArithmeticTables::ArithmeticTables(uint64_t limit) : limit_(limit)
{
    if (limit == 0) throw std::invalid_argument("build_arithmetic_tables: limit must be >= 1");

    von_mangoldt_.assign(limit + 1, 0.0);
    moebius_.assign(limit + 1, 0);
    divisors_.assign(limit + 1, 0);
    mangoldt_p_.assign(limit + 1, 0);

    moebius_[1] = 1;
    divisors_[1] = 1;

    // linear sieve; cnt[n] = exponent of the smallest prime factor of n
    std::vector<uint32_t> spf(limit + 1, 0), cnt(limit + 1, 0);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = (uint32_t)i;
            primes_.push_back(i);
            moebius_[i] = -1;
            divisors_[i] = 2;
            cnt[i] = 1;
        }
        for (uint64_t p : primes_) {
            if (p > spf[i] || i * p > limit) break;
            uint64_t ip = i * p;
            spf[ip] = (uint32_t)p;
            if (i % p == 0) {
                moebius_[ip] = 0;
                cnt[ip] = cnt[i] + 1;
                divisors_[ip] = divisors_[i] / (cnt[i] + 1) * (cnt[i] + 2);
            } else {
                moebius_[ip] = -moebius_[i];
                cnt[ip] = 1;
                divisors_[ip] = divisors_[i] * 2;
            }
        }
    }

    // prime powers: Lambda(p^k) = log p
    for (uint64_t p : primes_) {
        double logp = std::log((double)p);
        for (uint64_t q = p;; q *= p) {
            mangoldt_p_[q] = (uint32_t)p;
            von_mangoldt_[q] = logp;
            if (q > limit / p) break;
        }
    }
}

ArithmeticTables build_arithmetic_tables(uint64_t limit)
{
    return ArithmeticTables(limit);
}

int moebius_u64(uint64_t n)
{
    if (n == 0) throw std::invalid_argument("moebius_u64: n must be >= 1");
    int mu = 1;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

} // namespace heckeps
