#pragma once

#include <cstdint>
#include <vector>

namespace heckeps {

// Sidecar tables: von Mangoldt Lambda(n), Moebius mu(n), divisor count d(n),
// indexed 1..limit.  Lambda is stored as log p in binary64; mangoldt_p keeps
// the exact (p for n = p^k, else 0) so exact comparisons never go through
// the float.
class ArithmeticTables {
public:
    explicit ArithmeticTables(uint64_t limit);

    uint64_t limit() const { return limit_; }

    double von_mangoldt(uint64_t n) const { return von_mangoldt_.at(n); }
    int moebius(uint64_t n) const { return moebius_.at(n); }
    uint64_t divisors(uint64_t n) const { return divisors_.at(n); }
    // p when n = p^k (k >= 1), 0 otherwise
    uint64_t mangoldt_prime(uint64_t n) const { return mangoldt_p_.at(n); }
    bool is_prime(uint64_t n) const { return n >= 2 && mangoldt_p_.at(n) == n; }

    const std::vector<uint64_t>& primes() const { return primes_; }

private:
    uint64_t limit_;
    std::vector<double> von_mangoldt_;
    std::vector<int8_t> moebius_;
    std::vector<uint32_t> divisors_;
    std::vector<uint32_t> mangoldt_p_;
    std::vector<uint64_t> primes_;
};

ArithmeticTables build_arithmetic_tables(uint64_t limit);

// Moebius of a single small argument by trial factorisation; used where no
// table is in scope (e.g. the Hecke relation over d | gcd(m,n)).
int moebius_u64(uint64_t n);

} // namespace heckeps
