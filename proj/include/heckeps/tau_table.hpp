#pragma once

#include <cstdint>
#include <vector>

#include "heckeps/arithmetic_tables.hpp"
#include "heckeps/int128_util.hpp"

namespace heckeps {

// Exact Ramanujan tau values tau(n) for 1 <= n <= limit, together with the
// normalised eigenvalues lambda(n) = tau(n) * n^{-11/2} in binary64.
// tau(n) is the coefficient of q^n in q * prod_{m>=1} (1-q^m)^24.
class TauTable {
public:
    TauTable(uint64_t limit, std::vector<i128> tau);

    uint64_t limit() const { return limit_; }
    i128 tau(uint64_t n) const { return tau_.at(n - 1); }
    double lambda(uint64_t n) const { return lambda_.at(n - 1); }

    const std::vector<i128>& tau_raw() const { return tau_; }
    const std::vector<double>& lambda_raw() const { return lambda_; }

private:
    uint64_t limit_;
    std::vector<i128> tau_;    // index n-1
    std::vector<double> lambda_;
};

// Sparse-eta construction: the dense accumulator is multiplied 24 times by
// Euler's pentagonal-number series, O(24 N^{3/2}) exact-integer adds.  The
// accumulator is arbitrary precision; the published table narrows to signed
// 128 bits with an overflow check.  threads > 1 splits each multiplication
// by output blocks and produces a bit-identical table.
TauTable build_tau_table(uint64_t limit, unsigned threads = 1);

// Independent quadratic-cost oracle: dense coefficients of
// q * prod_{m<=limit} (1-q^m)^24, one (1-q^m) factor at a time.
// Capped at limit <= 5000.
std::vector<i128> tau_oracle_naive(uint64_t limit);

// Exact check of tau(mn) = sum_{d | gcd(m,n)} mu(d) d^11 tau(m/d) tau(n/d).
bool hecke_relation_check(uint64_t m, uint64_t n, const TauTable& table);

struct DeligneReport {
    uint64_t checked = 0;
    std::vector<uint64_t> violations;  // n with |tau(n)|^2 > d(n)^2 n^11
    bool ok() const { return violations.empty(); }
};

// Exact-integer Ramanujan-Petersson bound |tau(n)|^2 <= d(n)^2 n^11 over the
// whole table.
DeligneReport deligne_check(const TauTable& table);

// sum_{n<=upper} Lambda(n) lambda(n), ascending n, compensated.
double pnt_hecke_sum(uint64_t upper, const TauTable& table, const ArithmeticTables& arith);

} // namespace heckeps
