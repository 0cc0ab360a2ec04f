#include "heckeps/tau_table.hpp"

#include <gmp.h>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "heckeps/kahan.hpp"

namespace heckeps {

namespace {

// RAII array of mpz_t
class MpzArray {
public:
    explicit MpzArray(size_t n, mp_bitcnt_t bits = 160) : v_(n)
    {
        for (auto& x : v_) mpz_init2(x, bits);
    }
    ~MpzArray()
    {
        for (auto& x : v_) mpz_clear(x);
    }
    MpzArray(const MpzArray&) = delete;
    MpzArray& operator=(const MpzArray&) = delete;

    mpz_t& operator[](size_t i) { return v_[i]; }
    const mpz_t& operator[](size_t i) const { return v_[i]; }
    size_t size() const { return v_.size(); }
    void swap(MpzArray& o) { v_.swap(o.v_); }

private:
    std::vector<mpz_t> v_;
};

// Pentagonal-number series prod (1-q^m) = 1 + sum_k (-1)^k (q^{k(3k-1)/2} + q^{k(3k+1)/2}),
// terms with exponent < deg, exponent ascending.
struct SparseTerm {
    uint64_t off;
    int sign;
};

std::vector<SparseTerm> pentagonal_terms(uint64_t deg)
{
    std::vector<SparseTerm> t;
    t.push_back({0, +1});
    for (uint64_t k = 1;; ++k) {
        uint64_t p1 = k * (3 * k - 1) / 2;
        uint64_t p2 = k * (3 * k + 1) / 2;
        int s = (k % 2 == 1) ? -1 : +1;
        if (p1 >= deg) break;
        t.push_back({p1, s});
        if (p2 < deg) t.push_back({p2, s});
    }
    return t;
}

// new[n] = sum over terms of sign * old[n - off]
void sparse_multiply_block(const MpzArray& oldc, MpzArray& newc,
                           const std::vector<SparseTerm>& terms,
                           uint64_t lo, uint64_t hi)
{
    for (uint64_t n = lo; n < hi; ++n) {
        mpz_set_ui(newc[n], 0);
        for (const auto& t : terms) {
            if (t.off > n) break;  // offsets ascending
            if (t.sign > 0)
                mpz_add(newc[n], newc[n], oldc[n - t.off]);
            else
                mpz_sub(newc[n], newc[n], oldc[n - t.off]);
        }
    }
}

i128 mpz_to_i128_checked(const mpz_t z, uint64_t n)
{
    if (mpz_sizeinbase(z, 2) > 127)
        throw std::overflow_error("build_tau_table: tau(" + std::to_string(n) +
                                  ") exceeds signed 128-bit range");
    u128 mag = 0;
    // export magnitude as 64-bit words, most significant first
    size_t words = 0;
    uint64_t buf[2] = {0, 0};
    mpz_export(buf, &words, -1, sizeof(uint64_t), 0, 0, z);
    if (words > 2)
        throw std::overflow_error("build_tau_table: tau(" + std::to_string(n) +
                                  ") exceeds signed 128-bit range");
    mag = ((u128)buf[1] << 64) | buf[0];
    return mpz_sgn(z) < 0 ? -(i128)mag : (i128)mag;
}

std::vector<i128> narrow_all(const MpzArray& coeff, uint64_t limit)
{
    // coeff[j] is the q^j coefficient of prod (1-q^m)^24; tau(n) = coeff[n-1]
    std::vector<i128> tau(limit);
    for (uint64_t n = 1; n <= limit; ++n) tau[n - 1] = mpz_to_i128_checked(coeff[n - 1], n);
    return tau;
}

} // namespace

TauTable::TauTable(uint64_t limit, std::vector<i128> tau)
    : limit_(limit), tau_(std::move(tau))
{
    if (limit == 0) throw std::invalid_argument("TauTable: limit must be >= 1");
    if (tau_.size() != limit) throw std::invalid_argument("TauTable: size mismatch");
    if (tau_[0] != 1) throw std::invalid_argument("TauTable: tau(1) != 1");

    lambda_.resize(limit);
    for (uint64_t n = 1; n <= limit; ++n) {
        // 64-bit mantissa keeps the final double within one ulp
        long double t = (long double)tau_[n - 1];
        lambda_[n - 1] = (double)(t * powl((long double)n, -5.5L));
    }
}

TauTable build_tau_table(uint64_t limit, unsigned threads)
{
    if (limit == 0) throw std::invalid_argument("build_tau_table: limit must be >= 1");
    if (threads == 0) threads = 1;

    const uint64_t deg = limit;  // coefficients q^0 .. q^{limit-1}
    const auto terms = pentagonal_terms(deg);

    MpzArray a(deg), b(deg);
    mpz_set_ui(a[0], 1);
    for (uint64_t j = 1; j < deg; ++j) mpz_set_ui(a[j], 0);

    for (int pass = 0; pass < 24; ++pass) {
        if (threads <= 1 || deg < 4096) {
            sparse_multiply_block(a, b, terms, 0, deg);
        } else {
            std::vector<std::thread> pool;
            uint64_t block = (deg + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                uint64_t lo = t * block;
                uint64_t hi = std::min(deg, lo + block);
                if (lo >= hi) break;
                pool.emplace_back(sparse_multiply_block, std::cref(a), std::ref(b),
                                  std::cref(terms), lo, hi);
            }
            for (auto& th : pool) th.join();
        }
        a.swap(b);
    }

    return TauTable(limit, narrow_all(a, limit));
}

std::vector<i128> tau_oracle_naive(uint64_t limit)
{
    if (limit == 0) throw std::invalid_argument("tau_oracle_naive: limit must be >= 1");
    if (limit > 5000) throw std::invalid_argument("tau_oracle_naive: limit capped at 5000");

    const uint64_t deg = limit;
    MpzArray c(deg);
    mpz_set_ui(c[0], 1);

    // multiply by (1-q^m), in place: descending n keeps old values on the right
    for (uint64_t m = 1; m <= limit; ++m) {
        for (int rep = 0; rep < 24; ++rep) {
            if (m >= deg) break;
            for (uint64_t n = deg - 1; n >= m; --n) {
                mpz_sub(c[n], c[n], c[n - m]);
                if (n == m) break;
            }
        }
    }
    return narrow_all(c, limit);
}

bool hecke_relation_check(uint64_t m, uint64_t n, const TauTable& table)
{
    if (m == 0 || n == 0) throw std::invalid_argument("hecke_relation_check: indices must be >= 1");
    if (m > table.limit() / n)
        throw std::out_of_range("hecke_relation_check: m*n exceeds table limit");

    uint64_t g = std::gcd(m, n);

    mpz_t lhs, rhs, term, p11;
    mpz_inits(lhs, rhs, term, p11, nullptr);

    auto set_i128 = [](mpz_t z, i128 v) {
        bool neg = v < 0;
        u128 mag = neg ? -(u128)v : (u128)v;
        uint64_t words[2] = {(uint64_t)mag, (uint64_t)(mag >> 64)};
        mpz_import(z, 2, -1, sizeof(uint64_t), 0, 0, words);
        if (neg) mpz_neg(z, z);
    };

    set_i128(lhs, table.tau(m * n));
    mpz_set_ui(rhs, 0);
    for (uint64_t d = 1; d <= g; ++d) {
        if (g % d != 0) continue;
        int mu = moebius_u64(d);
        if (mu == 0) continue;
        set_i128(term, table.tau(m / d));
        mpz_t tn;
        mpz_init(tn);
        set_i128(tn, table.tau(n / d));
        mpz_mul(term, term, tn);
        mpz_clear(tn);
        mpz_ui_pow_ui(p11, d, 11);
        mpz_mul(term, term, p11);
        if (mu > 0)
            mpz_add(rhs, rhs, term);
        else
            mpz_sub(rhs, rhs, term);
    }
    bool ok = mpz_cmp(lhs, rhs) == 0;
    mpz_clears(lhs, rhs, term, p11, nullptr);
    return ok;
}

DeligneReport deligne_check(const TauTable& table)
{
    ArithmeticTables arith = build_arithmetic_tables(table.limit());
    DeligneReport rep;

    mpz_t t2, bound;
    mpz_inits(t2, bound, nullptr);
    for (uint64_t n = 1; n <= table.limit(); ++n) {
        i128 t = table.tau(n);
        bool neg = t < 0;
        u128 mag = neg ? -(u128)t : (u128)t;
        uint64_t words[2] = {(uint64_t)mag, (uint64_t)(mag >> 64)};
        mpz_import(t2, 2, -1, sizeof(uint64_t), 0, 0, words);
        mpz_mul(t2, t2, t2);
        mpz_ui_pow_ui(bound, n, 11);
        uint64_t d = arith.divisors(n);
        mpz_mul_ui(bound, bound, d);
        mpz_mul_ui(bound, bound, d);
        ++rep.checked;
        if (mpz_cmp(t2, bound) > 0) rep.violations.push_back(n);
    }
    mpz_clears(t2, bound, nullptr);
    return rep;
}

double pnt_hecke_sum(uint64_t upper, const TauTable& table, const ArithmeticTables& arith)
{
    if (upper > table.limit() || upper > arith.limit())
        throw std::out_of_range("pnt_hecke_sum: upper exceeds table limits");
    KahanSum s;
    for (uint64_t n = 1; n <= upper; ++n) {
        if (arith.mangoldt_prime(n) == 0) continue;
        s.add(arith.von_mangoldt(n) * table.lambda(n));
    }
    return s.value();
}

} // namespace heckeps
