#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "heckeps/arithmetic_tables.hpp"
#include "heckeps/gfunc.hpp"
#include "heckeps/tau_table.hpp"

namespace heckeps {

// Dyadic convention: k ~ K enumerates integers in [K, 2K).
inline uint64_t dyadic_lo(double K) { return (uint64_t)std::ceil(K); }
inline uint64_t dyadic_hi_excl(double K) { return (uint64_t)std::ceil(2.0 * K); }

// ---------------------------------------------------------------------------
// coefficient generators
// ---------------------------------------------------------------------------

enum class CoeffKind {
    Ones,        // A_m = 1
    Unimodular,  // A_m = e(u), u hashed from (seed, tag, m)
    Structured,  // A_m = mu(d m) lambda(m) / d(m)  (Moebius-weighted Hecke products)
};

// Bounded coefficient sequences |A_m|, |B_n|, |C_h| <= 1.  The structured
// kind needs tau/arith tables covering d * (index range).
struct CoeffGen {
    CoeffKind kind = CoeffKind::Ones;
    uint64_t seed = 12345;
    uint64_t d = 1;
    const TauTable* tau = nullptr;
    const ArithmeticTables* arith = nullptr;

    std::complex<double> operator()(int tag, uint64_t index) const;
};

// ---------------------------------------------------------------------------
// trilinear sums of Lemma-4.1 type
// ---------------------------------------------------------------------------

struct TypeSumConfig {
    uint64_t N = 0;         // scale, X * Y = N exactly
    uint64_t X = 0;
    uint64_t Y = 0;
    double H = 1.0;         // frequency range h ~ H
    uint64_t d = 1;
    double eta = 1e-3;
    uint64_t Q = 1;         // Weyl-shift length (reporting metadata)
    CoeffGen coeff;

    void validate() const;  // XY = N, d >= 1, H >= 1
};

struct TrilinearResult {
    std::complex<double> value{0.0, 0.0};
    uint64_t terms = 0;
    bool empty = false;
};

// K_d = sum_{m ~ X/d} sum_{n ~ Y/d, mn ~ N/d^2} sum_{h ~ H}
//         A_m C_h lambda(n) e(h f(d^2 m n))
TrilinearResult eval_Kd(const TypeSumConfig& cfg, const AdmissibleG& g, const TauTable& table);

// L_d = same ranges with A_m B_n C_h e(h f(d^2 m n))
TrilinearResult eval_Ld(const TypeSumConfig& cfg, const AdmissibleG& g);

// ---------------------------------------------------------------------------
// reduction identities
// ---------------------------------------------------------------------------

struct RewriteIdentityReport {
    double lhs = 0.0;   // sum_{n<=N} Lambda([g(n)]) lambda([g(n)])
    double rhs = 0.0;   // sum_m ([-f(m)] - [-f(m+1)]) Lambda(m) lambda(m)
    double difference = 0.0;
    double slack = 0.0;  // 4 log g(N) + 4
    bool ok = false;
};

RewriteIdentityReport rewrite_identity_check(const AdmissibleG& g, uint64_t N,
                                             const TauTable& table,
                                             const ArithmeticTables& arith);

struct SplitCheckReport {
    uint64_t terms = 0;
    uint64_t termwise_violations = 0;  // of [-f(n)]-[-f(n+1)] = (f(n+1)-f(n)) + psi-difference
    double worst_termwise = 0.0;
    double S = 0.0, S1 = 0.0, S2 = 0.0;
    bool split_ok = false;  // S = S1 + S2 within 1e-9 (|S1|+|S2|+1)
    bool ok() const { return termwise_violations == 0 && split_ok; }
};

// Exact floor/saw-tooth identity termwise over n ~ g(N), then S = S1 + S2.
SplitCheckReport s1_s2_split_check(const AdmissibleG& g, uint64_t N, const TauTable& table,
                                   const ArithmeticTables& arith);

// ---------------------------------------------------------------------------
// bound-ratio report over a parameter grid
// ---------------------------------------------------------------------------

struct TypeSumGridPoint {
    std::string lemma;   // "L", "K-small", "K-large"
    uint64_t N = 0;
    uint64_t Y = 0;
    uint64_t d = 1;
    double H = 1.0;
    CoeffKind coeff = CoeffKind::Unimodular;
};

struct TypeSumRow {
    TypeSumGridPoint point;
    bool skipped = false;
    std::string skip_reason;
    double measured = 0.0;
    double envelope = 0.0;  // N^{1-3 eta} / d
    double ratio = 0.0;
};

// Per-lemma hypothesis gates (f(N) lower bound, H-range, Y-window); points
// violating them are SKIPPED, not failed.
std::vector<TypeSumRow> type_sum_bound_report(const std::vector<TypeSumGridPoint>& grid,
                                              const AdmissibleG& g, const TauTable& table,
                                              const ArithmeticTables& arith,
                                              double eta, uint64_t seed);

std::vector<TypeSumGridPoint> default_typesum_grid();

// ---------------------------------------------------------------------------
// parameter machinery and the cancellation experiment
// ---------------------------------------------------------------------------

struct UVZParams {
    double u = 0.0, v = 0.0, z = 0.0;
};

// The canonical formulas u = N^{2+100 eta} f(N)^{-2}, v = 4 N^{1/3},
// z = [f(N) N^{-1/2-100 eta}] + 1/2, without validation.
UVZParams compute_uvz_values(uint64_t N, const AdmissibleG& g, double eta);

// Same values validated against the admissibility window
// f(N) >= N^{29/30+100 eta} and 3 <= u < v < z < 2N, z - 1/2 integral,
// z >= 4u^2, N >= 32 z^2 u, v^3 >= 64 N.  Throws uvz_constraint_error naming
// every violated inequality.
UVZParams choose_uvz(uint64_t N, const AdmissibleG& g, double eta);

struct uvz_constraint_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunRecord {
    std::string g_label;
    uint64_t N = 0;
    uint64_t hits = 0;
    double A = 0.0;          // sum of lambda(m) over prime hits
    double majorant = 0.0;   // sum |lambda(m)|
    double quotient = 0.0;   // |A| / majorant (0 when no hits)
    double envelope = 0.0;   // N exp(-C sqrt(log N))
    double seconds = 0.0;
};

std::vector<RunRecord> main_theorem_experiment(const AdmissibleG& g,
                                               const std::vector<uint64_t>& N_grid,
                                               const TauTable& table, double C,
                                               bool record_timing = false);

} // namespace heckeps
