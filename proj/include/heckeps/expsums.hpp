#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heckeps/gfunc.hpp"
#include "heckeps/tau_table.hpp"

namespace heckeps {

// ---------------------------------------------------------------------------
// smooth bumps
// ---------------------------------------------------------------------------

// C-infinity transition 0 -> 1 built from exp(-1/t): sigma(t) =
// r(t) / (r(t) + r(1-t)) with r(t) = exp(-1/t) for t > 0, else 0.
double smooth_step(double t);

// One-dimensional bump: 0 outside [lo, hi], 1 on [rise_end, fall_start],
// smooth monotone ramps in between.
struct Bump1D {
    double lo, rise_end, fall_start, hi;
    double operator()(double x) const;
};

// Bump equal to 1 on [X, 2X] with support [X/2, 5X/2].
Bump1D make_scale_bump(double X);

// Cutoff equal to 1 on [N, N1] with support [N/2, 5N/2].
Bump1D make_phi(double N, double N1);

// Two-variable weight g(x, y) for the shifted-convolution sum: a tensor
// product of scale bumps, oscillation budget P declared by the caller.
struct SmoothWeightSpec {
    double X = 1.0, Y = 1.0, P = 1.0;
    Bump1D bx, by;
    double weight(double x, double y) const { return bx(x) * by(y); }
};

SmoothWeightSpec make_tensor_weight(double X, double Y);

// ---------------------------------------------------------------------------
// exponential sums
// ---------------------------------------------------------------------------

// Phase descriptor for S = sum_{N<n<=N'} [lambda(n)] e(f(n)): derivative
// budget |f^(k)(x)| <= deriv_budget * T / N^k is sampled at construction.
struct ExpSumSpec {
    std::function<double(double)> phase;
    std::function<double(double)> d1, d2, d3;
    uint64_t range_lo = 0;  // sum over range_lo < n <= range_hi
    uint64_t range_hi = 0;
    double T = 1.0;
    double deriv_budget = 8.0;

    // throws if the sampled derivative ratios exceed the budget
    void validate() const;
};

// Phase n^{iT}: f(x) = T log(x) / (2 pi).
ExpSumSpec make_log_phase_spec(uint64_t N, uint64_t N1, double T);

// Quadratic phase f(x) = x^2 / (2M) on (N, N1]; |f''| = 1/M exactly.
ExpSumSpec make_quadratic_phase_spec(uint64_t N, uint64_t N1, double M);

// Phase reduced mod 1 before exponentiation; compensated complex
// accumulation in ascending n.  weights = nullptr sums plain e(f(n)).
std::complex<double> exp_sum(const ExpSumSpec& spec, const TauTable* weights);

// van der Corput second-derivative bound alpha (N1-N) lambda^{1/2} + lambda^{-1/2}.
double vdc_bound(double lambda_min, double alpha, double N, double N1);

struct WeylCheck {
    double lhs;
    double rhs;
    bool ok;
};

// |sum z_n|^2 vs (1 + L/Q) sum_{|q|<Q} (1 - |q|/Q) sum_n z_{n+q} conj(z_n),
// window length L = z.size() (indices n = 1..L, terms with n+q outside
// [1, L] vanish).
WeylCheck weyl_difference_check(const std::vector<std::complex<double>>& z, int Q);

struct ShiftedConvolutionResult {
    double value = 0.0;     // D_g(a,b;h)
    double envelope = 0.0;  // P^{5/4} (X+Y)^{1/4} (XY)^{1/4+eps}, eps = 0.01
    double ratio = 0.0;
    uint64_t terms = 0;
    bool empty = false;
};

// D_g(a,b;h) = sum_{am -+ bn = h} lambda(m) lambda(n) w(am, bn); minus_sign
// chooses am - bn = h, otherwise am + bn = h.  Requires gcd(a,b) = 1.
ShiftedConvolutionResult shifted_convolution(uint64_t a, uint64_t b, int64_t h,
                                             bool minus_sign, const SmoothWeightSpec& w,
                                             const TauTable& table);

struct RatioReport {
    std::string label;
    double measured = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
};

// |S| with lambda weights against N^{2/3+eps} T^{5/18} + N^{5/6} T^{-5/18},
// eps = 0.01.  Requires T >= N^{3/4}.
RatioReport slemma_ratio(const ExpSumSpec& spec, const TauTable& table);

// sum_{N<n<=2N} delta(-f(n)) against J^{-1} N + J^{1/2} f(N)^{1/2}
// + J^{-1/2} N f(N)^{-1/2}.
RatioReport delta_sum_check(const AdmissibleG& g, int J, uint64_t N);

struct PerronReport {
    std::complex<double> lhs;
    std::complex<double> rhs;
    double difference = 0.0;       // |lhs - rhs|
    double normalised = 0.0;       // difference / log(2 + M)
    bool quadrature_converged = true;
};

// Both sides of the Perron-type identity
//   sum_{N<n<nu N} a_n = (2 pi)^{-1} Int_{-M}^{M} A(t) N^{it} (nu^{it}-1)/t dt
//     + O(log(2+M)),  A(t) = sum_{M<m<kappa M} a_m m^{-it},
// the integrand extended continuously through t = 0.
PerronReport perron_check(const std::function<std::complex<double>(uint64_t)>& a,
                          double M, double N, double nu, double kappa);

// ---------------------------------------------------------------------------
// shipped benchmark suites (used by the CLI and the acceptance runner)
// ---------------------------------------------------------------------------

struct SuiteRow {
    std::string params;  // comma-separated parameter cells
    double measured = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
    bool skipped = false;
};

std::vector<SuiteRow> vdc_suite();                              // 50 quadratic-phase cases
std::vector<SuiteRow> slemma_suite(const TauTable& table);      // needs limit >= 2e4
std::vector<SuiteRow> delta_suite();
std::vector<SuiteRow> shifted_suite(const TauTable& table);     // needs limit >= 2.5e3
std::vector<SuiteRow> perron_suite();

} // namespace heckeps
