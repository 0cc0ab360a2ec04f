#include "heckeps/expsums.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "heckeps/kahan.hpp"
#include "heckeps/vaaler.hpp"

namespace heckeps {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEnvelopeEps = 0.01;

std::complex<double> e_of(double phase)
{
    double u = phase - std::floor(phase);  // reduce mod 1 first
    double th = 2.0 * kPi * u;
    return {std::cos(th), std::sin(th)};
}
} // namespace

// ---------------------------------------------------------------------------
// bumps
// ---------------------------------------------------------------------------

double smooth_step(double t)
{
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double r0 = std::exp(-1.0 / t);
    double r1 = std::exp(-1.0 / (1.0 - t));
    return r0 / (r0 + r1);
}

double Bump1D::operator()(double x) const
{
    if (x <= lo || x >= hi) return 0.0;
    if (x < rise_end) return smooth_step((x - lo) / (rise_end - lo));
    if (x > fall_start) return smooth_step((hi - x) / (hi - fall_start));
    return 1.0;
}

Bump1D make_scale_bump(double X)
{
    return Bump1D{X / 2.0, X, 2.0 * X, 5.0 * X / 2.0};
}

Bump1D make_phi(double N, double N1)
{
    return Bump1D{N / 2.0, N, N1, 5.0 * N / 2.0};
}

SmoothWeightSpec make_tensor_weight(double X, double Y)
{
    SmoothWeightSpec w;
    w.X = X;
    w.Y = Y;
    w.P = 1.0;
    w.bx = make_scale_bump(X);
    w.by = make_scale_bump(Y);
    return w;
}

// ---------------------------------------------------------------------------
// exp sums
// ---------------------------------------------------------------------------

void ExpSumSpec::validate() const
{
    if (range_hi <= range_lo)
        throw std::invalid_argument("ExpSumSpec: empty range");
    if (range_hi > 2 * range_lo && range_lo > 0)
        throw std::invalid_argument("ExpSumSpec: need N < N' <= 2N");
    if (T < 1.0) throw std::invalid_argument("ExpSumSpec: need T >= 1");

    double N = (double)range_lo;
    if (N < 1.0) N = 1.0;
    const std::function<double(double)>* ds[3] = {&d1, &d2, &d3};
    for (int k = 1; k <= 3; ++k) {
        if (!*ds[k - 1]) continue;
        for (int i = 0; i <= 32; ++i) {
            double x = N / 2.0 + (3.0 * N - N / 2.0) * i / 32.0;
            double r = std::fabs((*ds[k - 1])(x)) * std::pow(N, k) / T;
            if (r > deriv_budget)
                throw std::invalid_argument("ExpSumSpec: derivative ratio " + std::to_string(r) +
                                            " at k=" + std::to_string(k) +
                                            " exceeds budget");
        }
    }
}

ExpSumSpec make_log_phase_spec(uint64_t N, uint64_t N1, double T)
{
    ExpSumSpec s;
    s.phase = [T](double x) { return T * std::log(x) / (2.0 * kPi); };
    s.d1 = [T](double x) { return T / (2.0 * kPi * x); };
    s.d2 = [T](double x) { return -T / (2.0 * kPi * x * x); };
    s.d3 = [T](double x) { return 2.0 * T / (2.0 * kPi * x * x * x); };
    s.range_lo = N;
    s.range_hi = N1;
    s.T = T;
    s.validate();
    return s;
}

ExpSumSpec make_quadratic_phase_spec(uint64_t N, uint64_t N1, double M)
{
    ExpSumSpec s;
    s.phase = [M](double x) { return x * x / (2.0 * M); };
    s.d1 = [M](double x) { return x / M; };
    s.d2 = [M](double) { return 1.0 / M; };
    s.d3 = [](double) { return 0.0; };
    s.range_lo = N;
    s.range_hi = N1;
    s.T = std::max(1.0, (double)N1 * (double)N1 / (2.0 * M));
    s.deriv_budget = 16.0;
    s.validate();
    return s;
}

std::complex<double> exp_sum(const ExpSumSpec& spec, const TauTable* weights)
{
    if (weights && spec.range_hi > weights->limit())
        throw std::out_of_range("exp_sum: range exceeds table limit");
    KahanComplexSum acc;
    for (uint64_t n = spec.range_lo + 1; n <= spec.range_hi; ++n) {
        std::complex<double> term = e_of(spec.phase((double)n));
        if (weights) term *= weights->lambda(n);
        acc.add(term);
    }
    return acc.value();
}

double vdc_bound(double lambda_min, double alpha, double N, double N1)
{
    if (!(lambda_min > 0.0)) throw std::invalid_argument("vdc_bound: lambda must be > 0");
    if (!(alpha >= 1.0)) throw std::invalid_argument("vdc_bound: alpha must be >= 1");
    if (!(N1 >= N + 1.0)) throw std::invalid_argument("vdc_bound: need N1 >= N+1");
    return alpha * (N1 - N) * std::sqrt(lambda_min) + 1.0 / std::sqrt(lambda_min);
}

WeylCheck weyl_difference_check(const std::vector<std::complex<double>>& z, int Q)
{
    if (Q < 1) throw std::invalid_argument("weyl_difference_check: Q must be >= 1");
    const int L = (int)z.size();

    KahanComplexSum total;
    for (const auto& v : z) total.add(v);
    double lhs = std::norm(total.value());

    // q = 0 plus conjugate pairs; the pairing keeps rhs exactly real
    KahanSum corr;
    for (int n = 0; n < L; ++n) corr.add(std::norm(z[n]));
    double rhs_inner = corr.value();
    for (int q = 1; q < Q; ++q) {
        KahanComplexSum sq;
        for (int n = 0; n + q < L; ++n) sq.add(z[n + q] * std::conj(z[n]));
        rhs_inner += (1.0 - (double)q / Q) * 2.0 * sq.value().real();
    }
    double rhs = (1.0 + (double)L / Q) * rhs_inner;

    return {lhs, rhs, lhs <= rhs + 1e-9 * std::fabs(rhs)};
}

ShiftedConvolutionResult shifted_convolution(uint64_t a, uint64_t b, int64_t h,
                                             bool minus_sign, const SmoothWeightSpec& w,
                                             const TauTable& table)
{
    if (a < 1 || b < 1) throw std::invalid_argument("shifted_convolution: a, b must be >= 1");
    if (std::gcd(a, b) != 1) throw std::invalid_argument("shifted_convolution: need gcd(a,b) = 1");
    if (h == 0) throw std::invalid_argument("shifted_convolution: h must be nonzero");

    ShiftedConvolutionResult res;
    res.envelope = std::pow(w.P, 1.25) * std::pow(w.X + w.Y, 0.25) *
                   std::pow(w.X * w.Y, 0.25 + kEnvelopeEps);

    // m ranges over the x-support of w; n solved from am -+ bn = h
    uint64_t m_lo = (uint64_t)std::max(1.0, std::ceil(w.bx.lo / (double)a));
    uint64_t m_hi = (uint64_t)std::floor(w.bx.hi / (double)a);
    if (m_hi > table.limit()) throw std::out_of_range("shifted_convolution: weight support exceeds table");

    KahanSum acc;
    for (uint64_t m = m_lo; m <= m_hi; ++m) {
        int64_t bn = minus_sign ? (int64_t)(a * m) - h : h - (int64_t)(a * m);
        if (bn <= 0 || bn % (int64_t)b != 0) continue;
        uint64_t n = (uint64_t)(bn / (int64_t)b);
        double x = (double)(a * m), y = (double)bn;
        if (y <= w.by.lo || y >= w.by.hi) continue;
        if (n > table.limit()) throw std::out_of_range("shifted_convolution: n exceeds table");
        ++res.terms;
        acc.add(table.lambda(m) * table.lambda(n) * w.weight(x, y));
    }
    res.value = acc.value();
    res.empty = res.terms == 0;
    res.ratio = std::fabs(res.value) / res.envelope;
    return res;
}

RatioReport slemma_ratio(const ExpSumSpec& spec, const TauTable& table)
{
    double N = (double)spec.range_lo;
    if (spec.T < std::pow(N, 0.75))
        throw std::invalid_argument("slemma_ratio: need T >= N^{3/4}");

    RatioReport rep;
    rep.label = "slemma N=" + std::to_string(spec.range_lo) + " T=" + std::to_string(spec.T);
    rep.measured = std::abs(exp_sum(spec, &table));
    rep.envelope = std::pow(N, 2.0 / 3.0 + kEnvelopeEps) * std::pow(spec.T, 5.0 / 18.0) +
                   std::pow(N, 5.0 / 6.0) * std::pow(spec.T, -5.0 / 18.0);
    rep.ratio = rep.measured / rep.envelope;
    return rep;
}

RatioReport delta_sum_check(const AdmissibleG& g, int J, uint64_t N)
{
    if (J < 1) throw std::invalid_argument("delta_sum_check: J must be >= 1");
    VaalerApprox approx(J);

    KahanSum acc;
    for (uint64_t n = N + 1; n <= 2 * N; ++n)
        acc.add(approx.eval(-g.f((double)n)).delta);

    double fN = g.f((double)N);
    RatioReport rep;
    rep.label = "delta " + g.description + " J=" + std::to_string(J) + " N=" + std::to_string(N);
    rep.measured = acc.value();
    rep.envelope = (double)N / J + std::sqrt((double)J * fN) + (double)N / std::sqrt((double)J * fN);
    rep.ratio = rep.measured / rep.envelope;
    return rep;
}

PerronReport perron_check(const std::function<std::complex<double>(uint64_t)>& a,
                          double M, double N, double nu, double kappa)
{
    if (!(0 < M && M <= N && N < nu * N && nu * N < kappa * M))
        throw std::invalid_argument("perron_check: need 0 < M <= N < nu N < kappa M");

    PerronReport rep;

    KahanComplexSum lhs;
    for (uint64_t n = (uint64_t)std::floor(N) + 1; n < nu * N; ++n) {
        if ((double)n <= N) continue;
        lhs.add(a(n));
    }
    rep.lhs = lhs.value();

    // Dirichlet polynomial over (M, kappa M)
    std::vector<uint64_t> ms;
    for (uint64_t m = (uint64_t)std::floor(M) + 1; m < kappa * M; ++m)
        if ((double)m > M) ms.push_back(m);

    const double lnu = std::log(nu);
    auto integrand = [&](double t) -> std::complex<double> {
        KahanComplexSum A;
        for (uint64_t m : ms) {
            double th = -t * std::log((double)m);
            A.add(a(m) * std::complex<double>(std::cos(th), std::sin(th)));
        }
        // (nu^{it} - 1)/t, continuous at t = 0
        std::complex<double> factor;
        if (std::fabs(t * lnu) < 1e-5) {
            double th = t * lnu;
            factor = std::complex<double>(0.0, lnu) *
                     (std::complex<double>(1.0, th / 2.0) - th * th / 6.0);
        } else {
            factor = (std::complex<double>(std::cos(t * lnu), std::sin(t * lnu)) - 1.0) / t;
        }
        double thN = t * std::log(N);
        return A.value() * std::complex<double>(std::cos(thN), std::sin(thN)) * factor;
    };

    double error_est = 0.0;
    std::complex<double> integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, -M, M, 12, 1e-10, &error_est);
    rep.quadrature_converged = error_est < 1e-6 * (1.0 + std::abs(integral));

    rep.rhs = integral / (2.0 * kPi);
    rep.difference = std::abs(rep.lhs - rep.rhs);
    rep.normalised = rep.difference / std::log(2.0 + M);
    return rep;
}

// ---------------------------------------------------------------------------
// shipped suites
// ---------------------------------------------------------------------------

std::vector<SuiteRow> vdc_suite()
{
    std::vector<SuiteRow> rows;
    const double Ms[] = {10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
    const uint64_t Ns[] = {100, 200, 500, 1000, 2000};
    for (double M : Ms) {
        for (uint64_t N : Ns) {
            ExpSumSpec spec = make_quadratic_phase_spec(N, 2 * N, M);
            double measured = std::abs(exp_sum(spec, nullptr));
            double envelope = vdc_bound(1.0 / M, 1.0, (double)N, (double)(2 * N));
            rows.push_back({"M=" + std::to_string((long long)M) + ",N=" + std::to_string(N),
                            measured, envelope, measured / envelope, false});
        }
    }
    return rows;
}

std::vector<SuiteRow> slemma_suite(const TauTable& table)
{
    std::vector<SuiteRow> rows;
    struct Case {
        uint64_t N;
        double T;
    };
    const Case cases[] = {
        {1000, std::pow(1000.0, 0.75)},
        {1000, 1000.0},
        {10000, std::pow(10000.0, 0.75)},
        {10000, 10000.0},
    };
    for (const auto& c : cases) {
        RatioReport r = slemma_ratio(make_log_phase_spec(c.N, 2 * c.N, c.T), table);
        rows.push_back({"N=" + std::to_string(c.N) + ",T=" + std::to_string(c.T),
                        r.measured, r.envelope, r.ratio, false});
    }
    return rows;
}

std::vector<SuiteRow> delta_suite()
{
    std::vector<SuiteRow> rows;
    struct Case {
        const char* g;
        int J;
        uint64_t N;
    };
    // J = 2 at (power:1.05, N=1e4) is round(g(N)/N * N^eta) with eta = 1e-3
    const Case cases[] = {
        {"identity", 1, 10000},  {"identity", 8, 10000},
        {"power:1.05", 1, 10000}, {"power:1.05", 2, 10000},
        {"power:1.05", 8, 10000}, {"power:1.05", 32, 10000},
        {"power:1.02", 2, 10000},
    };
    for (const auto& c : cases) {
        RatioReport r = delta_sum_check(parse_g_selector(c.g), c.J, c.N);
        rows.push_back({std::string("g=") + c.g + ",J=" + std::to_string(c.J) +
                            ",N=" + std::to_string(c.N),
                        r.measured, r.envelope, r.ratio, false});
    }
    return rows;
}

std::vector<SuiteRow> shifted_suite(const TauTable& table)
{
    std::vector<SuiteRow> rows;
    SmoothWeightSpec w = make_tensor_weight(1000.0, 1000.0);
    for (int64_t h = 1; h <= 100; ++h) {
        auto r = shifted_convolution(1, 1, h, true, w, table);
        rows.push_back({"a=1,b=1,h=" + std::to_string(h), r.value, r.envelope, r.ratio, false});
    }
    return rows;
}

std::vector<SuiteRow> perron_suite()
{
    std::vector<SuiteRow> rows;
    auto ones = [](uint64_t) { return std::complex<double>(1.0, 0.0); };
    auto alt = [](uint64_t m) { return std::complex<double>(m % 2 ? -1.0 : 1.0, 0.0); };

    struct Case {
        const char* name;
        std::function<std::complex<double>(uint64_t)> a;
    };
    const Case cases[] = {{"ones", ones}, {"alternating", alt}};
    for (const auto& c : cases) {
        PerronReport r = perron_check(c.a, 20.0, 20.0, 1.5, 4.0);
        rows.push_back({std::string("a=") + c.name + ",M=20,N=20,nu=1.5,kappa=4",
                        r.difference, std::log(22.0), r.normalised, false});
    }
    return rows;
}

} // namespace heckeps
