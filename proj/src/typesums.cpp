#include "heckeps/typesums.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heckeps/kahan.hpp"
#include "heckeps/primality.hpp"
#include "heckeps/rng.hpp"
#include "heckeps/vaaler.hpp"

namespace heckeps {

namespace {
constexpr double kPi = std::numbers::pi;

std::complex<double> e_of(double phase)
{
    double u = phase - std::floor(phase);
    double th = 2.0 * kPi * u;
    return {std::cos(th), std::sin(th)};
}
} // namespace

std::complex<double> CoeffGen::operator()(int tag, uint64_t index) const
{
    switch (kind) {
        case CoeffKind::Ones:
            return {1.0, 0.0};
        case CoeffKind::Unimodular: {
            double u = unit_real(splitmix64(seed ^ ((uint64_t)tag << 56) ^ index));
            return {std::cos(2.0 * kPi * u), std::sin(2.0 * kPi * u)};
        }
        case CoeffKind::Structured: {
            // A and B slots carry mu(d.) lambda(.) / d(.) (so |.| <= 1); the
            // C_h slot stays unimodular
            if (tag == 3) {
                double u = unit_real(splitmix64(seed ^ ((uint64_t)tag << 56) ^ index));
                return {std::cos(2.0 * kPi * u), std::sin(2.0 * kPi * u)};
            }
            if (!tau || !arith)
                throw std::invalid_argument("CoeffGen: structured kind needs tau/arith tables");
            uint64_t scaled = d * index;
            if (scaled > arith->limit() || index > tau->limit())
                throw std::out_of_range("CoeffGen: structured index exceeds tables");
            double val = arith->moebius(scaled) * tau->lambda(index) / arith->divisors(index);
            return {val, 0.0};
        }
    }
    throw std::logic_error("CoeffGen: bad kind");
}

void TypeSumConfig::validate() const
{
    if (N == 0 || X == 0 || Y == 0) throw std::invalid_argument("TypeSumConfig: zero scale");
    if (X * Y != N) throw std::invalid_argument("TypeSumConfig: need X Y = N exactly");
    if (H < 1.0) throw std::invalid_argument("TypeSumConfig: need H >= 1");
    if (d < 1) throw std::invalid_argument("TypeSumConfig: need d >= 1");
}

namespace {

// shared triple loop; with_lambda selects K_d (lambda(n)) vs L_d (B_n)
TrilinearResult trilinear_sum(const TypeSumConfig& cfg, const AdmissibleG& g,
                              const TauTable* table, bool with_lambda)
{
    cfg.validate();
    const double Xd = (double)cfg.X / cfg.d;
    const double Yd = (double)cfg.Y / cfg.d;
    const double Nd2 = (double)cfg.N / ((double)cfg.d * cfg.d);

    TrilinearResult res;
    KahanComplexSum acc;

    const uint64_t m_lo = dyadic_lo(Xd), m_hi = dyadic_hi_excl(Xd);
    const uint64_t n_lo = dyadic_lo(Yd), n_hi = dyadic_hi_excl(Yd);
    const uint64_t h_lo = dyadic_lo(cfg.H), h_hi = dyadic_hi_excl(cfg.H);

    for (uint64_t m = m_lo; m < m_hi; ++m) {
        std::complex<double> Am = cfg.coeff(1, m);
        for (uint64_t n = n_lo; n < n_hi; ++n) {
            double mn = (double)m * (double)n;
            if (mn < Nd2 || mn >= 2.0 * Nd2) continue;  // mn ~ N/d^2
            if (with_lambda && n > table->limit())
                throw std::out_of_range("eval_Kd: n exceeds table limit");
            std::complex<double> mid =
                with_lambda ? std::complex<double>(table->lambda(n), 0.0) : cfg.coeff(2, n);
            double arg = (double)cfg.d * cfg.d * mn;
            double fval = g.f(arg);
            for (uint64_t h = h_lo; h < h_hi; ++h) {
                ++res.terms;
                acc.add(Am * mid * cfg.coeff(3, h) * e_of((double)h * fval));
            }
        }
    }
    res.value = acc.value();
    res.empty = res.terms == 0;
    return res;
}

} // namespace

TrilinearResult eval_Kd(const TypeSumConfig& cfg, const AdmissibleG& g, const TauTable& table)
{
    return trilinear_sum(cfg, g, &table, true);
}

TrilinearResult eval_Ld(const TypeSumConfig& cfg, const AdmissibleG& g)
{
    return trilinear_sum(cfg, g, nullptr, false);
}

// ---------------------------------------------------------------------------
// reduction identities
// ---------------------------------------------------------------------------

RewriteIdentityReport rewrite_identity_check(const AdmissibleG& g, uint64_t N,
                                             const TauTable& table,
                                             const ArithmeticTables& arith)
{
    uint64_t m_top = floor_g(g, N);
    if (m_top + 1 > table.limit() || m_top + 1 > arith.limit())
        throw std::out_of_range("rewrite_identity_check: tables must cover [g(N)]+1");

    RewriteIdentityReport rep;

    KahanSum lhs;
    for (uint64_t n = (uint64_t)std::ceil(g.domain_min); n <= N; ++n) {
        uint64_t m = floor_g(g, n);
        if (arith.mangoldt_prime(m) == 0) continue;
        lhs.add(arith.von_mangoldt(m) * table.lambda(m));
    }
    rep.lhs = lhs.value();

    uint64_t m_lo = (uint64_t)std::ceil(g.g(g.domain_min));
    KahanSum rhs;
    for (uint64_t m = std::max<uint64_t>(1, m_lo); m <= m_top; ++m) {
        if (arith.mangoldt_prime(m) == 0) continue;
        int64_t cnt = floor_neg_f(g, m) - floor_neg_f(g, m + 1);
        if (cnt == 0) continue;
        rhs.add((double)cnt * arith.von_mangoldt(m) * table.lambda(m));
    }
    rep.rhs = rhs.value();

    rep.difference = std::fabs(rep.lhs - rep.rhs);
    rep.slack = 4.0 * std::log(g.g((double)N)) + 4.0;
    rep.ok = rep.difference <= rep.slack;
    return rep;
}

SplitCheckReport s1_s2_split_check(const AdmissibleG& g, uint64_t N, const TauTable& table,
                                   const ArithmeticTables& arith)
{
    const double gN = g.g((double)N);
    const uint64_t lo = dyadic_lo(gN), hi = dyadic_hi_excl(gN);
    if (hi - 1 > table.limit() || hi > arith.limit())
        throw std::out_of_range("s1_s2_split_check: tables must cover 2 g(N)");

    SplitCheckReport rep;
    KahanSum S, S1, S2;
    for (uint64_t n = lo; n < hi; ++n) {
        double cnt = (double)(floor_neg_f(g, n) - floor_neg_f(g, n + 1));
        double fdiff = g.f((double)n + 1.0) - g.f((double)n);
        double psidiff = sawtooth(-g.f((double)n + 1.0)) - sawtooth(-g.f((double)n));
        ++rep.terms;
        double dev = std::fabs(cnt - (fdiff + psidiff));
        rep.worst_termwise = std::max(rep.worst_termwise, dev);
        if (dev > 1e-9) ++rep.termwise_violations;

        if (arith.mangoldt_prime(n) == 0) continue;
        double wt = arith.von_mangoldt(n) * table.lambda(n);
        S.add(cnt * wt);
        S1.add(fdiff * wt);
        S2.add(psidiff * wt);
    }
    rep.S = S.value();
    rep.S1 = S1.value();
    rep.S2 = S2.value();
    rep.split_ok = std::fabs(rep.S - (rep.S1 + rep.S2)) <=
                   1e-9 * (std::fabs(rep.S1) + std::fabs(rep.S2) + 1.0);
    return rep;
}

// ---------------------------------------------------------------------------
// grid report
// ---------------------------------------------------------------------------

std::vector<TypeSumRow> type_sum_bound_report(const std::vector<TypeSumGridPoint>& grid,
                                              const AdmissibleG& g, const TauTable& table,
                                              const ArithmeticTables& arith,
                                              double eta, uint64_t seed)
{
    std::vector<TypeSumRow> rows;
    rows.reserve(grid.size());

    for (const auto& pt : grid) {
        TypeSumRow row;
        row.point = pt;

        const double N = (double)pt.N;
        const double fN = g.f(N);
        const double e100 = 100.0 * eta;
        const double Y = (double)pt.Y;

        auto skip = [&](const std::string& why) {
            row.skipped = true;
            row.skip_reason = why;
            rows.push_back(row);
        };

        if (pt.N % pt.Y != 0) {
            skip("Y does not divide N");
            continue;
        }
        if (pt.d > 2 * pt.Y) {
            skip("d > 2Y");
            continue;
        }
        double H_max = std::pow(N, 1.0 + eta) / fN;
        if (pt.H < 1.0 || pt.H > H_max) {
            skip("H outside [1, N^{1+eta} f(N)^{-1}]");
            continue;
        }

        bool hypothesis_ok = false;
        if (pt.lemma == "L" || pt.lemma == "K-small") {
            // both need f(N) >= N^{8/9+30 eta}; Y-windows are mirrored
            if (fN >= std::pow(N, 8.0 / 9.0 + 30.0 * eta)) {
                double lo, hi;
                if (pt.lemma == "L") {
                    lo = std::pow(N, 2.0 + e100) / (fN * fN);
                    hi = std::pow(fN, 6.0) / std::pow(N, 5.0 + e100);
                } else {
                    lo = std::pow(N, 6.0 + e100) / std::pow(fN, 6.0);
                    hi = fN * fN / std::pow(N, 1.0 + e100);
                }
                hypothesis_ok = lo <= Y && Y <= hi;
                if (!hypothesis_ok) {
                    skip("Y outside window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
                    continue;
                }
            } else {
                skip("f(N) < N^{8/9+30 eta}");
                continue;
            }
        } else if (pt.lemma == "K-large") {
            if (fN < std::pow(N, 0.75 + 10.0 * eta)) {
                skip("f(N) < N^{3/4+10 eta}");
                continue;
            }
            double lo = std::pow(N, 23.0 / 6.0 + e100) * std::pow(fN, -3.0);
            if (!(Y >= lo)) {
                skip("Y below N^{23/6+100 eta} f(N)^{-3}");
                continue;
            }
        } else {
            skip("unknown lemma tag '" + pt.lemma + "'");
            continue;
        }

        TypeSumConfig cfg;
        cfg.N = pt.N;
        cfg.Y = pt.Y;
        cfg.X = pt.N / pt.Y;
        cfg.H = pt.H;
        cfg.d = pt.d;
        cfg.eta = eta;
        cfg.coeff = CoeffGen{pt.coeff, seed, pt.d, &table, &arith};

        TrilinearResult r = (pt.lemma == "L") ? eval_Ld(cfg, g) : eval_Kd(cfg, g, table);
        row.measured = std::abs(r.value);
        row.envelope = std::pow(N, 1.0 - 3.0 * eta) / (double)pt.d;
        row.ratio = row.measured / row.envelope;
        rows.push_back(row);
    }
    return rows;
}

std::vector<TypeSumGridPoint> default_typesum_grid()
{
    std::vector<TypeSumGridPoint> grid;
    // c = 1.02 at N = 1e4: L-window [N^0.139, N^0.78], K-small window
    // [N^0.218, N^0.861], K-large needs Y >= N^0.992
    for (uint64_t Y : {50ULL, 100ULL, 500ULL})
        for (uint64_t d : {1ULL, 2ULL})
            grid.push_back({"L", 10000, Y, d, 1.0, CoeffKind::Unimodular});
    for (uint64_t Y : {100ULL, 1000ULL})
        for (uint64_t d : {1ULL, 2ULL, 4ULL, 8ULL})
            grid.push_back({"K-small", 10000, Y, d, 1.0, CoeffKind::Unimodular});
    for (uint64_t d : {1ULL, 2ULL})
        grid.push_back({"K-large", 10000, 10000, d, 1.0, CoeffKind::Unimodular});
    // structured coefficients on one admissible point per kind
    grid.push_back({"L", 10000, 100, 1, 1.0, CoeffKind::Structured});
    grid.push_back({"K-small", 10000, 100, 1, 1.0, CoeffKind::Ones});
    // hypothesis-violating points, expected SKIPPED
    grid.push_back({"L", 10000, 2, 1, 1.0, CoeffKind::Unimodular});
    grid.push_back({"K-large", 10000, 100, 1, 1.0, CoeffKind::Unimodular});
    return grid;
}

// ---------------------------------------------------------------------------
// parameter machinery
// ---------------------------------------------------------------------------

UVZParams compute_uvz_values(uint64_t N, const AdmissibleG& g, double eta)
{
    const double Nd = (double)N;
    const double fN = g.f(Nd);
    const double e100 = 100.0 * eta;
    UVZParams p;
    p.u = std::pow(Nd, 2.0 + e100) / (fN * fN);
    p.v = 4.0 * std::cbrt(Nd);
    p.z = std::floor(fN * std::pow(Nd, -0.5 - e100)) + 0.5;
    return p;
}

UVZParams choose_uvz(uint64_t N, const AdmissibleG& g, double eta)
{
    const double Nd = (double)N;
    const double fN = g.f(Nd);
    const double e100 = 100.0 * eta;
    UVZParams p = compute_uvz_values(N, g, eta);

    // relative slack absorbs float representation only (v^3 = 64N is an
    // exact-equality boundary for the canonical v)
    const double s = 1e-9;
    std::vector<std::string> violated;
    if (fN < std::pow(Nd, 29.0 / 30.0 + e100) * (1 - s))
        violated.push_back("f(N) >= N^{29/30+100 eta}");
    if (!(3.0 <= p.u * (1 + s))) violated.push_back("3 <= u");
    if (!(p.u < p.v)) violated.push_back("u < v");
    if (!(p.v < p.z)) violated.push_back("v < z");
    if (!(p.z < 2.0 * Nd)) violated.push_back("z < 2N");
    if (!(p.z >= 4.0 * p.u * p.u * (1 - s))) violated.push_back("z >= 4u^2");
    if (!(Nd >= 32.0 * p.z * p.z * p.u * (1 - s))) violated.push_back("N >= 32 z^2 u");
    if (!(p.v * p.v * p.v >= 64.0 * Nd * (1 - s))) violated.push_back("v^3 >= 64N");

    if (!violated.empty()) {
        std::ostringstream os;
        os << "choose_uvz: constraints violated at N=" << N << ", eta=" << eta << ":";
        for (const auto& c : violated) os << " [" << c << "]";
        throw uvz_constraint_error(os.str());
    }
    return p;
}

// ---------------------------------------------------------------------------
// cancellation experiment
// ---------------------------------------------------------------------------

std::vector<RunRecord> main_theorem_experiment(const AdmissibleG& g,
                                               const std::vector<uint64_t>& N_grid,
                                               const TauTable& table, double C,
                                               bool record_timing)
{
    std::vector<RunRecord> out;
    for (uint64_t N : N_grid) {
        auto t0 = std::chrono::steady_clock::now();
        uint64_t m_top = floor_g(g, N);
        if (m_top > table.limit())
            throw std::out_of_range("main_theorem_experiment: table does not cover [g(N)]");

        RunRecord rec;
        rec.g_label = g.description;
        rec.N = N;

        KahanSum A, maj;
        for (const auto& hit : enumerate_floor_prime_hits(g, N)) {
            ++rec.hits;
            double lam = table.lambda(hit.m);
            A.add(lam);
            maj.add(std::fabs(lam));
        }
        rec.A = A.value();
        rec.majorant = maj.value();
        rec.quotient = rec.hits ? std::fabs(rec.A) / rec.majorant : 0.0;
        rec.envelope = (double)N * std::exp(-C * std::sqrt(std::log((double)N)));
        if (std::fabs(rec.A) > rec.majorant * (1.0 + 1e-12))
            throw std::logic_error("main_theorem_experiment: |A| > majorant");

        auto t1 = std::chrono::steady_clock::now();
        rec.seconds = record_timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
        out.push_back(rec);
    }
    return out;
}

} // namespace heckeps
