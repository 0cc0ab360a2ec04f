#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "heckeps/rng.hpp"
#include "heckeps/tableio.hpp"
#include "heckeps/typesums.hpp"

using namespace heckeps;

namespace {
constexpr double kPi = std::numbers::pi;

// independently coded nested-loop oracle: loop order h, n, m; plain
// (uncompensated) accumulation; its own phase arithmetic
std::complex<double> oracle_trilinear(const TypeSumConfig& cfg, const AdmissibleG& g,
                                      const TauTable* table, bool with_lambda)
{
    auto in_dyadic = [](double v, double K) { return v >= K && v < 2.0 * K; };
    std::complex<double> total{0.0, 0.0};
    double Xd = (double)cfg.X / cfg.d, Yd = (double)cfg.Y / cfg.d;
    double Nd2 = (double)cfg.N / ((double)cfg.d * cfg.d);
    for (uint64_t h = 1; h <= (uint64_t)(2.0 * cfg.H) + 1; ++h) {
        if (!in_dyadic((double)h, cfg.H)) continue;
        for (uint64_t n = 1; n <= (uint64_t)(2.0 * Yd) + 1; ++n) {
            if (!in_dyadic((double)n, Yd)) continue;
            for (uint64_t m = 1; m <= (uint64_t)(2.0 * Xd) + 1; ++m) {
                if (!in_dyadic((double)m, Xd)) continue;
                if (!in_dyadic((double)m * (double)n, Nd2)) continue;
                double theta = 2.0 * kPi * (double)h * g.f((double)(cfg.d * cfg.d * m * n));
                std::complex<double> ph(std::cos(theta), std::sin(theta));
                std::complex<double> mid =
                    with_lambda ? std::complex<double>(table->lambda(n), 0.0) : cfg.coeff(2, n);
                total += cfg.coeff(1, m) * mid * cfg.coeff(3, h) * ph;
            }
        }
    }
    return total;
}

} // namespace

TEST_CASE("eval_Kd / eval_Ld: degenerate shapes")
{
    AdmissibleG g = make_power_g(1.05);
    TauTable t = build_tau_table(64);

    // singleton ranges: one term A_1 B_1 C_1 e(f(1)); f(1) = 1
    TypeSumConfig cfg;
    cfg.N = 1;
    cfg.X = 1;
    cfg.Y = 1;
    cfg.H = 1.0;
    cfg.d = 1;
    cfg.coeff = CoeffGen{CoeffKind::Ones, 1, 1, nullptr, nullptr};
    auto one = eval_Ld(cfg, g);
    CHECK(one.terms == 1);
    CHECK(one.value.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.value.imag() == doctest::Approx(0.0).epsilon(1e-12));

    // m-range empty after division by d: 0 with the empty flag
    TypeSumConfig empty = cfg;
    empty.N = 4;
    empty.X = 1;
    empty.Y = 4;
    empty.d = 2;
    auto e = eval_Kd(empty, g, t);
    CHECK(e.empty);
    CHECK(e.value == std::complex<double>(0.0, 0.0));

    // zero coefficients: value 0
    TypeSumConfig zc = cfg;
    zc.N = 16;
    zc.X = 4;
    zc.Y = 4;
    zc.coeff.kind = CoeffKind::Structured;  // needs tables
    CHECK_THROWS_AS(eval_Ld(zc, g), std::invalid_argument);

    CHECK_THROWS_AS([&] {
        TypeSumConfig bad = cfg;
        bad.X = 3;  // XY != N
        eval_Ld(bad, g);
    }(), std::invalid_argument);
}

TEST_CASE("eval_Kd: d=1 matches a 3-per-axis direct enumeration")
{
    AdmissibleG id = make_power_g(1.0);
    TauTable t = build_tau_table(64);
    TypeSumConfig cfg;
    cfg.N = 16;
    cfg.X = 4;
    cfg.Y = 4;
    cfg.H = 1.0;
    cfg.d = 1;
    cfg.coeff = CoeffGen{CoeffKind::Ones, 1, 1, nullptr, nullptr};

    // m, n in {4,5,6,7}, mn in [16,32), h = 1; f identity so e(mn)=1
    std::complex<double> direct{0, 0};
    int count = 0;
    for (int m = 4; m <= 7; ++m)
        for (int n = 4; n <= 7; ++n)
            if (m * n >= 16 && m * n < 32) {
                direct += std::complex<double>(t.lambda(n), 0.0);
                ++count;
            }
    auto got = eval_Kd(cfg, id, t);
    CHECK((int)got.terms == count);
    CHECK(std::abs(got.value - direct) <= 1e-12);
}

TEST_CASE("oracle equivalence on random small configurations")
{
    AdmissibleG g = make_power_g(1.05);
    TauTable t = build_tau_table(2048);
    ArithmeticTables arith = build_arithmetic_tables(4096);

    Rng rng(20260810);
    for (int trial = 0; trial < 40; ++trial) {
        TypeSumConfig cfg;
        cfg.X = rng.next_range(1, 16);
        cfg.Y = rng.next_range(1, 16);
        cfg.N = cfg.X * cfg.Y;
        cfg.H = 1.0 + rng.next_unit() * 7.0;
        cfg.d = rng.next_range(1, 3);
        CoeffKind kind = trial % 3 == 0   ? CoeffKind::Ones
                         : trial % 3 == 1 ? CoeffKind::Unimodular
                                          : CoeffKind::Structured;
        cfg.coeff = CoeffGen{kind, rng.next_u64(), cfg.d, &t, &arith};

        auto kd = eval_Kd(cfg, g, t);
        auto kd_oracle = oracle_trilinear(cfg, g, &t, true);
        CHECK(std::abs(kd.value - kd_oracle) <= 1e-10);

        auto ld = eval_Ld(cfg, g);
        auto ld_oracle = oracle_trilinear(cfg, g, nullptr, false);
        CHECK(std::abs(ld.value - ld_oracle) <= 1e-10);
    }
}

TEST_CASE("coefficient generators stay bounded by 1")
{
    TauTable t = build_tau_table(512);
    ArithmeticTables arith = build_arithmetic_tables(1024);
    for (CoeffKind k : {CoeffKind::Ones, CoeffKind::Unimodular, CoeffKind::Structured}) {
        CoeffGen gen{k, 7, 2, &t, &arith};
        for (int tag : {1, 2, 3})
            for (uint64_t i = 1; i <= 256; ++i) CHECK(std::abs(gen(tag, i)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("rewrite identity: identity g is exact, power g within the slack")
{
    TauTable t = build_tau_table(1500);
    ArithmeticTables arith = build_arithmetic_tables(1500);
    AdmissibleG id = make_power_g(1.0);

    auto rep = rewrite_identity_check(id, 1000, t, arith);
    CHECK(rep.difference == 0.0);
    CHECK(rep.ok);

    AdmissibleG g = make_power_g(1.05);
    auto rep2 = rewrite_identity_check(g, 1000, t, arith);
    CHECK(rep2.ok);
    CHECK(rep2.slack == doctest::Approx(4.0 * std::log(g.g(1000.0)) + 4.0));

    CHECK_THROWS_AS(rewrite_identity_check(g, 1400, t, arith), std::out_of_range);
}

TEST_CASE("s1/s2 split: termwise identity and the sum split")
{
    TauTable t = build_tau_table(4500);
    ArithmeticTables arith = build_arithmetic_tables(4500);

    AdmissibleG id = make_power_g(1.0);
    auto rep = s1_s2_split_check(id, 1000, t, arith);
    CHECK(rep.termwise_violations == 0);
    CHECK(rep.split_ok);
    CHECK(rep.S2 == 0.0);  // psi(-n) is constant for integer f

    AdmissibleG g = make_power_g(1.05);
    auto rep2 = s1_s2_split_check(g, 1000, t, arith);  // n ~ g(1000) = 1412..2825
    CHECK(rep2.termwise_violations == 0);
    CHECK(rep2.split_ok);
    CHECK(rep2.terms > 1000);
}

TEST_CASE("type_sum_bound_report: gates and ratios on the default grid")
{
    AdmissibleG g = make_power_g(1.02);
    TauTable t = build_tau_table(20000);
    ArithmeticTables arith = build_arithmetic_tables(20000);

    auto rows = type_sum_bound_report(default_typesum_grid(), g, t, arith, 1e-3, 12345);
    REQUIRE(!rows.empty());

    int skipped = 0, ran = 0;
    for (const auto& r : rows) {
        if (r.skipped) {
            ++skipped;
            CHECK(!r.skip_reason.empty());
        } else {
            ++ran;
            CHECK(r.envelope > 0.0);
            CHECK(r.ratio < 10.0);
        }
    }
    CHECK(skipped >= 2);  // the grid ships deliberate hypothesis violations
    CHECK(ran >= 10);

    // identity g fails every f(N) lower bound: all points skipped
    auto rows_id = type_sum_bound_report({{"L", 10000, 100, 1, 1.0, CoeffKind::Ones}},
                                         make_power_g(1.0), t, arith, 1e-3, 1);
    REQUIRE(rows_id.size() == 1);
    CHECK(!rows_id[0].skipped);  // identity has f(N) = N, windows hold
}

TEST_CASE("choose_uvz: formula values, integrality, named violations")
{
    AdmissibleG id = make_power_g(1.0);

    // canonical values at (identity, eta=1e-3, N=1e8):
    //   u = N^{0.1} = 6.31, v = 4 N^{1/3} = 1856.6, z = [N^{0.4}] + 1/2
    UVZParams p = compute_uvz_values(100000000ULL, id, 1e-3);
    CHECK(p.u == doctest::Approx(std::pow(1e8, 0.1)).epsilon(1e-12));
    CHECK(p.v == doctest::Approx(4.0 * std::cbrt(1e8)).epsilon(1e-12));
    CHECK(p.z == 1584.5);
    CHECK(p.z - 0.5 == std::floor(p.z - 0.5));  // z - 1/2 integral by construction

    // N = 100 must error whatever eta does
    CHECK_THROWS_AS(choose_uvz(100, id, 1e-3), uvz_constraint_error);
    CHECK_THROWS_AS(choose_uvz(100, id, 1e-5), uvz_constraint_error);
    try {
        choose_uvz(100, id, 1e-5);
    } catch (const uvz_constraint_error& e) {
        CHECK(std::string(e.what()).find("N >= 32 z^2 u") != std::string::npos);
        CHECK(std::string(e.what()).find("3 <= u") != std::string::npos);
    }

    // the canonical formulas are jointly infeasible at N = 1e8 for every eta:
    // N >= 32 z^2 u forces N^{100 eta} >= 32 while v < z forces
    // N^{1/6 - 100 eta} > 4, so N^{1/6} > 128 i.e. N > 4.4e12 would be needed
    try {
        choose_uvz(100000000ULL, id, 1e-3);
        CHECK(false);
    } catch (const uvz_constraint_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("v < z") != std::string::npos);
        CHECK(msg.find("N >= 32 z^2 u") != std::string::npos);
    }

    // ... and with the admissibility window f(N) >= N^{29/30+100 eta} in
    // force, 100 eta <= 1/30, which pushes N^{100 eta} >= 32 beyond 2^64:
    // a (4.7)-feasible point like (1e13, eta=1.88e-3) breaks the window,
    CHECK_THROWS_WITH_AS(choose_uvz(10000000000000ULL, id, 1.88e-3),
                         doctest::Contains("f(N) >= N^{29/30+100 eta}"),
                         uvz_constraint_error);
    // while a window-respecting eta leaves u below 3
    CHECK_THROWS_WITH_AS(choose_uvz(10000000000000ULL, id, 3e-4),
                         doctest::Contains("3 <= u"), uvz_constraint_error);
}

TEST_CASE("main_theorem_experiment: identity at N=10 and the empty-grid edge")
{
    TauTable t = build_tau_table(16);
    AdmissibleG id = make_power_g(1.0);

    auto recs = main_theorem_experiment(id, {1, 10}, t, 0.1);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].hits == 0);
    CHECK(recs[0].A == 0.0);
    CHECK(recs[0].quotient == 0.0);

    CHECK(recs[1].hits == 4);
    double expect = t.lambda(2) + t.lambda(3) + t.lambda(5) + t.lambda(7);
    CHECK(recs[1].A == doctest::Approx(expect).epsilon(1e-15));
    CHECK(std::fabs(recs[1].A) <= recs[1].majorant);
    CHECK(recs[1].envelope ==
          doctest::Approx(10.0 * std::exp(-0.1 * std::sqrt(std::log(10.0)))).epsilon(1e-12));

    CHECK_THROWS_AS(main_theorem_experiment(id, {100}, t, 0.1), std::out_of_range);
}
