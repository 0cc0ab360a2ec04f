#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heckeps/gfunc.hpp"
#include "heckeps/primality.hpp"

using namespace heckeps;

namespace {

bool trial_division_is_prime(uint64_t n)
{
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<double> log_grid(double lo, double hi, int count)
{
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = lo * std::pow(hi / lo, (double)i / (count - 1));
    return g;
}

} // namespace

TEST_CASE("power family: construction and closed forms")
{
    AdmissibleG id = make_power_g(1.0);
    CHECK(id.g(7.0) == 7.0);
    CHECK(id.f(7.0) == 7.0);
    CHECK(id.f1(3.0) == 1.0);

    AdmissibleG g = make_power_g(1.05);
    CHECK(g.g(10.0) == doctest::Approx(11.2201845).epsilon(1e-8));
    CHECK(g.f(std::pow(2.0, 1.02)) != 0);  // domain sanity

    AdmissibleG g102 = make_power_g(1.02);
    CHECK(g102.f(std::pow(2.0, 1.02)) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_power_g(1.2), std::invalid_argument);
    CHECK_THROWS_AS(make_power_g(0.9), std::invalid_argument);
    CHECK_THROWS_AS(make_power_g(8.0 / 7.0), std::invalid_argument);
}

TEST_CASE("numeric family: agrees with closed-form inverse")
{
    auto g = [](double x) { return std::pow(x, 1.05); };
    auto g1 = [](double x) { return 1.05 * std::pow(x, 0.05); };
    auto g2 = [](double x) { return 1.05 * 0.05 * std::pow(x, -0.95); };
    auto g3 = [](double x) { return 1.05 * 0.05 * -0.95 * std::pow(x, -1.95); };
    AdmissibleG num = make_numeric_g(g, g1, g2, g3, 30.0 / 29.0 - 1.05, "num-1.05");
    AdmissibleG ref = make_power_g(1.05);

    for (double y : log_grid(2.0, 1e6, 40)) {
        CHECK(num.f(y) == doctest::Approx(ref.f(y)).epsilon(1e-10));
        CHECK(num.f1(y) == doctest::Approx(ref.f1(y)).epsilon(1e-8));
        CHECK(num.f2(y) == doctest::Approx(ref.f2(y)).epsilon(1e-6));
        CHECK(num.f3(y) == doctest::Approx(ref.f3(y)).epsilon(1e-5));
    }
}

TEST_CASE("numeric family: rejects non-monotone samples")
{
    auto bad = [](double x) { return std::cos(x); };
    auto d = [](double) { return 0.0; };
    CHECK_THROWS_AS(make_numeric_g(bad, d, d, d), std::invalid_argument);
}

TEST_CASE("xexp-sqrtlog: inverse round-trip and derivative oracles")
{
    AdmissibleG g = make_xexp_sqrtlog();
    for (double y : log_grid(10.0, 1e6, 50)) {
        double x = g.f(y);
        CHECK(g.g(x) == doctest::Approx(y).epsilon(1e-10));
    }
    // derivative oracles against central differences (through the inverse)
    for (double y : {50.0, 1e3, 1e5}) {
        double h = y * 1e-6;
        double fd1 = (g.f(y + h) - g.f(y - h)) / (2 * h);
        CHECK(g.f1(y) == doctest::Approx(fd1).epsilon(1e-6));
        double fd2 = (g.f(y + h) - 2 * g.f(y) + g.f(y - h)) / (h * h);
        CHECK(g.f2(y) == doctest::Approx(fd2).epsilon(1e-3));
    }
}

TEST_CASE("parse_g_selector")
{
    CHECK(parse_g_selector("identity").description == "identity");
    CHECK(parse_g_selector("power:1.05").g(10.0) == doctest::Approx(11.2201845).epsilon(1e-8));
    CHECK(parse_g_selector("xexp-sqrtlog").description == "xexp-sqrtlog");
    CHECK_THROWS_AS(parse_g_selector("power:1.2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_g_selector("nope"), std::invalid_argument);
}

TEST_CASE("verify_admissibility: power 1.05 passes with the closed-form k=1 ratio")
{
    AdmissibleG g = make_power_g(1.05);
    ConditionReport rep = verify_admissibility(g, log_grid(10.0, 1e6, 200));
    CHECK(rep.all_pass());
    const auto& k1 = rep.entry("(1.4) k=1");
    CHECK(k1.ratio_min == doctest::Approx(1.0 / 1.05).epsilon(1e-9));
    CHECK(k1.ratio_max == doctest::Approx(1.0 / 1.05).epsilon(1e-9));
}

TEST_CASE("verify_admissibility: identity fails the (1.5) lower window")
{
    AdmissibleG g = make_power_g(1.0);
    ConditionReport rep = verify_admissibility(g, log_grid(10.0, 1e6, 50));
    CHECK_FALSE(rep.entry("(1.5)").pass);
    CHECK(rep.entry("(1.5)").ratio_max == 0.0);
    CHECK(rep.entry("(i) monotonicity").pass);
    CHECK(rep.entry("(1.2) lower").pass);
    CHECK(rep.entry("(1.2) upper").pass);
}

TEST_CASE("verify_admissibility: numeric x^1.2 breaks the (1.2) upper bound")
{
    auto ge = [](double x) { return std::pow(x, 1.2); };
    auto g1 = [](double x) { return 1.2 * std::pow(x, 0.2); };
    auto g2 = [](double x) { return 1.2 * 0.2 * std::pow(x, -0.8); };
    auto g3 = [](double x) { return 1.2 * 0.2 * -0.8 * std::pow(x, -1.8); };
    AdmissibleG g = make_numeric_g(ge, g1, g2, g3, 0.01, "num-1.2");
    ConditionReport rep = verify_admissibility(g, log_grid(10.0, 1e6, 50));
    CHECK_FALSE(rep.entry("(1.2) upper").pass);
    CHECK(rep.entry("(1.2) upper").worst_x > 1e5);  // worst at the large end
}

TEST_CASE("floor_g: spot values and the guard")
{
    AdmissibleG id = make_power_g(1.0);
    CHECK(floor_g(id, 7) == 7);

    AdmissibleG g = make_power_g(1.05);
    CHECK(floor_g(g, 10) == 11);
    CHECK(floor_g(g, 2) == 2);  // 2^1.05 = 2.0705
    CHECK(floor_g(g, 1) == 1);
}

TEST_CASE("floor_g: near-integral values without an extended evaluator are refused")
{
    auto ge = [](double x) { return x * (1.0 + 1e-12); };
    auto g1 = [](double) { return 1.0 + 1e-12; };
    auto zero = [](double) { return 0.0; };
    AdmissibleG g = make_numeric_g(ge, g1, zero, zero, 0.01, "shifted-identity");
    CHECK_THROWS_AS(floor_g(g, 5), ambiguous_floor_error);
}

TEST_CASE("floor consistency: m <= g(n) < m+1 in extended precision, n <= 1e5")
{
    for (const char* sel : {"identity", "power:1.02", "power:1.05"}) {
        AdmissibleG g = parse_g_selector(sel);
        for (uint64_t n = 1; n <= 100000; n += (n < 100 ? 1 : 97)) {
            uint64_t m = floor_g(g, n);
            f128 v = g.g_ext((f128)n);
            CHECK((f128)m <= v);
            CHECK(v < (f128)(m + 1));
        }
    }
}

TEST_CASE("counting identity: multiplicity of m equals [-f(m)] - [-f(m+1)] inside the range")
{
    AdmissibleG g = make_power_g(1.05);
    const uint64_t N = 2000;
    std::vector<uint64_t> count(floor_g(g, N) + 2, 0);
    for (uint64_t n = 1; n <= N; ++n) ++count[floor_g(g, n)];

    uint64_t m_top = floor_g(g, N);
    for (uint64_t m = 2; m < m_top; ++m) {
        int64_t expected = floor_neg_f(g, m) - floor_neg_f(g, m + 1);
        CHECK((int64_t)count[m] == expected);
    }
}

TEST_CASE("primality: deterministic test vs trial division to 1e6")
{
    for (uint64_t m = 0; m <= 1000000; ++m)
        if (is_prime_u64(m) != trial_division_is_prime(m)) {
            CHECK(m == 0);  // report the offender
            break;
        }
    CHECK(is_prime_u64(18446744073709551557ULL));   // largest 64-bit prime
    CHECK_FALSE(is_prime_u64(18446744073709551615ULL));
}

TEST_CASE("enumerate_floor_prime_hits")
{
    AdmissibleG id = make_power_g(1.0);
    auto hits = enumerate_floor_prime_hits(id, 10);
    REQUIRE(hits.size() == 4);
    CHECK(hits[0].n == 2);
    CHECK(hits[1].n == 3);
    CHECK(hits[2].n == 5);
    CHECK(hits[3].n == 7);

    AdmissibleG g = make_power_g(1.05);
    auto h2 = enumerate_floor_prime_hits(g, 10);
    REQUIRE(h2.size() == 5);
    CHECK(h2[0].n == 2);
    CHECK(h2[0].m == 2);
    CHECK(h2[4].n == 10);
    CHECK(h2[4].m == 11);  // g(10) = 11.2202, 11 prime

    CHECK(enumerate_floor_prime_hits(id, 1).empty());  // [g(1)] = 1 is not prime
}
