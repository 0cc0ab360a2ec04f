#include "heckeps/gfunc.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "heckeps/primality.hpp"

namespace heckeps {

namespace {

constexpr double kNearIntegerBand = 1e-9;   // escalation trigger, absolute
constexpr double kExtAmbiguity = 1e-22;     // unresolved band in f128, relative

// Safeguarded Newton for g(x) = y, monotone increasing g.
double invert_monotone(const std::function<double(double)>& g,
                       const std::function<double(double)>& g1,
                       double y, double domain_min)
{
    double lo = std::max(domain_min, std::pow(std::max(y, 1.0), 29.0 / 30.0));
    double hi = std::max(y, domain_min);

    for (int i = 0; i < 80 && g(lo) > y && lo > domain_min; ++i)
        lo = std::max(domain_min, lo * 0.5);
    int expand = 0;
    while (g(hi) < y) {
        hi *= 2.0;
        if (++expand > 80) throw std::runtime_error("invert_monotone: cannot bracket " + std::to_string(y));
    }
    if (g(lo) > y) {
        if (g(domain_min) > y + 1e-9 * std::max(1.0, std::fabs(y)))
            throw std::domain_error("invert_monotone: y below g(domain_min)");
        lo = domain_min;
    }

    double x = std::clamp(y, lo, hi);
    const double tol = 1e-14 * std::max(1.0, std::fabs(y));
    for (int it = 0; it < 200; ++it) {
        double r = g(x) - y;
        if (std::fabs(r) <= tol) return x;
        if (r > 0)
            hi = x;
        else
            lo = x;
        double d = g1(x);
        double step = (d != 0.0 && std::isfinite(d)) ? x - r / d : std::numeric_limits<double>::quiet_NaN();
        x = (std::isfinite(step) && step > lo && step < hi) ? step : 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) return x;
    }
    throw std::runtime_error("invert_monotone: Newton did not converge in 200 iterations");
}

// Secant refinement of g_ext(x) = y in quad precision from a double seed.
f128 invert_ext(const std::function<f128(f128)>& g_ext, f128 y, double seed)
{
    f128 x0 = (f128)seed * (1 - (f128)1e-13);
    f128 x1 = (f128)seed * (1 + (f128)1e-13);
    f128 r0 = g_ext(x0) - y;
    f128 r1 = g_ext(x1) - y;
    const f128 tol = (f128)1e-31 * (fabsq(y) + 1);
    for (int it = 0; it < 40; ++it) {
        if (fabsq(r1) <= tol) return x1;
        f128 denom = r1 - r0;
        if (denom == 0) return x1;
        f128 x2 = x1 - r1 * (x1 - x0) / denom;
        x0 = x1;
        r0 = r1;
        x1 = x2;
        r1 = g_ext(x1) - y;
    }
    return x1;
}

// Floor of an extended-precision value; exact integers resolve, values inside
// the ambiguity band do not.
int64_t floor_ext_guarded(f128 v, const char* what)
{
    f128 r = rintq(v);
    f128 diff = fabsq(v - r);
    if (diff == 0) return (int64_t)r;
    if (diff < (f128)kExtAmbiguity * (fabsq(v) + 1))
        throw ambiguous_floor_error(std::string(what) +
                                    ": value unresolved within extended precision");
    return (int64_t)floorq(v);
}

void spot_check_monotone(const AdmissibleG& g)
{
    double span_hi = 1e7;
    double prev_x = g.domain_min;
    double prev_v = g.g(prev_x);
    for (int i = 1; i <= 64; ++i) {
        double x = g.domain_min * std::pow(span_hi / g.domain_min, i / 64.0);
        double v = g.g(x);
        if (!(v > prev_v))
            throw std::invalid_argument("make_numeric_g: samples not strictly increasing near x=" +
                                        std::to_string(x));
        prev_x = x;
        prev_v = v;
    }
}

} // namespace

AdmissibleG make_power_g(double c)
{
    // the x^c family of the companion theorem; the general-g machinery only
    // covers c < 30/29 and the admissibility report flags that window
    if (!(c >= 1.0) || !(c < 8.0 / 7.0))
        throw std::invalid_argument("make_power_g: c must satisfy 1 <= c < 8/7, got " +
                                    std::to_string(c));

    AdmissibleG a;
    a.epsilon = 30.0 / 29.0 - c;
    a.domain_min = 1.0;

    if (c == 1.0) {
        a.description = "identity";
        a.g = [](double x) { return x; };
        a.f = [](double y) { return y; };
        a.f1 = [](double) { return 1.0; };
        a.f2 = [](double) { return 0.0; };
        a.f3 = [](double) { return 0.0; };
        a.g_ext = [](f128 x) { return x; };
        a.f_ext = [](f128 y) { return y; };
        return a;
    }

    const double gamma = 1.0 / c;
    a.description = "power:" + std::to_string(c);
    a.g = [c](double x) { return std::pow(x, c); };
    a.f = [gamma](double y) { return std::pow(y, gamma); };
    a.f1 = [gamma](double y) { return gamma * std::pow(y, gamma - 1.0); };
    a.f2 = [gamma](double y) { return gamma * (gamma - 1.0) * std::pow(y, gamma - 2.0); };
    a.f3 = [gamma](double y) { return gamma * (gamma - 1.0) * (gamma - 2.0) * std::pow(y, gamma - 3.0); };
    a.g_ext = [c](f128 x) { return powq(x, (f128)c); };
    a.f_ext = [c](f128 y) { return powq(y, 1 / (f128)c); };
    return a;
}

AdmissibleG make_numeric_g(std::function<double(double)> g,
                           std::function<double(double)> g1,
                           std::function<double(double)> g2,
                           std::function<double(double)> g3,
                           double epsilon, std::string description, double domain_min,
                           std::function<f128(f128)> g_ext)
{
    AdmissibleG a;
    a.description = std::move(description);
    a.epsilon = epsilon;
    a.domain_min = domain_min;
    a.g = std::move(g);

    spot_check_monotone(a);

    auto gf = a.g;
    a.f = [gf, g1, domain_min](double y) { return invert_monotone(gf, g1, y, domain_min); };

    // inverse-function differentiation at x = f(y)
    auto f = a.f;
    a.f1 = [f, g1](double y) { return 1.0 / g1(f(y)); };
    a.f2 = [f, g1, g2](double y) {
        double x = f(y), d1 = g1(x);
        return -g2(x) / (d1 * d1 * d1);
    };
    a.f3 = [f, g1, g2, g3](double y) {
        double x = f(y), d1 = g1(x), d2 = g2(x);
        return (3.0 * d2 * d2 - d1 * g3(x)) / std::pow(d1, 5);
    };

    if (g_ext) {
        a.g_ext = g_ext;
        a.f_ext = [g_ext, f](f128 y) { return invert_ext(g_ext, y, f((double)y)); };
    }
    return a;
}

AdmissibleG make_xexp_sqrtlog()
{
    // g(x) = x e^s with s = sqrt(log x); s' = 1/(2xs)
    auto g = [](double x) { return x * std::exp(std::sqrt(std::log(x))); };
    auto g1 = [](double x) {
        double s = std::sqrt(std::log(x));
        return std::exp(s) * (1.0 + 0.5 / s);
    };
    auto g2 = [](double x) {
        double s = std::sqrt(std::log(x));
        return std::exp(s) * (1.0 + 0.5 / s - 0.5 / (s * s)) / (2.0 * x * s);
    };
    auto g3 = [](double x) {
        double s = std::sqrt(std::log(x));
        double E = std::exp(s);
        double sp = 1.0 / (2.0 * x * s);
        double spp = -(s + x * sp) / (2.0 * x * x * s * s);
        double h = 1.0 + 0.5 / s - 0.5 / (s * s);
        double hp = sp * (1.0 / (s * s * s) - 0.5 / (s * s));
        return E * (sp * sp * h + spp * h + sp * hp);
    };
    auto g_ext = [](f128 x) { return x * expq(sqrtq(logq(x))); };
    return make_numeric_g(g, g1, g2, g3, 0.01, "xexp-sqrtlog", 1.5, g_ext);
}

AdmissibleG parse_g_selector(const std::string& spec)
{
    if (spec == "identity") return make_power_g(1.0);
    if (spec == "xexp-sqrtlog") return make_xexp_sqrtlog();
    if (spec.rfind("power:", 0) == 0) {
        double c;
        try {
            c = std::stod(spec.substr(6));
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_g_selector: bad exponent in '" + spec + "'");
        }
        return make_power_g(c);
    }
    throw std::invalid_argument("parse_g_selector: unknown g '" + spec +
                                "' (expected power:<c>, identity, xexp-sqrtlog)");
}

const ConditionEntry& ConditionReport::entry(const std::string& name) const
{
    for (const auto& e : entries)
        if (e.name == name) return e;
    throw std::out_of_range("ConditionReport: no entry named " + name);
}

ConditionReport verify_admissibility(const AdmissibleG& g, const std::vector<double>& grid)
{
    ConditionReport rep;
    const double slack = 1e-12;
    const double c_max = 30.0 / 29.0;

    std::vector<double> xs(grid);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(),
                            [&](double x) { return x < g.domain_min; }),
             xs.end());
    if (xs.empty()) throw std::invalid_argument("verify_admissibility: empty grid in domain");

    {
        ConditionEntry e{"(i) monotonicity", true, 0, 0, 0};
        double prev = g.g(xs[0]);
        for (size_t i = 1; i < xs.size(); ++i) {
            double v = g.g(xs[i]);
            if (!(v > prev)) {
                e.pass = false;
                e.worst_x = xs[i];
                break;
            }
            prev = v;
        }
        rep.entries.push_back(e);
    }

    auto bound_entry = [&](const std::string& name, auto&& violation_margin) {
        // violation_margin(x) > 0 means the bound is broken at x
        ConditionEntry e{name, true, 0, 0, 0};
        double worst = -std::numeric_limits<double>::infinity();
        for (double x : xs) {
            double m = violation_margin(x);
            if (m > worst) {
                worst = m;
                e.worst_x = x;
            }
        }
        e.pass = worst <= 0;
        rep.entries.push_back(e);
    };

    bound_entry("(1.2) lower", [&](double x) { return x * (1 - slack) - g.g(x); });
    bound_entry("(1.2) upper", [&](double x) {
        return g.g(x) - std::pow(x, c_max - g.epsilon) * (1 + slack);
    });

    // f-side conditions evaluated at points of the grid lying in the image
    double y_min = g.g(g.domain_min);
    auto in_image = [&](double y) { return y >= y_min * (1 - 1e-12); };

    bound_entry("(1.3) lower", [&](double y) {
        if (!in_image(y)) return -1.0;
        return std::pow(y, 29.0 / 30.0 + g.epsilon) * (1 - slack) - g.f(y);
    });
    bound_entry("(1.3) upper", [&](double y) {
        if (!in_image(y)) return -1.0;
        return g.f(y) - y * (1 + slack);
    });

    auto ratio_entry = [&](const std::string& name, auto&& ratio) {
        ConditionEntry e{name, true, std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity(), 0};
        for (double y : xs) {
            if (!in_image(y)) continue;
            double r = std::fabs(ratio(y));
            if (r < e.ratio_min) {
                e.ratio_min = r;
                e.worst_x = y;
            }
            e.ratio_max = std::max(e.ratio_max, r);
        }
        e.pass = e.ratio_min > 1e-9 && std::isfinite(e.ratio_max);
        rep.entries.push_back(e);
    };

    ratio_entry("(1.4) k=1", [&](double y) { return g.f1(y) * y / g.f(y); });
    ratio_entry("(1.4) k=2", [&](double y) { return g.f2(y) * y * y / g.f(y); });
    ratio_entry("(1.4) k=3", [&](double y) { return g.f3(y) * y * y * y / g.f(y); });
    ratio_entry("(1.5)", [&](double y) {
        return (2.0 * g.f2(y) + y * g.f3(y)) * y * y / g.f(y);
    });

    return rep;
}

uint64_t floor_g(const AdmissibleG& g, uint64_t n)
{
    if (n < 1) throw std::invalid_argument("floor_g: n must be >= 1");
    double v = g.g((double)n);
    if (!(v < 1.8e19))
        throw std::out_of_range("floor_g: g(n) exceeds the 64-bit range");

    int64_t m;
    if (std::fabs(v - std::nearbyint(v)) < kNearIntegerBand) {
        if (!g.has_ext())
            throw ambiguous_floor_error("floor_g: g(" + std::to_string(n) +
                                        ") is near-integral and no extended-precision "
                                        "evaluator is available");
        m = floor_ext_guarded(g.g_ext((f128)n), "floor_g");
    } else {
        m = (int64_t)std::floor(v);
    }

    // consistency guard: f(m) <= n < f(m+1)
    const double guard = 1e-6 + 1e-9 * (double)n;
    double fm = g.f((double)m);
    double fm1 = g.f((double)m + 1.0);
    if (!(fm <= (double)n + guard) || !((double)n < fm1 + guard))
        throw std::runtime_error("floor_g: guard failed at n=" + std::to_string(n) +
                                 " (m=" + std::to_string(m) + ")");
    return (uint64_t)m;
}

int64_t floor_neg_f(const AdmissibleG& g, uint64_t m)
{
    double v = g.f((double)m);
    if (std::fabs(v - std::nearbyint(v)) < kNearIntegerBand) {
        if (!g.f_ext)
            throw ambiguous_floor_error("floor_neg_f: f(" + std::to_string(m) +
                                        ") is near-integral and no extended-precision "
                                        "evaluator is available");
        return floor_ext_guarded(-g.f_ext((f128)m), "floor_neg_f");
    }
    return (int64_t)std::floor(-v);
}

std::vector<FloorPrimeHit> enumerate_floor_prime_hits(const AdmissibleG& g, uint64_t limit)
{
    if (limit < 1) throw std::invalid_argument("enumerate_floor_prime_hits: limit must be >= 1");
    std::vector<FloorPrimeHit> hits;
    for (uint64_t n = (uint64_t)std::ceil(g.domain_min); n <= limit; ++n) {
        uint64_t m = floor_g(g, n);
        if (is_prime_u64(m)) hits.push_back({n, m});
    }
    return hits;
}

} // namespace heckeps
