#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heckeps {

using f128 = __float128;

// An admissible growth function g on [1,inf) together with its inverse f and
// derivative oracles f', f'', f'''.  The optional *_ext evaluators run on
// __float128 and back the near-integer escalation in floor_g; families
// without them refuse ambiguous floors instead of guessing.
struct AdmissibleG {
    std::string description;
    double epsilon = 0.0;  // the eps of x <= g(x) <= x^{30/29-eps}
    double domain_min = 1.0;

    std::function<double(double)> g;
    std::function<double(double)> f;
    std::function<double(double)> f1, f2, f3;

    std::function<f128(f128)> g_ext;  // optional
    std::function<f128(f128)> f_ext;  // optional

    bool has_ext() const { return static_cast<bool>(g_ext); }
};

// g(x) = x^c for 1 <= c < 30/29; c = 1 is the exact identity.
AdmissibleG make_power_g(double c);

// General g from an evaluator and derivative oracles g', g'', g'''.
// f is computed by safeguarded Newton (bisection fallback), f-derivatives by
// inverse-function differentiation.  Monotonicity is spot-checked on
// [domain_min, 1e7]; epsilon is a declared value used only for the (1.2)/(1.3)
// report windows.
AdmissibleG make_numeric_g(std::function<double(double)> g,
                           std::function<double(double)> g1,
                           std::function<double(double)> g2,
                           std::function<double(double)> g3,
                           double epsilon = 0.01,
                           std::string description = "numeric",
                           double domain_min = 1.0,
                           std::function<f128(f128)> g_ext = nullptr);

// Built-in g(x) = x * exp(sqrt(log x)) on [1.5, inf).
AdmissibleG make_xexp_sqrtlog();

// "power:1.05" | "identity" | "xexp-sqrtlog"
AdmissibleG parse_g_selector(const std::string& spec);

struct ConditionEntry {
    std::string name;
    bool pass = false;
    double ratio_min = 0.0;   // measured window for the asymp-style conditions
    double ratio_max = 0.0;
    double worst_x = 0.0;
};

struct ConditionReport {
    std::vector<ConditionEntry> entries;
    bool all_pass() const
    {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    const ConditionEntry& entry(const std::string& name) const;
};

// Checks monotonicity, x <= g(x) <= x^{30/29-eps}, the mirrored bounds on f,
// and the derivative comparability ratios |f^(k)(x)| x^k / f(x) (k = 1,2,3)
// and |2f''(x) + x f'''(x)| x^2 / f(x).  Ratio windows are measured and
// reported, not hard-coded; the ratio conditions pass when the window stays
// strictly positive and finite.
ConditionReport verify_admissibility(const AdmissibleG& g, const std::vector<double>& grid);

// m = [g(n)] with a floor guard (f(m) <= n < f(m+1)) and extended-precision
// re-evaluation when g(n) lands within 1e-9 of an integer.  Throws
// ambiguous_floor_error when the escalation cannot resolve the floor.
uint64_t floor_g(const AdmissibleG& g, uint64_t n);

// [-f(m)] with the same escalation policy (used by the rewrite identities).
int64_t floor_neg_f(const AdmissibleG& g, uint64_t m);

struct FloorPrimeHit {
    uint64_t n;
    uint64_t m;  // [g(n)], prime; also the eigenvalue index lambda(m)
};

// All n <= limit with [g(n)] prime, ascending n.
std::vector<FloorPrimeHit> enumerate_floor_prime_hits(const AdmissibleG& g, uint64_t limit);

struct ambiguous_floor_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace heckeps
