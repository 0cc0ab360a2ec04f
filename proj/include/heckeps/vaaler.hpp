#pragma once

#include <complex>
#include <vector>

namespace heckeps {

// saw-tooth psi(x) = x - [x] - 1/2, in [-1/2, 1/2)
double sawtooth(double x);

// W(t) = pi t (1-|t|) cot(pi t) + |t| for 0 < |t| < 1; series evaluation of
// t cot(pi t) near 0.  The boundary limits are exposed as constants instead
// of being extrapolated.
double vaaler_W(double t);

constexpr double kVaalerW_at0 = 1.0;  // limit t -> 0
constexpr double kVaalerW_at1 = 0.0;  // limit |t| -> 1

// Trigonometric approximation of Lemma type: psi*(x) = -sum_{1<=|j|<=J}
// (2 pi i j)^{-1} W(j/(J+1)) e(jx), majorant delta(x) = (2J+2)^{-1}
// sum_{|j|<=J} (1-|j|/(J+1)) e(jx), with |psi* - psi| <= delta and delta >= 0.
class VaalerApprox {
public:
    explicit VaalerApprox(int J);

    int J() const { return J_; }
    // a(j), 1 <= j <= J (a(-j) is the conjugate)
    std::complex<double> a(int j) const;
    // b(j), 0 <= |j| <= J
    double b(int j) const;

    // (psi_star, delta) evaluated by symmetric +-j pair summation, so both
    // are exactly real; the complex assembly is asserted to 1e-12 in tests.
    struct Eval {
        double psi_star;
        double delta;
    };
    Eval eval(double x) const;

private:
    int J_;
    std::vector<double> w_;  // W(j/(J+1)), j = 1..J
};

VaalerApprox build_vaaler(int J);

struct MajorantReport {
    int points = 0;
    int violations = 0;
    double worst_margin = 0.0;  // min over grid of delta - |psi* - psi|
    double worst_x = 0.0;
    bool ok() const { return violations == 0; }
};

// Pointwise |psi*(x) - psi(x)| <= delta(x) + 1e-11 over the grid.
MajorantReport majorant_check(const VaalerApprox& approx, const std::vector<double>& grid);

} // namespace heckeps
