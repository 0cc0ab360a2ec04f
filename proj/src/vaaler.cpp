#include "heckeps/vaaler.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace heckeps {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sawtooth(double x)
{
    return x - std::floor(x) - 0.5;
}

double vaaler_W(double t)
{
    double at = std::fabs(t);
    if (at == 0.0 || at >= 1.0)
        throw std::domain_error("vaaler_W: t must satisfy 0 < |t| < 1");

    double tc;  // pi t cot(pi t)
    if (at < 1e-3) {
        // pi t cot(pi t) = 1 - z^2/3 - z^4/45 - 2 z^6/945 + O(z^8), z = pi t
        double z2 = kPi * t * kPi * t;
        tc = 1.0 - z2 / 3.0 - z2 * z2 / 45.0 - 2.0 * z2 * z2 * z2 / 945.0;
    } else {
        tc = kPi * t / std::tan(kPi * t);
    }
    return (1.0 - at) * tc + at;
}

VaalerApprox::VaalerApprox(int J) : J_(J)
{
    if (J < 1) throw std::invalid_argument("VaalerApprox: J must be >= 1");
    w_.resize(J);
    for (int j = 1; j <= J; ++j) w_[j - 1] = vaaler_W((double)j / (J + 1));
}

std::complex<double> VaalerApprox::a(int j) const
{
    int aj = std::abs(j);
    if (aj < 1 || aj > J_) throw std::out_of_range("VaalerApprox::a: need 1 <= |j| <= J");
    // -(2 pi i j)^{-1} W(j/(J+1)) = i W / (2 pi j), purely imaginary
    std::complex<double> v(0.0, w_[aj - 1] / (2.0 * kPi * aj));
    return j > 0 ? v : std::conj(v);
}

double VaalerApprox::b(int j) const
{
    int aj = std::abs(j);
    if (aj > J_) throw std::out_of_range("VaalerApprox::b: need |j| <= J");
    return (1.0 - (double)aj / (J_ + 1)) / (2.0 * J_ + 2.0);
}

VaalerApprox::Eval VaalerApprox::eval(double x) const
{
    // +-j pairs collapse to real terms:
    //   a(j)e(jx) + a(-j)e(-jx) = -W_j sin(2 pi j x) / (pi j)
    //   b(j)e(jx) + b(-j)e(-jx) =  2 b(j) cos(2 pi j x)
    double psi = 0.0, del = b(0);
    for (int j = J_; j >= 1; --j) {  // small terms first
        double th = 2.0 * kPi * j * x;
        psi -= w_[j - 1] * std::sin(th) / (kPi * j);
        del += 2.0 * b(j) * std::cos(th);
    }
    return {psi, del};
}

VaalerApprox build_vaaler(int J)
{
    return VaalerApprox(J);
}

MajorantReport majorant_check(const VaalerApprox& approx, const std::vector<double>& grid)
{
    MajorantReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (double x : grid) {
        auto [psi_star, delta] = approx.eval(x);
        double margin = delta - std::fabs(psi_star - sawtooth(x));
        ++rep.points;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_x = x;
        }
        if (margin < -1e-11) ++rep.violations;
    }
    return rep;
}

} // namespace heckeps
