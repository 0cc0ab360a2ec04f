#pragma once

#include <complex>

namespace heckeps {

// Kahan-compensated accumulator.  All long reductions in this project go
// through one of these in a fixed index order, so re-runs are bit-identical.
class KahanSum {
public:
    void add(double x)
    {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanComplexSum {
public:
    void add(std::complex<double> z)
    {
        re_.add(z.real());
        im_.add(z.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_, im_;
};

} // namespace heckeps
