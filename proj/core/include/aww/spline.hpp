// spline.hpp: natural cubic spline on a strictly increasing abscissa.

#pragma once

#include <complex>
#include <vector>

namespace aww {

class CubicSpline {
public:
    CubicSpline() = default;
    /// Throws std::invalid_argument unless x is strictly increasing and
    /// x.size() == y.size() >= 2.
    CubicSpline(std::vector<double> x, std::vector<double> y);

    /// Clamped to the end values outside [x_0, x_n].
    [[nodiscard]] double operator()(double t) const;
    /// ∫ S(x) e^{-ixt} dx over [x_0, x_n], exact per cubic segment.
    [[nodiscard]] std::complex<double> fourier(double t) const;
    /// PV ∫ S(x)/(a − x) dx over [x_0, x_n], exact per cubic segment.
    [[nodiscard]] double principal_value(double a) const;
    [[nodiscard]] double front() const { return x_.front(); }
    [[nodiscard]] double back() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> second_;  // y'' at the knots
};

}  // namespace aww
