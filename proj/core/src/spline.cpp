#include "aww/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aww/quadrature.hpp"

namespace aww {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), second_(x_.size(), 0.0) {
    if (x_.size() != y_.size() || x_.size() < 2) {
        throw std::invalid_argument("CubicSpline: need matching x/y with at least two points");
    }
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: x must be strictly increasing");
    }
    const std::size_t n = x_.size();
    if (n == 2) return;
    // Tridiagonal solve for the natural spline (y'' = 0 at both ends).
    std::vector<double> diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        const double lower = hl / 6.0;
        diag[i] = (hl + hr) / 3.0;
        upper[i] = hr / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
        // Forward elimination against row i-1.
        const double m = lower / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    second_[n - 1] = 0.0;
    for (std::size_t i = n - 2; i >= 1; --i) {
        second_[i] = (rhs[i] - upper[i] * second_[i + 1]) / diag[i];
    }
    second_[0] = 0.0;
}

double CubicSpline::operator()(double t) const {
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

std::complex<double> CubicSpline::fourier(double t) const {
    using cd = std::complex<double>;
    const cd s(0.0, -t);
    const auto& rule = quad::gauss_legendre(8);
    cd sum{};
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double a = x_[i], b = x_[i + 1], h = b - a;
        if (std::abs(t) * h < 1.0) {
            // Short segment: the 8-point rule is accurate to rounding here.
            cd seg{};
            for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                const double w = 0.5 * (a + b) + 0.5 * h * rule.nodes[k];
                seg += rule.weights[k] * (*this)(w) * std::exp(s * w);
            }
            sum += 0.5 * h * seg;
            continue;
        }
        // Antiderivative e^{sx} (p/s - p'/s^2 + p''/s^3 - p'''/s^4).
        const double slope = (y_[i + 1] - y_[i]) / h;
        const double d1a = slope - h * (2.0 * second_[i] + second_[i + 1]) / 6.0;
        const double d1b = slope + h * (second_[i] + 2.0 * second_[i + 1]) / 6.0;
        const double d3 = (second_[i + 1] - second_[i]) / h;
        const auto primitive = [&](double x, double p, double d1, double d2) {
            return std::exp(s * x) * (p / s - d1 / (s * s) + d2 / (s * s * s) - d3 / (s * s * s * s));
        };
        sum += primitive(b, y_[i + 1], d1b, second_[i + 1]) - primitive(a, y_[i], d1a, second_[i]);
    }
    return sum;
}

double CubicSpline::principal_value(double a) const {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double lo = x_[i], hi = x_[i + 1], h = hi - lo;
        // Taylor coefficients at a of this segment's cubic.
        const double A = (hi - a) / h, B = (a - lo) / h;
        const double c0 = A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * second_[i] + (B * B * B - B) * second_[i + 1]) * h * h / 6.0;
        const double c1 = (y_[i + 1] - y_[i]) / h + (-(3 * A * A - 1) * second_[i] + (3 * B * B - 1) * second_[i + 1]) * h / 6.0;
        const double c2 = 0.5 * (A * second_[i] + B * second_[i + 1]);
        const double c3 = (second_[i + 1] - second_[i]) / (6.0 * h);
        const double ul = lo - a, uh = hi - a;
        // S/(a - x) = -(c0/u + c1 + c2 u + c3 u^2), u = x - a
        const auto poly = [&](double u) { return c1 * u + c2 * u * u / 2.0 + c3 * u * u * u / 3.0; };
        double logs = 0.0;
        if (uh != 0.0) logs += std::log(std::abs(uh));
        if (ul != 0.0) logs -= std::log(std::abs(ul));
        sum -= c0 * logs + poly(uh) - poly(ul);
    }
    return sum;
}

}  // namespace aww
