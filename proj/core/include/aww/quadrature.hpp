// quadrature.hpp: Gauss–Legendre rules, composite panel integration and
// cumulative Simpson tables.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aww::quad {

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule, 1 <= n <= 64. Thread-safe.
const GaussRule& gauss_legendre(int n);

/// Composite Gauss–Legendre over `panels` equal panels of [a, b].
template <class F>
auto integrate_panels(F&& f, double a, double b, std::size_t panels, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double width = (b - a) / static_cast<double>(panels);
    const double half = 0.5 * width;
    using R = decltype(f(a));
    R sum{};
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * width;
        R panel{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
        sum += half * panel;
    }
    return sum;
}

/// Composite Gauss–Legendre over explicit panel breakpoints (ascending).
template <class F>
auto integrate_breakpoints(F&& f, std::span<const double> breaks, int order) {
    const GaussRule& rule = gauss_legendre(order);
    using R = decltype(f(breaks.front()));
    R sum{};
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double mid = 0.5 * (breaks[p] + breaks[p + 1]);
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        R panel{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
        sum += half * panel;
    }
    return sum;
}

/// Running integral I_k = ∫_{x_0}^{x_k} y for equally spaced samples.
/// Even k use composite Simpson; odd k add a three-point end panel.
template <class T>
std::vector<T> cumulative_simpson(std::span<const T> y, double h) {
    std::vector<T> out(y.size(), T{});
    if (y.size() < 2) return out;
    if (y.size() == 2) {
        out[1] = 0.5 * h * (y[0] + y[1]);
        return out;
    }
    for (std::size_t k = 2; k < y.size(); k += 2) {
        out[k] = out[k - 2] + (h / 3.0) * (y[k - 2] + 4.0 * y[k - 1] + y[k]);
    }
    // Odd indices: integrate over [x_{k-1}, x_k] with the quadratic through
    // the nearest three samples.
    for (std::size_t k = 1; k < y.size(); k += 2) {
        if (k + 1 < y.size()) {
            out[k] = out[k - 1] + (h / 12.0) * (5.0 * y[k - 1] + 8.0 * y[k] - y[k + 1]);
        } else {
            out[k] = out[k - 1] + (h / 12.0) * (-y[k - 2] + 8.0 * y[k - 1] + 5.0 * y[k]);
        }
    }
    return out;
}

template <class T>
T simpson(std::span<const T> y, double h) {
    return cumulative_simpson(y, h).back();
}

/// Trapezoid weights for n equally spaced samples.
std::vector<double> trapezoid_weights(std::size_t n, double h);

}  // namespace aww::quad
