// types.hpp: scalar, vector and matrix aliases shared by every module.

#pragma once

#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Dense>

namespace aww {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

/// Uniform grid t_k = begin + k (end - begin) / intervals, k = 0..intervals.
struct TimeGrid {
    double begin{0.0};
    double end{1.0};
    std::size_t intervals{1000};

    [[nodiscard]] double step() const noexcept {
        return (end - begin) / static_cast<double>(intervals);
    }
    [[nodiscard]] double at(std::size_t k) const noexcept {
        return k == intervals ? end : begin + static_cast<double>(k) * step();
    }
    [[nodiscard]] std::size_t size() const noexcept { return intervals + 1; }
};

}  // namespace aww
