// propagators.hpp: fourth-order Magnus stepping for ∂_t Y = M(t) Y with
// small dense complex matrices.

#pragma once

#include <functional>
#include <vector>

#include "aww/types.hpp"

namespace aww {

using Generator = std::function<CMatrix(double)>;

/// exp(M) for anti-Hermitian M, through the Hermitian eigendecomposition of iM.
/// The result is unitary to rounding.
CMatrix exp_anti_hermitian(const CMatrix& m);

/// exp(M) for a general square matrix (scaling and squaring Padé).
CMatrix exp_general(const CMatrix& m);

/// One Magnus-4 step from t to t + h: exp(h/2 (M1 + M2) + √3 h²/12 [M2, M1])
/// with M evaluated at the two Gauss points.
CMatrix magnus4_step(const Generator& generator, double t, double h, bool anti_hermitian);

/// Y(to) for Y(from) = 1 using `steps` equal Magnus-4 steps.
CMatrix magnus4(const Generator& generator, double from, double to, std::size_t steps, bool anti_hermitian);

/// Y at every point of the uniform grid on [from, to] with `steps` steps.
std::vector<CMatrix> magnus4_path(const Generator& generator, double from, double to, std::size_t steps,
                                  bool anti_hermitian);

/// ‖Y*Y − 1‖ in the operator norm.
double unitarity_defect(const CMatrix& y);

/// Largest singular value.
double operator_norm(const CMatrix& m);

}  // namespace aww
