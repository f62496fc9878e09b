// spectral_pt.hpp: spectrum of the non-Hermitian generator G_{ε,λ}(t).

#pragma once

#include <functional>
#include <vector>

#include "aww/atom.hpp"
#include "aww/bath.hpp"
#include "aww/types.hpp"

namespace aww {

/// Eigenpairs of G ordered by the unperturbed level they continue.
struct PerturbedSpectrum {
    std::vector<cplx> eigenvalues;    ///< α_j(t, ε, λ)
    std::vector<CMatrix> projections; ///< rank one, P_j = r_j l_j*, ⟨l_j, r_j⟩ = 1
    std::vector<std::size_t> source;  ///< column of the raw eigensolver output

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
    /// ‖G − Σ_j α_j P_j‖
    [[nodiscard]] double representation_error(const CMatrix& g) const;
};

/// Dense eigendecomposition of G matched to `unperturbed` by nearest
/// eigenvalue (greedy over sorted distances, ties by eigenvector overlap).
/// Throws MatchingError when two eigenvalues of G coincide to 1e-12.
PerturbedSpectrum perturbed_spectrum(const CMatrix& g, const FrameSample& unperturbed);

/// α′_j = −i |v_j|² ∫_0^T e^{ixα_j} γ(x) dx; T may be infinite.
cplx first_order_correction(const BathSpec& bath, cplx v_j, double alpha_j, double horizon);

/// Same with T = t/ε.
cplx first_order_correction(const BathSpec& bath, cplx v_j, double alpha_j, double epsilon, double t);

/// −(1/2πi) ∮ f(z) dz on the circle |z − center| = radius, M-node trapezoid.
cplx contour_integral(const std::function<cplx(cplx)>& f, cplx center, double radius, std::size_t nodes);

/// −(1/2πi) ∮ (G − z)⁻¹ dz. Starts at `nodes` and doubles (up to 4096)
/// until two successive rules agree to 1e-13. Throws ContourError if
/// G − z is nearly singular (σ_min < 1e-8) at a node.
CMatrix riesz_projection(const CMatrix& g, cplx center, double radius, std::size_t nodes = 64);

/// 4λ²‖v‖²_∞‖γ‖_{L¹}/Δ₀
double projection_distance_bound(double lambda, double coupling_sup_sq, double gamma_l1, double gap);

struct DiagnosticOptions {
    /// Step of the centered differences of P_j(t, ε, λ), as a fraction of ε.
    double derivative_step{0.02};
    /// Magnus steps per ε for the transport part.
    std::size_t steps_per_epsilon{20};
    /// Tolerated relative change of ∂P under step halving.
    double smoothness_tol{1e-3};
};

/// V(t, s) = W_{ε,λ}(t, s) Σ_j e^{−(i/ε)∫_s^t (α_j + λ²α′_j)} P_j(s, ε, λ), where
/// W_{ε,λ} is transported by K = Σ_j (∂P_j) P_j built from the perturbed
/// projections. Throws FrameSmoothnessError when ∂P is not stable under
/// step halving.
CMatrix adiabatic_evolution_diagnostic(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath,
                                       double epsilon, double lambda, double t, double s,
                                       const DiagnosticOptions& options = {});

}  // namespace aww
