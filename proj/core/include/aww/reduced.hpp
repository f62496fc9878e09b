// reduced.hpp: atomic dynamics with the field eliminated.
//
// U_ε(t, s) solves iε ∂_t U = A(t) U. In the interaction picture y = U_ε(t)* z
// the atom obeys the memory equation
//
//   ∂_t y(t) = −(λ²/ε²) β(t) ∫_0^t ⟨β(s), y(s)⟩ γ((t−s)/ε) ds,  β = U_ε(t)* c(t).
//
// The effective generator replaces the memory by the spectral operator
// Γ_ε(t) = Σ_j (∫_0^{t/ε} e^{ixα_j(t)} γ(x) dx) P_j(t).

#pragma once

#include <vector>

#include "aww/atom.hpp"
#include "aww/bath.hpp"
#include "aww/hilbert.hpp"
#include "aww/types.hpp"

namespace aww {

/// A(t) rebuilt from the frame: Σ_j α_j φ_j φ_j*.
CMatrix frame_hamiltonian(const EigenFrame& frame, double t);

/// U_ε(t, s) by Magnus-4 with at most `max_phase` radians of ‖A‖/ε per step.
/// Throws IntegratorError if the result drifts from unitarity by > 1e-8.
CMatrix atomic_propagator(const EigenFrame& frame, double epsilon, double t, double s, double max_phase = 0.1);

/// U_ε(times[k], times[0]) for every k, sharing the steps between samples.
std::vector<CMatrix> atomic_propagator_path(const EigenFrame& frame, double epsilon, const std::vector<double>& times,
                                            double max_phase = 0.1);

enum class MemoryMode {
    /// The memory equation as written.
    full,
    /// History frozen at the current time: y(s) → y(t), c(s) → c(t), which
    /// gives iε ż = [A − iλ² |c⟩⟨c| M(t)] z with
    /// M(t) = ε⁻¹ ∫_0^t γ((t−s)/ε) U_ε(s, t) ds.
    frozen,
};

struct VolterraOptions {
    MemoryMode mode{MemoryMode::full};
    /// Fine steps per unit of ε, i.e. h ≤ ε / steps_per_epsilon.
    std::size_t steps_per_epsilon{40};
    double dt_out{1.0 / 200.0};
    double kernel_cutoff{1e-12};
};

/// Implicit trapezoid in time, trapezoid history quadrature. Throws
/// ResolutionError if γ changes by more than half of γ(0) between nodes or
/// α_max h/ε > 0.5.
Trajectory volterra_solve(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                          double lambda, const CVector& z0, double t_end, const VolterraOptions& options = {});

/// Γ_ε(t) in the computational basis.
CMatrix gamma_operator(const EigenFrame& frame, const BathSpec& bath, double epsilon, double t);

/// G_{ε,λ}(t) = A(t) − iλ² |c(t)⟩⟨c(t)| Γ_ε(t).
CMatrix effective_generator(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                            double lambda, double t);

struct EffectiveOptions {
    double dt_out{1.0 / 200.0};
    double max_phase{0.1};
};

/// iε ∂_t z = G_{ε,λ}(t) z by Magnus-4 with the same step rule as U_ε.
Trajectory effective_solve(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                           double lambda, const CVector& z0, double t_end, const EffectiveOptions& options = {});

/// U_{ε,λ}(t, s) generated by G_{ε,λ}: iε ∂_t U = G U, U(s, s) = 1.
CMatrix effective_propagator(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                             double lambda, double t, double s, double max_phase = 0.1);

/// max_k ‖a.z[k] − b.z[k]‖ over common samples (same time grid required).
double sup_distance(const Trajectory& a, const Trajectory& b);

}  // namespace aww
