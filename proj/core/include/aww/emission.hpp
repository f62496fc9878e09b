// emission.hpp: spectrum of the emitted excitation and its limit laws.

#pragma once

#include <filesystem>
#include <vector>

#include "aww/asymptotics.hpp"
#include "aww/atom.hpp"
#include "aww/bath.hpp"
#include "aww/hilbert.hpp"

namespace aww {

/// ⟨B⟩ = Σ_i B(ω_i) |f(ω_i)|².
cplx observable_average(const CVector& field, const ModeGrid& grid, const TestObservable& obs);

/// ⟨B⟩_t at every stored field snapshot of the trajectory.
std::vector<cplx> observable_average(const Trajectory& traj, const ModeGrid& grid, const TestObservable& obs);

/// γ̂_B(α_j(0)) / γ̂(α_j(0)). Throws WellCoupledness when γ̂(α_j(0)) = 0.
cplx regime_A_limit(const EigenFrame& frame, const BathSpec& bath, const TestObservable& obs, std::size_t j);

/// √(2π) r ∫_0^t |v_j(s)|² e^{−2r∫_0^s β_j} γ̂_B(α_j(s)) ds by composite
/// Simpson on a grid resolving the decay rate 2r·max β_j.
cplx regime_B_limit(const LeadingOrder& lo, const AtomPath& atom, const BathSpec& bath, const TestObservable& obs,
                    std::size_t j, double r, double t);

/// (λ/ε)² ∫_0^t ∫_0^t a(s) conj a(s') γ_B((s' − s)/ε) ds ds' with
/// a = ⟨c, z⟩, trapezoid on the stored history up to sample k and γ_B
/// tabulated on the lag grid. Requires a uniform history step.
cplx observable_average_double_integral(const Trajectory& traj, std::size_t k, const AtomPath& atom,
                                        const EigenFrame& frame, const BathSpec& bath, const TestObservable& obs,
                                        double epsilon, double lambda);

/// Columns: kind, t, omega, abs_f_sq, B. Rows of kind "mode" hold the
/// spectrum; one row of kind "summary" per snapshot holds ⟨B⟩_t in abs_f_sq
/// and the limit-law value in B (omega = 0).
void write_spectrum_csv(const std::filesystem::path& path, const Trajectory& traj, const ModeGrid& grid,
                        const TestObservable& obs, double limit_value);

}  // namespace aww
