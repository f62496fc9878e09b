// atom.hpp: time-dependent atomic Hamiltonian A(t), couplings v(t), and the
// smooth eigenframe {α_j(t), φ_j(t)} tracked along t.
//
// All vectors and matrices are written in one fixed computational basis. The
// eigenbasis {φ_j(0)} only enters through w_vector(), which returns the
// rotated coupling in that basis.

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aww/bath.hpp"
#include "aww/types.hpp"

namespace aww {

struct AtomPath {
    std::string name;
    std::size_t levels{0};
    /// Hermitian d×d matrix A(t). Must be evaluable slightly outside [0, 1]
    /// for centered differences; tabulated atoms clamp.
    std::function<CMatrix(double)> hamiltonian;
    /// v_j(t): amplitude attached to the eigenvector φ_j(t).
    std::function<CVector(double)> coupling;
};

/// A(t) = R(θ(t)) diag(α_1(t),…,α_d(t)) R(θ(t))ᵀ, R a rotation in the plane
/// of the first two basis vectors.
AtomPath diag_rotation_atom(std::string name, std::vector<std::function<double(double)>> energies,
                            std::function<double(double)> angle, std::function<CVector(double)> coupling);

/// Time-independent A and v.
AtomPath constant_atom(std::string name, CMatrix hamiltonian, CVector coupling);

/// CSV: t, then d² (re, im) matrix entries row-major, then d (re, im)
/// coupling entries. Entries are spline-interpolated in t.
AtomPath tabulated_atom(const std::filesystem::path& path);

/// "ww-ref-2level": A(t) = R(πt/4) diag(1, 2 + 0.3t) R(πt/4)ᵀ, v = (1, 1).
AtomPath reference_atom();

/// "ww-const-2level": A = diag(1, 2), v = (1, 1).
AtomPath constant_reference_atom();

struct FrameSample {
    double t{0.0};
    RVector energies;  ///< ascending
    CMatrix vectors;   ///< column j is φ_j(t)
};

/// Smooth eigenframe on a uniform grid. Immutable after construction.
///
/// For tracked frames the vector phases are fixed so that
/// ⟨φ_j(t_k), φ_j(t_{k+1})⟩ is real and positive; off-grid queries are
/// aligned to the sample at the left end of their grid cell.
class EigenFrame {
public:
    using Evaluator = std::function<FrameSample(double)>;

    /// Throws GapViolation if the minimum level spacing on the grid, or the
    /// distance of α_1 from the ground level 0, drops below `min_gap`.
    static EigenFrame track(const AtomPath& atom, const TimeGrid& grid, double min_gap = 1e-3);

    /// Frame given by an explicit smooth gauge; no phase alignment applied.
    static EigenFrame from_function(Evaluator exact, const TimeGrid& grid);

    [[nodiscard]] FrameSample at(double t) const;
    [[nodiscard]] const FrameSample& sample(std::size_t k) const { return samples_[k]; }
    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t levels() const noexcept { return levels_; }
    /// Δ₀: grid minimum of pairwise level distances.
    [[nodiscard]] double gap() const noexcept { return gap_; }

    [[nodiscard]] CMatrix projection(std::size_t j, double t) const;
    /// Five-point centered difference with step h (default: grid step).
    [[nodiscard]] CVector vector_derivative(std::size_t j, double t, double h = 0.0) const;
    [[nodiscard]] CMatrix projection_derivative(std::size_t j, double t, double h = 0.0) const;
    /// K(t) = Σ_j (∂_t P_j) P_j, anti-Hermitian.
    [[nodiscard]] CMatrix kato_generator(double t, double h = 0.0) const;

private:
    EigenFrame() = default;

    TimeGrid grid_{};
    std::size_t levels_{0};
    double gap_{0.0};
    std::vector<FrameSample> samples_;
    Evaluator raw_;
    bool aligned_{false};
};

/// Builds the tracked frame with the default grid used by the solvers.
EigenFrame eigenframe(const AtomPath& atom, const TimeGrid& grid, double min_gap = 1e-3);

/// w_j(t) = Σ_ℓ v_ℓ(t) ⟨φ_j(0), φ_ℓ(t)⟩ (components in the basis {φ_j(0)}).
CVector w_vector(const AtomPath& atom, const EigenFrame& frame, double t);

/// Σ_ℓ v_ℓ(t) φ_ℓ(t) in the computational basis; the coupling vector the
/// solvers use.
CVector coupling_vector(const AtomPath& atom, const EigenFrame& frame, double t);

/// Rotated coupling with the sample already at hand.
CVector coupling_vector(const AtomPath& atom, const FrameSample& sample);

struct BerryPhase {
    double value{0.0};
    double imaginary_residue{0.0};
};

/// ξ_j(t) = i ∫_0^t ⟨φ_j, ∂_t φ_j⟩ du by composite Simpson on the frame
/// grid. Throws FrameSmoothnessError if the imaginary residue exceeds 1e-8.
double berry_phase(const EigenFrame& frame, std::size_t j, double t);
BerryPhase berry_phase_detailed(const EigenFrame& frame, std::size_t j, double t);

/// Cumulative ξ_j on every grid point of the frame.
std::vector<double> berry_phase_table(const EigenFrame& frame, std::size_t j);

/// W(t, s) from ∂_t W = K(t) W, W(s, s) = 1, by fourth-order Magnus steps of
/// at most one grid step. Throws IntegratorError if unitarity drifts > 1e-8.
CMatrix kato_intertwiner(const EigenFrame& frame, double t, double s);

struct CouplingReport {
    double lambda{0.0};
    double gap{0.0};
    double coupling_sup_sq{0.0};  ///< ‖v‖²_∞ over the frame grid
    double gamma_l1{0.0};
    double smallness{0.0};        ///< 4λ²‖v‖²_∞‖γ‖_{L¹}/Δ₀
    bool smallness_ok{false};
    std::vector<double> inf_beta; ///< inf_t β_j(t) per level
    std::vector<bool> well_coupled;

    [[nodiscard]] double smallness_margin() const { return 1.0 - smallness; }
    [[nodiscard]] bool all_well_coupled() const;
    [[nodiscard]] bool passed() const { return smallness_ok && all_well_coupled(); }
};

/// Checks the λ-smallness condition and well-coupledness. `gamma_l1` may be
/// passed to avoid recomputing ‖γ‖_{L¹}.
CouplingReport validate_coupling(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath,
                                 double lambda, std::optional<double> gamma_l1 = std::nullopt);

/// Registry used by configuration: "ww-ref-2level", "ww-const-2level".
AtomPath builtin_atom(const std::string& name);

/// ‖v‖²_∞ over the frame grid.
double coupling_sup_sq(const AtomPath& atom, const EigenFrame& frame);

}  // namespace aww
