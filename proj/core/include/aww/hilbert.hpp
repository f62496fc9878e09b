// hilbert.hpp: exact single-excitation dynamics with a discretized field.
//
// The field is replaced by N modes ω_i with couplings g_i = √(u_i ρ(ω_i)),
// u_i composite Gauss–Legendre weights on [0, Ω]. The coupled system
//
//   iε ż   = A(t) z + λ c(t) Σ_i g_i f_i
//   iε ḟ_i = ω_i f_i + λ ⟨c(t), z⟩ g_i
//
// (c(t) = Σ_ℓ v_ℓ(t) φ_ℓ(t)) is integrated in the interaction picture of the
// field, f_i = e^{-iω_i t/ε} h_i.

#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "aww/atom.hpp"
#include "aww/bath.hpp"
#include "aww/types.hpp"

namespace aww {

struct ModeGrid {
    std::vector<double> omega;
    std::vector<double> weight;
    std::vector<double> g;
    double cutoff{0.0};
    double horizon{0.0};          ///< physical time up to which γ_N was checked
    std::size_t nodes_per_panel{0};
    double correlation_error{0.0};  ///< max |γ_N − γ| on [0, horizon]

    [[nodiscard]] std::size_t size() const noexcept { return omega.size(); }
    /// γ_N(t) = Σ g_i² e^{-iω_i t}
    [[nodiscard]] cplx correlation(double t) const;
};

struct DiscretizeOptions {
    double tol_corr{1e-4};
    /// Physical horizon; 0 means 1/ε.
    double horizon{0.0};
    double tail_tol{1e-8};
    std::size_t min_nodes{2};
    std::size_t max_nodes{8};
};

/// Panels of width π/(2·horizon) on [0, Ω]; nodes per panel raised until
/// max_{t ≤ horizon} |γ_N − γ| < tol_corr and |γ_N(0) − γ(0)| < 1e-6.
/// Throws DiscretizationError past max_nodes.
ModeGrid discretize_bath(const BathSpec& bath, double epsilon, const DiscretizeOptions& options = {});

/// Fixed rule without any check: `panels` panels of `nodes` Gauss points on [0, omega_max].
ModeGrid discretize_bath_fixed(const BathSpec& bath, double omega_max, std::size_t panels, std::size_t nodes);

/// max_{0 ≤ t ≤ horizon} |γ_N(t) − γ(t)| on a sampling step resolving Ω.
double correlation_error(const ModeGrid& grid, const BathSpec& bath, double horizon);

struct SingleExcitationState {
    CVector z;
    CVector f;

    [[nodiscard]] double norm_sq() const { return z.squaredNorm() + f.squaredNorm(); }
};

struct Trajectory {
    std::vector<double> t;
    std::vector<CVector> z;
    /// ‖f_t‖² per sample (exact solver only).
    std::vector<double> field_norm_sq;
    /// |‖ψ‖² − 1| per sample (exact solver only).
    std::vector<double> norm_defect;
    /// Field snapshots at `field_index` samples.
    std::vector<std::size_t> field_index;
    std::vector<CVector> field;
    std::size_t steps{0};
    std::size_t rejected{0};

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] bool has_field() const noexcept { return !field.empty(); }
    /// Snapshot at sample k, if stored.
    [[nodiscard]] const CVector* field_at(std::size_t k) const;
    [[nodiscard]] double max_norm_defect() const;
};

struct ExactOptions {
    double rtol{1e-10};
    double atol{1e-12};
    double dt_out{1.0 / 200.0};
    /// Store f at every `field_every`-th sample (and the last); 0 disables.
    std::size_t field_every{0};
    double max_norm_defect{1e-6};
};

/// Exact evolution from f_0 = 0 on [0, t_end] (slow time).
Trajectory propagate_exact(const AtomPath& atom, const EigenFrame& frame, const ModeGrid& grid, const CVector& z0,
                           double epsilon, double lambda, double t_end, const ExactOptions& options = {});

/// Evolves a full state from t_from to t_to (either direction); returns the
/// final state. Used for reversibility checks.
SingleExcitationState propagate_state(const AtomPath& atom, const EigenFrame& frame, const ModeGrid& grid,
                                      SingleExcitationState state, double epsilon, double lambda, double t_from,
                                      double t_to, const ExactOptions& options = {});

struct Populations {
    std::vector<double> t;
    std::vector<RVector> p;  ///< p_j(t) = |⟨φ_j(t), z(t)⟩|²
    std::vector<double> p_down;
};

Populations populations(const Trajectory& traj, const EigenFrame& frame);

/// f_t(ω_i) = −i(λ/ε) g_i ∫_0^t ⟨c(s), z(s)⟩ e^{-i(t−s)ω_i/ε} ds by trapezoid
/// on the stored z history, for sample `k`. Throws ResolutionError when
/// Ω·dt/ε > 0.5.
CVector field_amplitude_closed_form(const Trajectory& traj, std::size_t k, const AtomPath& atom,
                                    const EigenFrame& frame, const ModeGrid& grid, double epsilon, double lambda);

/// Columns: t, re_z1, im_z1, …, p_1 … p_d, p_down, norm_defect.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, const EigenFrame& frame);

/// Columns: t, omega, abs_f_sq for every stored snapshot.
void write_field_csv(const std::filesystem::path& path, const Trajectory& traj, const ModeGrid& grid);

}  // namespace aww
