// sweep.hpp: per-point error metrics, parallel sweeps and log-log fits.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aww/asymptotics.hpp"
#include "aww/hilbert.hpp"
#include "aww/scenario.hpp"

namespace aww {

struct PointOptions {
    bool reduced{true};
    bool keep_trajectories{false};
    /// Field snapshot stride for the exact run (0: none).
    std::size_t field_every{0};
};

struct PointResult {
    std::size_t index{0};
    double epsilon{0.0};
    double lambda{0.0};
    Regime regime{Regime::davies};
    std::size_t modes{0};

    double e_lead{0.0};        ///< sup_t ‖z_exact − z_lead‖
    double e_volt{-1.0};       ///< sup_t ‖z_exact − z_volterra‖, −1 if not run
    double e_eff{-1.0};        ///< sup_t ‖z_exact − z_effective‖, −1 if not run
    double e_semigroup{-1.0};  ///< time-independent scenarios only
    double pop_error{0.0};     ///< max_{t,j} |p_j − e^{−2(λ²/ε)∫β_j} p_j(0)|
    double p_down_measured{0.0};
    double p_down_predicted{0.0};
    double norm_defect{0.0};

    bool ok{true};
    std::string message;

    std::optional<Trajectory> exact, lead, volterra, effective;
    std::optional<ModeGrid> grid;
};

/// Runs the exact solver and the requested approximations at one (ε, λ).
/// Smallness is checked through check_point.
PointResult evaluate_point(const Scenario& scenario, double epsilon, double lambda, const PointOptions& options = {});

/// z_lead sampled on the exact trajectory's time grid.
Trajectory leading_order_trajectory(const Scenario& scenario, double epsilon, double lambda,
                                    const std::vector<double>& times);

struct SlopeFit {
    std::string metric;
    std::string variable;
    double slope{0.0};
    double stderr_slope{0.0};
    std::size_t points{0};
};

/// Least squares of log y on log x; stderr from the residuals (0 for two
/// points). Throws std::invalid_argument for fewer than two usable points.
SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
    std::vector<PointResult> points;
    std::vector<SlopeFit> fits;
    bool partial{false};
};

/// Runs the points on `threads` workers, merges by index and fits every
/// metric against ε (or λ when ε is fixed). A failing point is recorded
/// with ok = false and does not stop the others. ConfigError for fewer
/// than three points.
SweepResult run_sweep(const Scenario& scenario, std::size_t threads, const PointOptions& options = {});

/// Calls body(i) for i in [0, n) on `threads` workers. Exceptions escape
/// after all workers join (the first one is rethrown).
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
void write_slopes_csv(const std::filesystem::path& path, const SweepResult& result);

}  // namespace aww
