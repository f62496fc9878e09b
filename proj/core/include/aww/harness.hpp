// harness.hpp: the five CLI operations as library calls.
//
// Each writes its CSV files under scenario.out_dir and a short report to
// `log`. Configuration problems surface as ConfigError, numerical ones as
// NumericalError or another aww::Error.

#pragma once

#include <ostream>

#include "aww/scenario.hpp"
#include "aww/sweep.hpp"

namespace aww {

/// exact.csv, volterra.csv, effective.csv, leading.csv, comparison.csv.
PointResult run_simulate(const Scenario& scenario, std::ostream& log);

/// sweep.csv and slopes.csv.
SweepResult run_sweep_command(const Scenario& scenario, std::size_t threads, std::ostream& log);

struct EmissionSummary {
    double epsilon{0.0};
    double lambda{0.0};
    double ratio{0.0};
    double measured{0.0};   ///< ⟨B⟩ at t_end
    double regime_a{0.0};
    double regime_b{0.0};
    double field_norm_sq{0.0};
    double one_minus_z_sq{0.0};
};

/// spectrum.csv and emission.csv; the limit for level 1 (index 0).
EmissionSummary run_emission(const Scenario& scenario, std::ostream& log);

/// regimes.csv: classification and predicted p↓ for every sweep point;
/// measured p↓ when `simulate` is true.
std::vector<PointResult> run_regimes(const Scenario& scenario, std::size_t threads, bool simulate, std::ostream& log);

/// validate.csv. Returns true when every point passes both conditions.
bool run_validate(const Scenario& scenario, std::ostream& log);

}  // namespace aww
