// scenario.hpp: everything one harness run needs, assembled from a Config.
//
// Recognised keys:
//   scenario              builtin preset: ww-ref-2level | ww-const-2level
//   atom.name | atom.file builtin atom or tabulated CSV
//   bath.name | bath.file builtin bath ("reference") or CSV with omega,rho
//   bath.c_gamma, bath.m  decay envelope for tabulated baths
//   init.z0               comma list; entries "re" or "re:im"
//   run.epsilon, run.lambda | run.lambda_sq        single point (simulate, emission)
//   sweep.epsilons        comma list
//   sweep.lambda_rule     "power c p" (λ² = c ε^p) or "list l1,l2,…"
//   sweep.direction       free-form tag copied into outputs
//   sweep.reduced         also run the reduced solvers (default true)
//   solver.rtol, solver.atol, solver.dt_out, solver.tol_corr, solver.t_end,
//   solver.frame_intervals, solver.volterra_steps, solver.volterra_mode
//   emission.observable   "constant:c" or "power:p"
//   output.dir

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aww/asymptotics.hpp"
#include "aww/atom.hpp"
#include "aww/bath.hpp"
#include "aww/config.hpp"
#include "aww/reduced.hpp"

namespace aww {

struct SolverSettings {
    double rtol{1e-10};
    double atol{1e-12};
    double dt_out{1.0 / 200.0};
    double tol_corr{1e-4};
    double t_end{1.0};
    std::size_t frame_intervals{2000};
    std::size_t volterra_steps{40};
    MemoryMode volterra_mode{MemoryMode::frozen};
};

struct LambdaRule {
    enum class Kind { power, list };
    Kind kind{Kind::power};
    double c{1.0};
    double p{1.0};
    std::vector<double> values;

    [[nodiscard]] std::string describe() const;
};

struct SweepPointSpec {
    std::size_t index{0};
    double epsilon{0.0};
    double lambda{0.0};
};

struct Scenario {
    std::string name;
    AtomPath atom;
    std::shared_ptr<const BathSpec> bath;
    CVector z0;
    bool time_independent{false};

    std::optional<double> epsilon;
    std::optional<double> lambda;
    std::vector<double> epsilons;
    LambdaRule rule;
    std::string direction;
    bool sweep_reduced{true};

    SolverSettings solver;
    TestObservable observable{TestObservable::constant(1.0)};
    std::filesystem::path out_dir{"out"};
    bool override_smallness{false};

    double gamma_l1{0.0};
    std::shared_ptr<const EigenFrame> frame;
    std::shared_ptr<const LeadingOrder> leading;

    /// Sweep points: λ from the power rule, a λ list zipped with ε, or a
    /// λ list at a single ε.
    [[nodiscard]] std::vector<SweepPointSpec> sweep_points() const;
    /// The single point for simulate/emission; ConfigError names the missing key.
    [[nodiscard]] SweepPointSpec single_point() const;
};

/// Builds atom, bath, frame and leading-order tables. ConfigError on any
/// missing or malformed key.
Scenario load_scenario(const Config& config);

/// Throws ConfigError unless validate_coupling passes or the override is set.
CouplingReport check_point(const Scenario& scenario, double lambda);

}  // namespace aww
