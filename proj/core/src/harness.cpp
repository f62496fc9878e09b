#include "aww/harness.hpp"

#include <iomanip>

#include "aww/csv.hpp"
#include "aww/emission.hpp"
#include "aww/errors.hpp"

namespace aww {

namespace {

std::vector<SweepPointSpec> points_or_single(const Scenario& scenario) {
    const bool sweep_only_run_epsilon =
        scenario.epsilon && scenario.epsilons.size() == 1 && scenario.epsilons.front() == *scenario.epsilon;
    if (scenario.lambda && (scenario.epsilons.empty() || sweep_only_run_epsilon)) return {scenario.single_point()};
    return scenario.sweep_points();
}

}  // namespace

PointResult run_simulate(const Scenario& scenario, std::ostream& log) {
    const SweepPointSpec p = scenario.single_point();
    PointOptions opts;
    opts.reduced = true;
    opts.keep_trajectories = true;
    PointResult r = evaluate_point(scenario, p.epsilon, p.lambda, opts);
    const auto& dir = scenario.out_dir;
    write_trajectory_csv(dir / "exact.csv", *r.exact, *scenario.frame);
    write_trajectory_csv(dir / "volterra.csv", *r.volterra, *scenario.frame);
    write_trajectory_csv(dir / "effective.csv", *r.effective, *scenario.frame);
    write_trajectory_csv(dir / "leading.csv", *r.lead, *scenario.frame);
    csv::Writer cmp(dir / "comparison.csv", {"metric", "value"});
    cmp.row({"epsilon"}, {r.epsilon});
    cmp.row({"lambda"}, {r.lambda});
    cmp.row({"modes"}, {static_cast<double>(r.modes)});
    cmp.row({"E_lead"}, {r.e_lead});
    cmp.row({"E_volt"}, {r.e_volt});
    cmp.row({"E_eff"}, {r.e_eff});
    if (r.e_semigroup >= 0) cmp.row({"E_semigroup"}, {r.e_semigroup});
    cmp.row({"pop_error"}, {r.pop_error});
    cmp.row({"p_down_measured"}, {r.p_down_measured});
    cmp.row({"p_down_predicted"}, {r.p_down_predicted});
    cmp.row({"norm_defect"}, {r.norm_defect});
    log << "simulate " << scenario.name << " eps=" << r.epsilon << " lambda=" << r.lambda << " modes=" << r.modes
        << "\n  E_lead=" << r.e_lead << " E_volt=" << r.e_volt << " E_eff=" << r.e_eff
        << "\n  p_down measured=" << r.p_down_measured << " predicted=" << r.p_down_predicted
        << "\n  norm defect=" << r.norm_defect << "\n";
    return r;
}

SweepResult run_sweep_command(const Scenario& scenario, std::size_t threads, std::ostream& log) {
    PointOptions opts;
    opts.reduced = scenario.sweep_reduced;
    SweepResult res = run_sweep(scenario, threads, opts);
    write_sweep_csv(scenario.out_dir / "sweep.csv", res);
    write_slopes_csv(scenario.out_dir / "slopes.csv", res);
    log << "sweep " << scenario.name << " (" << scenario.direction << ")\n";
    for (const auto& p : res.points) {
        log << "  eps=" << p.epsilon << " lambda=" << p.lambda << " [" << to_string(p.regime) << "] ";
        if (p.ok) log << "E_lead=" << p.e_lead << " pop_error=" << p.pop_error << "\n";
        else log << "FAILED: " << p.message << "\n";
    }
    for (const auto& f : res.fits) {
        log << "  slope " << f.metric << " vs " << f.variable << ": " << f.slope << " +- " << f.stderr_slope << "\n";
    }
    if (res.partial) log << "  (partial results: some points failed)\n";
    return res;
}

EmissionSummary run_emission(const Scenario& scenario, std::ostream& log) {
    const SweepPointSpec p = scenario.single_point();
    PointOptions opts;
    opts.reduced = false;
    opts.keep_trajectories = true;
    opts.field_every = static_cast<std::size_t>(-1);  // first and last samples only
    PointResult r = evaluate_point(scenario, p.epsilon, p.lambda, opts);
    EmissionSummary s;
    s.epsilon = p.epsilon;
    s.lambda = p.lambda;
    s.ratio = p.lambda * p.lambda / p.epsilon;
    const Trajectory& traj = *r.exact;
    s.measured = observable_average(traj.field.back(), *r.grid, scenario.observable).real();
    s.field_norm_sq = traj.field_norm_sq.back();
    s.one_minus_z_sq = 1.0 - traj.z.back().squaredNorm();
    s.regime_a = regime_A_limit(*scenario.frame, *scenario.bath, scenario.observable, 0).real();
    s.regime_b = regime_B_limit(*scenario.leading, scenario.atom, *scenario.bath, scenario.observable, 0, s.ratio,
                                traj.t.back())
                     .real();
    write_spectrum_csv(scenario.out_dir / "spectrum.csv", traj, *r.grid, scenario.observable, s.regime_b);
    csv::Writer out(scenario.out_dir / "emission.csv",
                    {"epsilon", "lambda", "r", "B_measured", "regime_A_limit", "regime_B_limit", "field_norm_sq",
                     "one_minus_z_sq"});
    out.row({s.epsilon, s.lambda, s.ratio, s.measured, s.regime_a, s.regime_b, s.field_norm_sq, s.one_minus_z_sq});
    log << "emission " << scenario.name << " eps=" << s.epsilon << " lambda=" << s.lambda << " r=" << s.ratio
        << "\n  <B>_t=" << s.measured << " regime A limit=" << s.regime_a << " regime B limit=" << s.regime_b << "\n";
    return s;
}

std::vector<PointResult> run_regimes(const Scenario& scenario, std::size_t threads, bool simulate, std::ostream& log) {
    const auto specs = points_or_single(scenario);
    std::vector<PointResult> out(specs.size());
    parallel_for(specs.size(), simulate ? threads : 1, [&](std::size_t i) {
        PointResult r;
        if (simulate) {
            PointOptions opts;
            opts.reduced = false;
            r = evaluate_point(scenario, specs[i].epsilon, specs[i].lambda, opts);
        } else {
            r.epsilon = specs[i].epsilon;
            r.lambda = specs[i].lambda;
            r.regime = regime_classify(r.epsilon, r.lambda);
            r.p_down_predicted =
                regime_report(*scenario.leading, r.epsilon, r.lambda, scenario.z0, scenario.solver.t_end)
                    .predicted_p_down;
            r.p_down_measured = -1.0;
        }
        r.index = specs[i].index;
        out[i] = std::move(r);
    });
    csv::Writer csvout(scenario.out_dir / "regimes.csv",
                       {"index", "regime", "epsilon", "lambda", "r", "p_down_predicted", "p_down_measured"});
    log << "regimes (thresholds on r = lambda^2/eps: strong >= 10, davies in [0.1, 10], weak below)\n";
    for (const auto& r : out) {
        csvout.row({std::to_string(r.index), to_string(r.regime)},
                   {r.epsilon, r.lambda, r.lambda * r.lambda / r.epsilon, r.p_down_predicted, r.p_down_measured});
        log << "  eps=" << r.epsilon << " lambda^2=" << r.lambda * r.lambda << " -> " << to_string(r.regime)
            << " predicted p_down=" << r.p_down_predicted;
        if (simulate) log << " measured=" << r.p_down_measured;
        log << "\n";
    }
    return out;
}

bool run_validate(const Scenario& scenario, std::ostream& log) {
    const auto specs = points_or_single(scenario);
    csv::Writer out(scenario.out_dir / "validate.csv",
                    {"epsilon", "lambda", "smallness", "margin", "smallness_ok", "well_coupled", "gap", "v_sup_sq",
                     "gamma_l1"});
    bool all = true;
    for (const auto& p : specs) {
        const CouplingReport rep =
            validate_coupling(scenario.atom, *scenario.frame, *scenario.bath, p.lambda, scenario.gamma_l1);
        all = all && rep.passed();
        out.row({p.epsilon, p.lambda, rep.smallness, rep.smallness_margin(), rep.smallness_ok ? 1.0 : 0.0,
                 rep.all_well_coupled() ? 1.0 : 0.0, rep.gap, rep.coupling_sup_sq, rep.gamma_l1});
        log << "  lambda=" << p.lambda << " smallness=" << rep.smallness << (rep.smallness_ok ? " ok" : " FAIL")
            << " well-coupled=" << (rep.all_well_coupled() ? "yes" : "NO") << "\n";
    }
    return all;
}

}  // namespace aww
