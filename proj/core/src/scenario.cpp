#include "aww/scenario.hpp"

#include <cmath>
#include <sstream>

#include "aww/csv.hpp"
#include "aww/errors.hpp"

namespace aww {

namespace {

struct Preset {
    std::string atom;
    double t_end;
    bool time_independent;
    std::optional<double> epsilon;
};

std::optional<Preset> preset(const std::string& name) {
    if (name == "ww-ref-2level") return Preset{"ww-ref-2level", 1.0, false, std::nullopt};
    if (name == "ww-const-2level") return Preset{"ww-const-2level", 20.0, true, 1.0};
    return std::nullopt;
}

CVector parse_state(const std::string& text, std::size_t d) {
    std::vector<cplx> entries;
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto colon = cell.find(':');
        if (colon == std::string::npos) {
            entries.emplace_back(parse_number(cell, "init.z0"), 0.0);
        } else {
            entries.emplace_back(parse_number(cell.substr(0, colon), "init.z0"),
                                 parse_number(cell.substr(colon + 1), "init.z0"));
        }
    }
    if (entries.size() != d) {
        throw ConfigError("key 'init.z0': expected " + std::to_string(d) + " entries, got " +
                          std::to_string(entries.size()));
    }
    CVector z(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) z(static_cast<Eigen::Index>(j)) = entries[j];
    if (std::abs(z.norm() - 1.0) > 1e-9) throw ConfigError("key 'init.z0': state must have unit norm");
    return z / z.norm();
}

LambdaRule parse_rule(const std::string& text) {
    std::istringstream ss(text);
    std::string kind;
    ss >> kind;
    LambdaRule rule;
    if (kind == "power") {
        std::string c, p;
        if (!(ss >> c >> p)) throw ConfigError("key 'sweep.lambda_rule': expected 'power c p'");
        rule.kind = LambdaRule::Kind::power;
        rule.c = parse_number(c, "sweep.lambda_rule");
        rule.p = parse_number(p, "sweep.lambda_rule");
        if (rule.c < 0) throw ConfigError("key 'sweep.lambda_rule': c must be non-negative");
    } else if (kind == "list") {
        std::string rest;
        std::getline(ss, rest);
        rule.kind = LambdaRule::Kind::list;
        rule.values = parse_number_list(rest, "sweep.lambda_rule");
    } else {
        throw ConfigError("key 'sweep.lambda_rule': expected 'power c p' or 'list l1,l2,...'");
    }
    return rule;
}

TestObservable parse_observable(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const double arg = colon == std::string::npos ? 1.0 : parse_number(text.substr(colon + 1), "emission.observable");
    if (kind == "constant") return TestObservable::constant(arg);
    if (kind == "power") return TestObservable::power(arg);
    throw ConfigError("key 'emission.observable': expected 'constant:c' or 'power:p'");
}

}  // namespace

std::string LambdaRule::describe() const {
    if (kind == Kind::power) return "lambda^2 = " + csv::format(c) + " * eps^" + csv::format(p);
    std::string s = "lambda in {";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + csv::format(values[i]);
    return s + "}";
}

std::vector<SweepPointSpec> Scenario::sweep_points() const {
    std::vector<SweepPointSpec> out;
    if (rule.kind == LambdaRule::Kind::power) {
        for (double e : epsilons) out.push_back({out.size(), e, std::sqrt(rule.c * std::pow(e, rule.p))});
    } else if (epsilons.size() == 1) {
        for (double l : rule.values) out.push_back({out.size(), epsilons.front(), l});
    } else if (epsilons.size() == rule.values.size()) {
        for (std::size_t i = 0; i < epsilons.size(); ++i) out.push_back({i, epsilons[i], rule.values[i]});
    } else {
        throw ConfigError("sweep.lambda_rule list must have one entry per epsilon or be used with a single epsilon");
    }
    return out;
}

SweepPointSpec Scenario::single_point() const {
    if (!epsilon) throw ConfigError("missing required key 'run.epsilon'");
    if (!lambda) throw ConfigError("missing required key 'run.lambda' (or 'run.lambda_sq')");
    return {0, *epsilon, *lambda};
}

Scenario load_scenario(const Config& config) {
    Scenario sc;
    std::optional<Preset> pre;
    if (const auto name = config.find("scenario")) {
        pre = preset(*name);
        if (!pre) throw ConfigError("key 'scenario': unknown builtin scenario '" + *name + "'");
        sc.name = *name;
    }

    if (const auto file = config.find("atom.file")) {
        sc.atom = tabulated_atom(*file);
    } else if (const auto name = config.find("atom.name")) {
        sc.atom = builtin_atom(*name);
    } else if (pre) {
        sc.atom = builtin_atom(pre->atom);
    } else {
        throw ConfigError("missing required key 'atom.name' (or 'atom.file')");
    }
    if (sc.name.empty()) sc.name = sc.atom.name;
    sc.time_independent = config.get_bool("atom.time_independent", pre ? pre->time_independent : false);

    std::optional<DecayBound> bound;
    if (config.has("bath.c_gamma") || config.has("bath.m")) {
        bound = DecayBound{config.get_double("bath.c_gamma"), config.get_double("bath.m")};
    }
    if (const auto file = config.find("bath.file")) {
        sc.bath = std::make_shared<const BathSpec>(BathSpec::from_csv(*file, bound));
    } else if (const auto name = config.find("bath.name")) {
        sc.bath = std::make_shared<const BathSpec>(builtin_bath(*name));
    } else if (pre) {
        sc.bath = std::make_shared<const BathSpec>(BathSpec::reference());
    } else {
        throw ConfigError("missing required key 'bath.name' (or 'bath.file')");
    }

    if (const auto z = config.find("init.z0")) {
        sc.z0 = parse_state(*z, sc.atom.levels);
    } else {
        sc.z0 = CVector::Zero(static_cast<Eigen::Index>(sc.atom.levels));
        sc.z0(0) = 1.0;
    }

    SolverSettings& s = sc.solver;
    s.rtol = config.get_double("solver.rtol", s.rtol);
    s.atol = config.get_double("solver.atol", s.atol);
    s.dt_out = config.get_double("solver.dt_out", s.dt_out);
    s.tol_corr = config.get_double("solver.tol_corr", s.tol_corr);
    s.t_end = config.get_double("solver.t_end", pre ? pre->t_end : s.t_end);
    s.frame_intervals = config.get_size("solver.frame_intervals", s.frame_intervals);
    s.volterra_steps = config.get_size("solver.volterra_steps", s.volterra_steps);
    const std::string mode = config.get("solver.volterra_mode", "frozen");
    if (mode == "frozen") {
        s.volterra_mode = MemoryMode::frozen;
    } else if (mode == "full") {
        s.volterra_mode = MemoryMode::full;
    } else {
        throw ConfigError("key 'solver.volterra_mode': expected 'frozen' or 'full'");
    }
    if (!(s.rtol > 0 && s.atol > 0 && s.dt_out > 0 && s.tol_corr > 0 && s.t_end > 0)) {
        throw ConfigError("solver tolerances, dt_out and t_end must be positive");
    }
    if (s.frame_intervals < 4 || s.volterra_steps < 2) {
        throw ConfigError("solver.frame_intervals must be >= 4 and solver.volterra_steps >= 2");
    }

    if (config.has("run.epsilon")) sc.epsilon = config.get_double("run.epsilon");
    else if (pre && pre->epsilon) sc.epsilon = pre->epsilon;
    if (config.has("run.lambda")) sc.lambda = config.get_double("run.lambda");
    else if (config.has("run.lambda_sq")) sc.lambda = std::sqrt(config.get_double("run.lambda_sq"));

    if (config.has("sweep.epsilons")) sc.epsilons = config.get_list("sweep.epsilons");
    else if (sc.epsilon) sc.epsilons = {*sc.epsilon};
    for (double e : sc.epsilons) {
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("key 'sweep.epsilons': values must lie in (0, 1]");
    }
    if (sc.epsilon && !(*sc.epsilon > 0.0 && *sc.epsilon <= 1.0)) {
        throw ConfigError("key 'run.epsilon': value must lie in (0, 1]");
    }
    sc.rule = parse_rule(config.get("sweep.lambda_rule", "power 1 1"));
    sc.direction = config.get("sweep.direction", sc.rule.describe());
    sc.sweep_reduced = config.get_bool("sweep.reduced", !sc.time_independent);
    sc.observable = parse_observable(config.get("emission.observable", "constant:1"));
    sc.out_dir = config.get("output.dir", "out");

    const TimeGrid grid{0.0, s.t_end, s.frame_intervals};
    try {
        sc.frame = std::make_shared<const EigenFrame>(EigenFrame::track(sc.atom, grid));
    } catch (const GapViolation& e) {
        throw ConfigError(std::string("atom violates the gap condition: ") + e.what());
    }
    sc.gamma_l1 = correlation_l1_norm(*sc.bath);
    sc.leading = std::make_shared<const LeadingOrder>(sc.atom, *sc.frame, *sc.bath);
    return sc;
}

CouplingReport check_point(const Scenario& scenario, double lambda) {
    CouplingReport report =
        validate_coupling(scenario.atom, *scenario.frame, *scenario.bath, lambda, scenario.gamma_l1);
    if (!scenario.override_smallness && !report.smallness_ok) {
        throw ConfigError("lambda = " + csv::format(lambda) + " violates the smallness condition (" +
                          csv::format(report.smallness) + " >= 1); pass --override-smallness to run anyway");
    }
    if (!scenario.override_smallness && !report.all_well_coupled()) {
        throw ConfigError("a level is not well coupled to the bath; pass --override-smallness to run anyway");
    }
    return report;
}

}  // namespace aww
