#include "aww/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "aww/csv.hpp"
#include "aww/errors.hpp"
#include "aww/reduced.hpp"

namespace aww {

Trajectory leading_order_trajectory(const Scenario& scenario, double epsilon, double lambda,
                                    const std::vector<double>& times) {
    Trajectory out;
    out.t = times;
    for (double t : times) out.z.push_back(scenario.leading->z(epsilon, lambda, scenario.z0, t));
    return out;
}

PointResult evaluate_point(const Scenario& scenario, double epsilon, double lambda, const PointOptions& options) {
    PointResult r;
    r.epsilon = epsilon;
    r.lambda = lambda;
    r.regime = regime_classify(epsilon, lambda);
    check_point(scenario, lambda);

    const SolverSettings& s = scenario.solver;
    DiscretizeOptions disc;
    disc.tol_corr = s.tol_corr;
    disc.horizon = s.t_end / epsilon;
    ModeGrid grid = discretize_bath(*scenario.bath, epsilon, disc);
    r.modes = grid.size();

    ExactOptions ex;
    ex.rtol = s.rtol;
    ex.atol = s.atol;
    ex.dt_out = s.dt_out;
    ex.field_every = options.field_every;
    Trajectory exact =
        propagate_exact(scenario.atom, *scenario.frame, grid, scenario.z0, epsilon, lambda, s.t_end, ex);
    r.norm_defect = exact.max_norm_defect();

    Trajectory lead = leading_order_trajectory(scenario, epsilon, lambda, exact.t);
    r.e_lead = sup_distance(exact, lead);

    const Populations pop = populations(exact, *scenario.frame);
    const LeadingOrder& lo = *scenario.leading;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        for (std::size_t j = 0; j < lo.levels(); ++j) {
            const double approx = lo.population(epsilon, lambda, pop.p[0](static_cast<Eigen::Index>(j)), j, exact.t[k]);
            r.pop_error = std::max(r.pop_error, std::abs(pop.p[k](static_cast<Eigen::Index>(j)) - approx));
        }
    }
    r.p_down_measured = pop.p_down.back();
    r.p_down_predicted = regime_report(lo, epsilon, lambda, scenario.z0, s.t_end).predicted_p_down;

    if (scenario.time_independent) {
        const TimeIndependentSemigroup semigroup(frame_hamiltonian(*scenario.frame, 0.0), scenario.atom.coupling(0.0),
                                                 *scenario.bath, lambda);
        double worst = 0.0;
        for (std::size_t k = 0; k < exact.size(); ++k) {
            worst = std::max(worst, (exact.z[k] - semigroup(scenario.z0, exact.t[k] / epsilon)).norm());
        }
        r.e_semigroup = worst;
    }

    if (options.reduced) {
        VolterraOptions vo;
        vo.mode = s.volterra_mode;
        vo.steps_per_epsilon = s.volterra_steps;
        vo.dt_out = s.dt_out;
        Trajectory volt = volterra_solve(scenario.atom, *scenario.frame, *scenario.bath, epsilon, lambda, scenario.z0,
                                         s.t_end, vo);
        r.e_volt = sup_distance(exact, volt);
        EffectiveOptions eo;
        eo.dt_out = s.dt_out;
        Trajectory eff = effective_solve(scenario.atom, *scenario.frame, *scenario.bath, epsilon, lambda, scenario.z0,
                                         s.t_end, eo);
        r.e_eff = sup_distance(exact, eff);
        if (options.keep_trajectories) {
            r.volterra = std::move(volt);
            r.effective = std::move(eff);
        }
    }
    if (options.keep_trajectories) {
        r.exact = std::move(exact);
        r.lead = std::move(lead);
        r.grid = std::move(grid);
    }
    return r;
}

SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    const std::size_t n = lx.size();
    if (n < 2) throw std::invalid_argument("fit_log_slope: need at least two positive points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_log_slope: abscissae coincide");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.points = n;
    if (n > 2) {
        double sse = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double res = ly[i] - my - fit.slope * (lx[i] - mx);
            sse += res * res;
        }
        fit.stderr_slope = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    }
    return fit;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

SweepResult run_sweep(const Scenario& scenario, std::size_t threads, const PointOptions& options) {
    const std::vector<SweepPointSpec> specs = scenario.sweep_points();
    if (specs.size() < 3) throw ConfigError("need >= 3 points for slope fit");
    // Smallness violations are configuration errors: report before any work.
    for (const auto& p : specs) check_point(scenario, p.lambda);

    SweepResult result;
    result.points.resize(specs.size());
    parallel_for(specs.size(), threads, [&](std::size_t i) {
        PointResult r;
        try {
            r = evaluate_point(scenario, specs[i].epsilon, specs[i].lambda, options);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            r.epsilon = specs[i].epsilon;
            r.lambda = specs[i].lambda;
            r.regime = regime_classify(r.epsilon, r.lambda);
            r.ok = false;
            r.message = e.what();
        }
        r.index = specs[i].index;
        result.points[i] = std::move(r);
    });

    std::vector<double> eps, lam;
    for (const auto& p : result.points) {
        if (!p.ok) result.partial = true;
        eps.push_back(p.epsilon);
        lam.push_back(p.lambda);
    }
    const bool vary_eps = std::adjacent_find(eps.begin(), eps.end(), std::not_equal_to<>()) != eps.end();
    const std::vector<double>& x = vary_eps ? eps : lam;
    const auto add_fit = [&](const std::string& name, auto member) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < result.points.size(); ++i) {
            const PointResult& p = result.points[i];
            if (p.ok && p.*member > 0) {
                xs.push_back(x[i]);
                ys.push_back(p.*member);
            }
        }
        if (xs.size() < 2) return;
        SlopeFit fit = fit_log_slope(xs, ys);
        fit.metric = name;
        fit.variable = vary_eps ? "epsilon" : "lambda";
        result.fits.push_back(fit);
    };
    add_fit("E_lead", &PointResult::e_lead);
    add_fit("E_volt", &PointResult::e_volt);
    add_fit("E_eff", &PointResult::e_eff);
    add_fit("E_semigroup", &PointResult::e_semigroup);
    add_fit("pop_error", &PointResult::pop_error);
    return result;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    csv::Writer out(path, {"index", "regime", "status", "epsilon", "lambda", "modes", "E_lead", "E_volt", "E_eff",
                           "E_semigroup", "pop_error", "p_down_measured", "p_down_predicted", "norm_defect"});
    for (const auto& p : result.points) {
        out.row({std::to_string(p.index), to_string(p.regime), p.ok ? "ok" : "failed"},
                {p.epsilon, p.lambda, static_cast<double>(p.modes), p.e_lead, p.e_volt, p.e_eff, p.e_semigroup,
                 p.pop_error, p.p_down_measured, p.p_down_predicted, p.norm_defect});
    }
}

void write_slopes_csv(const std::filesystem::path& path, const SweepResult& result) {
    csv::Writer out(path, {"metric", "variable", "slope", "stderr", "points"});
    for (const auto& f : result.fits) {
        out.row({f.metric, f.variable}, {f.slope, f.stderr_slope, static_cast<double>(f.points)});
    }
}

}  // namespace aww
