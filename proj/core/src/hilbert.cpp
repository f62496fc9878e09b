#include "aww/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "aww/csv.hpp"
#include "aww/errors.hpp"
#include "aww/quadrature.hpp"

namespace aww {

namespace odeint = boost::numeric::odeint;

cplx ModeGrid::correlation(double t) const {
    cplx sum{};
    for (std::size_t i = 0; i < omega.size(); ++i) sum += g[i] * g[i] * std::polar(1.0, -omega[i] * t);
    return sum;
}

ModeGrid discretize_bath_fixed(const BathSpec& bath, double omega_max, std::size_t panels, std::size_t nodes) {
    if (panels == 0 || nodes == 0) throw std::invalid_argument("discretize_bath_fixed: empty rule");
    const quad::GaussRule& rule = quad::gauss_legendre(static_cast<int>(nodes));
    ModeGrid grid;
    grid.cutoff = omega_max;
    grid.nodes_per_panel = nodes;
    const double width = omega_max / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * width;
        for (std::size_t i = 0; i < nodes; ++i) {
            const double w = mid + 0.5 * width * rule.nodes[i];
            const double u = 0.5 * width * rule.weights[i];
            grid.omega.push_back(w);
            grid.weight.push_back(u);
            grid.g.push_back(std::sqrt(u * std::max(bath.density(w), 0.0)));
        }
    }
    return grid;
}

double correlation_error(const ModeGrid& grid, const BathSpec& bath, double horizon) {
    const double dt = std::min(0.05, kPi / (4.0 * std::max(grid.cutoff, 1.0)));
    const auto samples = static_cast<std::size_t>(std::ceil(horizon / dt));
    const std::size_t n = grid.size();
    // e^{-iω_i t} advanced by repeated multiplication.
    std::vector<cplx> phase(n, cplx(1.0)), step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = std::polar(1.0, -grid.omega[i] * dt);
    double worst = 0.0;
    for (std::size_t k = 0; k <= samples; ++k) {
        if (k % 256 == 0) {
            for (std::size_t i = 0; i < n; ++i) phase[i] = std::polar(1.0, -grid.omega[i] * dt * static_cast<double>(k));
        }
        cplx sum{};
        for (std::size_t i = 0; i < n; ++i) sum += grid.g[i] * grid.g[i] * phase[i];
        worst = std::max(worst, std::abs(sum - correlation(bath, dt * static_cast<double>(k))));
        for (std::size_t i = 0; i < n; ++i) phase[i] *= step[i];
    }
    return worst;
}

ModeGrid discretize_bath(const BathSpec& bath, double epsilon, const DiscretizeOptions& options) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("discretize_bath: epsilon must lie in (0, 1]");
    const double horizon = options.horizon > 0.0 ? options.horizon : 1.0 / epsilon;
    const double omega_max = bath.cutoff(options.tail_tol);
    const auto panels = static_cast<std::size_t>(std::ceil(omega_max * 2.0 * horizon / kPi));
    double achieved = std::numeric_limits<double>::infinity();
    for (std::size_t nodes = options.min_nodes; nodes <= options.max_nodes; ++nodes) {
        ModeGrid grid = discretize_bath_fixed(bath, omega_max, panels, nodes);
        grid.horizon = horizon;
        const double err0 = std::abs(grid.correlation(0.0) - correlation(bath, 0.0));
        grid.correlation_error = correlation_error(grid, bath, horizon);
        achieved = std::max(err0, grid.correlation_error);
        if (err0 < 1e-6 && grid.correlation_error < options.tol_corr) return grid;
    }
    throw DiscretizationError("mode grid misses the correlation tolerance " + csv::format(options.tol_corr), achieved);
}

const CVector* Trajectory::field_at(std::size_t k) const {
    const auto it = std::find(field_index.begin(), field_index.end(), k);
    return it == field_index.end() ? nullptr : &field[static_cast<std::size_t>(it - field_index.begin())];
}

double Trajectory::max_norm_defect() const {
    return norm_defect.empty() ? 0.0 : *std::max_element(norm_defect.begin(), norm_defect.end());
}

namespace {

using State = std::vector<cplx>;

struct InteractionSystem {
    const AtomPath& atom;
    const EigenFrame& frame;
    const ModeGrid& grid;
    double epsilon;
    double lambda;
    std::size_t d;

    void operator()(const State& x, State& dxdt, double t) const {
        const std::size_t n = grid.size();
        const FrameSample s = frame.at(t);
        const CVector c = coupling_vector(atom, s);
        const CMatrix a = atom.hamiltonian(t);
        const Eigen::Map<const CVector> z(x.data(), static_cast<Eigen::Index>(d));
        const cplx overlap = c.dot(z);
        const double rate = t / epsilon;
        const cplx factor = -kI / epsilon;
        cplx field{};
        for (std::size_t i = 0; i < n; ++i) {
            const cplx ph = std::polar(1.0, grid.omega[i] * rate);
            field += grid.g[i] * std::conj(ph) * x[d + i];
            dxdt[d + i] = factor * lambda * overlap * grid.g[i] * ph;
        }
        const CVector dz = factor * (a * z + lambda * field * c);
        for (std::size_t j = 0; j < d; ++j) dxdt[j] = dz(static_cast<Eigen::Index>(j));
    }
};

struct Integrator {
    using Stepper = odeint::runge_kutta_dopri5<State>;

    Integrator(InteractionSystem sys, const ExactOptions& opts)
        : system(sys), options(opts), stepper(odeint::make_controlled<Stepper>(opts.atol, opts.rtol)) {}

    InteractionSystem system;
    ExactOptions options;
    odeint::result_of::make_controlled<Stepper>::type stepper;
    std::size_t steps{0};
    std::size_t rejected{0};
    double dt{0.0};

    void advance(State& x, double& t, double target) {
        const double dir = target >= t ? 1.0 : -1.0;
        if (dt == 0.0 || dt * dir < 0.0) dt = dir * 1e-3 * system.epsilon;
        while (dir * (target - t) > 0.0) {
            const bool clipped = std::abs(target - t) < std::abs(dt);
            double h = clipped ? target - t : dt;
            if (stepper.try_step(system, x, t, h) == odeint::success) {
                ++steps;
                // A clipped step must not shrink the proposal for the next one.
                if (!clipped || std::abs(h) > std::abs(dt)) dt = h;
                if (clipped) t = target;
            } else {
                ++rejected;
                dt = h;
                if (std::abs(h) < 1e-13 * std::max(1.0, std::abs(t))) {
                    throw StiffnessError("step size underflow at t=" + csv::format(t) +
                                             "; use a larger epsilon or a coarser output step",
                                         std::abs(h));
                }
            }
        }
    }
};

std::vector<double> output_times(double from, double to, double dt_out) {
    const double span = std::abs(to - from);
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt_out - 1e-9)));
    std::vector<double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out[k] = from + (to - from) * static_cast<double>(k) / static_cast<double>(n);
    out.back() = to;
    return out;
}

}  // namespace

Trajectory propagate_exact(const AtomPath& atom, const EigenFrame& frame, const ModeGrid& grid, const CVector& z0,
                           double epsilon, double lambda, double t_end, const ExactOptions& options) {
    const auto d = static_cast<std::size_t>(z0.size());
    if (d != atom.levels) throw std::invalid_argument("propagate_exact: z0 has the wrong dimension");
    if (std::abs(z0.norm() - 1.0) > 1e-12) throw std::invalid_argument("propagate_exact: z0 must be normalized");
    const std::size_t n = grid.size();
    State x(d + n, cplx{});
    for (std::size_t j = 0; j < d; ++j) x[j] = z0(static_cast<Eigen::Index>(j));

    Integrator integ({atom, frame, grid, epsilon, lambda, d}, options);
    Trajectory traj;
    const auto times = output_times(0.0, t_end, options.dt_out);
    double t = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0) integ.advance(x, t, times[k]);
        const Eigen::Map<const CVector> z(x.data(), static_cast<Eigen::Index>(d));
        double field_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) field_sq += std::norm(x[d + i]);
        const double defect = std::abs(z.squaredNorm() + field_sq - 1.0);
        traj.t.push_back(times[k]);
        traj.z.emplace_back(z);
        traj.field_norm_sq.push_back(field_sq);
        traj.norm_defect.push_back(defect);
        if (options.field_every > 0 && (k % options.field_every == 0 || k + 1 == times.size())) {
            CVector f(static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) {
                f(static_cast<Eigen::Index>(i)) = std::polar(1.0, -grid.omega[i] * times[k] / epsilon) * x[d + i];
            }
            traj.field_index.push_back(k);
            traj.field.push_back(std::move(f));
        }
        if (defect > options.max_norm_defect) {
            throw IntegratorError("norm defect exceeded at t=" + csv::format(times[k]), defect);
        }
    }
    traj.steps = integ.steps;
    traj.rejected = integ.rejected;
    return traj;
}

SingleExcitationState propagate_state(const AtomPath& atom, const EigenFrame& frame, const ModeGrid& grid,
                                      SingleExcitationState state, double epsilon, double lambda, double t_from,
                                      double t_to, const ExactOptions& options) {
    const auto d = static_cast<std::size_t>(state.z.size());
    const std::size_t n = grid.size();
    if (static_cast<std::size_t>(state.f.size()) != n) throw std::invalid_argument("propagate_state: field size");
    State x(d + n);
    for (std::size_t j = 0; j < d; ++j) x[j] = state.z(static_cast<Eigen::Index>(j));
    for (std::size_t i = 0; i < n; ++i) {
        x[d + i] = std::polar(1.0, grid.omega[i] * t_from / epsilon) * state.f(static_cast<Eigen::Index>(i));
    }
    Integrator integ({atom, frame, grid, epsilon, lambda, d}, options);
    double t = t_from;
    for (double target : output_times(t_from, t_to, options.dt_out)) integ.advance(x, t, target);
    for (std::size_t j = 0; j < d; ++j) state.z(static_cast<Eigen::Index>(j)) = x[j];
    for (std::size_t i = 0; i < n; ++i) {
        state.f(static_cast<Eigen::Index>(i)) = std::polar(1.0, -grid.omega[i] * t_to / epsilon) * x[d + i];
    }
    return state;
}

Populations populations(const Trajectory& traj, const EigenFrame& frame) {
    Populations pop;
    pop.t = traj.t;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const FrameSample s = frame.at(traj.t[k]);
        const CVector proj = s.vectors.adjoint() * traj.z[k];
        pop.p.emplace_back(proj.cwiseAbs2());
        pop.p_down.push_back(1.0 - traj.z[k].squaredNorm());
    }
    return pop;
}

CVector field_amplitude_closed_form(const Trajectory& traj, std::size_t k, const AtomPath& atom,
                                    const EigenFrame& frame, const ModeGrid& grid, double epsilon, double lambda) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    CVector f = CVector::Zero(n);
    if (k == 0) return f;
    double max_dt = 0.0;
    for (std::size_t m = 0; m < k; ++m) max_dt = std::max(max_dt, traj.t[m + 1] - traj.t[m]);
    const double phase_step = grid.cutoff * max_dt / epsilon;
    if (phase_step > 0.5) {
        throw ResolutionError("history step too coarse for the field phases; reduce dt_out", phase_step);
    }
    std::vector<cplx> source(k + 1);
    for (std::size_t m = 0; m <= k; ++m) source[m] = coupling_vector(atom, frame, traj.t[m]).dot(traj.z[m]);
    const double t = traj.t[k];
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = grid.omega[static_cast<std::size_t>(i)] / epsilon;
        cplx sum{};
        for (std::size_t m = 0; m <= k; ++m) {
            const double left = m > 0 ? traj.t[m] - traj.t[m - 1] : 0.0;
            const double right = m < k ? traj.t[m + 1] - traj.t[m] : 0.0;
            sum += 0.5 * (left + right) * source[m] * std::polar(1.0, -(t - traj.t[m]) * w);
        }
        f(i) = -kI * (lambda / epsilon) * grid.g[static_cast<std::size_t>(i)] * sum;
    }
    return f;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, const EigenFrame& frame) {
    const std::size_t d = frame.levels();
    std::vector<std::string> header{"t"};
    for (std::size_t j = 1; j <= d; ++j) {
        header.push_back("re_z" + std::to_string(j));
        header.push_back("im_z" + std::to_string(j));
    }
    for (std::size_t j = 1; j <= d; ++j) header.push_back("p_" + std::to_string(j));
    header.emplace_back("p_down");
    header.emplace_back("norm_defect");
    csv::Writer out(path, header);
    const Populations pop = populations(traj, frame);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::vector<double> row{traj.t[k]};
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
            row.push_back(traj.z[k](j).real());
            row.push_back(traj.z[k](j).imag());
        }
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) row.push_back(pop.p[k](j));
        row.push_back(pop.p_down[k]);
        row.push_back(k < traj.norm_defect.size() ? traj.norm_defect[k] : 0.0);
        out.row(row);
    }
}

void write_field_csv(const std::filesystem::path& path, const Trajectory& traj, const ModeGrid& grid) {
    csv::Writer out(path, {"t", "omega", "abs_f_sq"});
    for (std::size_t s = 0; s < traj.field.size(); ++s) {
        const double t = traj.t[traj.field_index[s]];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out.row({t, grid.omega[i], std::norm(traj.field[s](static_cast<Eigen::Index>(i)))});
        }
    }
}

}  // namespace aww
