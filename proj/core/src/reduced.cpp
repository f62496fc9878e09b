#include "aww/reduced.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "aww/csv.hpp"
#include "aww/errors.hpp"
#include "aww/propagators.hpp"

namespace aww {

namespace {

double spectral_radius(const EigenFrame& frame) {
    double r = 0.0;
    for (std::size_t k = 0; k < frame.grid().size(); ++k) {
        r = std::max(r, frame.sample(k).energies.cwiseAbs().maxCoeff());
    }
    return r;
}

std::size_t steps_for(double span, double rate, double max_phase) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(span) * rate / max_phase)));
}

// Uniform fine grid whose nodes include every output time.
struct FineGrid {
    std::vector<double> t;
    std::size_t stride{1};  // fine steps per output step
    double h{0.0};
};

FineGrid fine_grid(double t_end, double dt_out, double h_max) {
    const auto n_out = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / dt_out - 1e-9)));
    const double out_step = t_end / static_cast<double>(n_out);
    FineGrid g;
    g.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(out_step / h_max - 1e-9)));
    const std::size_t n = n_out * g.stride;
    g.h = t_end / static_cast<double>(n);
    g.t.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) g.t[k] = g.h * static_cast<double>(k);
    g.t.back() = t_end;
    return g;
}

}  // namespace

CMatrix frame_hamiltonian(const EigenFrame& frame, double t) {
    const FrameSample s = frame.at(t);
    return s.vectors * s.energies.cast<cplx>().asDiagonal() * s.vectors.adjoint();
}

std::vector<CMatrix> atomic_propagator_path(const EigenFrame& frame, double epsilon, const std::vector<double>& times,
                                            double max_phase) {
    const auto d = static_cast<Eigen::Index>(frame.levels());
    const double rate = spectral_radius(frame) / epsilon;
    const Generator gen = [&frame, epsilon](double u) { return CMatrix(-kI / epsilon * frame_hamiltonian(frame, u)); };
    std::vector<CMatrix> out;
    out.reserve(times.size());
    out.push_back(CMatrix::Identity(d, d));
    for (std::size_t k = 1; k < times.size(); ++k) {
        const std::size_t steps = steps_for(times[k] - times[k - 1], rate, max_phase);
        out.push_back(magnus4(gen, times[k - 1], times[k], steps, true) * out.back());
    }
    const double defect = unitarity_defect(out.back());
    if (defect > 1e-8) throw IntegratorError("atomic propagator lost unitarity; lower max_phase", defect);
    return out;
}

CMatrix atomic_propagator(const EigenFrame& frame, double epsilon, double t, double s, double max_phase) {
    const auto d = static_cast<Eigen::Index>(frame.levels());
    if (t == s) return CMatrix::Identity(d, d);
    const Generator gen = [&frame, epsilon](double u) { return CMatrix(-kI / epsilon * frame_hamiltonian(frame, u)); };
    const std::size_t steps = steps_for(t - s, spectral_radius(frame) / epsilon, max_phase);
    CMatrix u = magnus4(gen, s, t, steps, true);
    const double defect = unitarity_defect(u);
    if (defect > 1e-8) throw IntegratorError("atomic propagator lost unitarity; lower max_phase", defect);
    return u;
}

Trajectory volterra_solve(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                          double lambda, const CVector& z0, double t_end, const VolterraOptions& options) {
    const Eigen::Index d = z0.size();
    if (std::abs(z0.norm() - 1.0) > 1e-12) throw std::invalid_argument("volterra_solve: z0 must be normalized");
    const FineGrid fg = fine_grid(t_end, options.dt_out, epsilon / static_cast<double>(options.steps_per_epsilon));
    const double h = fg.h;
    const std::size_t n = fg.t.size() - 1;

    const double alpha_step = spectral_radius(frame) * h / epsilon;
    if (alpha_step > 0.5) throw ResolutionError("fine step too coarse for the atomic phases", alpha_step);

    // Kernel on the x = (t − s)/ε grid, truncated where the envelope is negligible.
    std::size_t memory = n;
    for (std::size_t k = 0; k <= n; ++k) {
        if (bath.decay_bound().envelope(static_cast<double>(k) * h / epsilon) < options.kernel_cutoff) {
            memory = k;
            break;
        }
    }
    std::vector<cplx> kernel(memory + 1);
    for (std::size_t k = 0; k <= memory; ++k) kernel[k] = correlation(bath, static_cast<double>(k) * h / epsilon);
    const double gamma0 = std::abs(kernel[0]);
    for (std::size_t k = 0; k < memory; ++k) {
        const double jump = std::abs(kernel[k + 1] - kernel[k]);
        if (jump > 0.5 * gamma0) throw ResolutionError("memory kernel under-resolved; raise steps_per_epsilon", jump);
    }

    const std::vector<CMatrix> u = atomic_propagator_path(frame, epsilon, fg.t);
    std::vector<CVector> c(n + 1), beta(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        c[k] = coupling_vector(atom, frame, fg.t[k]);
        beta[k] = u[k].adjoint() * c[k];
    }

    std::vector<CVector> y(n + 1);
    y[0] = z0;
    const double kappa = lambda * lambda / (epsilon * epsilon);
    // History weight of node m in ∫_0^{t_q} for q > m: h/2 at s = 0, h elsewhere.
    const auto weight = [h](std::size_t m) { return m == 0 ? 0.5 * h : h; };

    if (options.mode == MemoryMode::full) {
        std::vector<cplx> s(n + 1);
        s[0] = beta[0].dot(y[0]);
        CVector f_prev = CVector::Zero(d);  // F_0 = 0: empty memory integral
        for (std::size_t q = 1; q <= n; ++q) {
            cplx history{};
            const std::size_t lo = q > memory ? q - memory : 0;
            for (std::size_t m = lo; m < q; ++m) history += weight(m) * s[m] * kernel[q - m];
            const CVector& b = beta[q];
            const CVector rhs = y[q - 1] + 0.5 * h * f_prev - 0.5 * h * kappa * history * b;
            // (1 + a |b⟩⟨b|) y = rhs by Sherman–Morrison.
            const cplx a = 0.25 * kappa * h * h * kernel[0];
            y[q] = rhs - a * b * b.dot(rhs) / (1.0 + a * b.squaredNorm());
            s[q] = b.dot(y[q]);
            f_prev = -kappa * b * (history + 0.5 * h * kernel[0] * s[q]);
        }
    } else {
        // N(t_q) = ε⁻¹ ∫_0^{t_q} γ((t_q − s)/ε) U(s) ds; L_q = −(λ²/ε) β_q c_q* N_q.
        const auto generator = [&](std::size_t q) -> CMatrix {
            CMatrix acc = CMatrix::Zero(d, d);
            if (q > 0) {
                const std::size_t lo = q > memory ? q - memory : 0;
                for (std::size_t m = lo; m <= q; ++m) {
                    const double w = (m == 0 || m == q) ? 0.5 * h : h;
                    acc += (w * kernel[q - m]) * u[m];
                }
            }
            acc /= epsilon;
            return -(lambda * lambda / epsilon) * beta[q] * (c[q].adjoint() * acc);
        };
        const CMatrix id = CMatrix::Identity(d, d);
        CMatrix l_prev = generator(0);
        for (std::size_t q = 1; q <= n; ++q) {
            const CMatrix l_next = generator(q);
            y[q] = (id - 0.5 * h * l_next).partialPivLu().solve((id + 0.5 * h * l_prev) * y[q - 1]);
            l_prev = l_next;
        }
    }

    Trajectory traj;
    for (std::size_t q = 0; q <= n; q += fg.stride) {
        traj.t.push_back(fg.t[q]);
        traj.z.emplace_back(u[q] * y[q]);
    }
    traj.steps = n;
    return traj;
}

CMatrix gamma_operator(const EigenFrame& frame, const BathSpec& bath, double epsilon, double t) {
    const auto d = static_cast<Eigen::Index>(frame.levels());
    CMatrix g = CMatrix::Zero(d, d);
    if (t == 0.0) return g;
    const FrameSample s = frame.at(t);
    for (Eigen::Index j = 0; j < d; ++j) {
        const cplx coeff = half_line_transform(bath, s.energies(j), t / epsilon);
        g += coeff * s.vectors.col(j) * s.vectors.col(j).adjoint();
    }
    return g;
}

CMatrix effective_generator(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                            double lambda, double t) {
    const CMatrix a = frame_hamiltonian(frame, t);
    if (lambda == 0.0) return a;
    const CVector c = coupling_vector(atom, frame, t);
    return a - kI * lambda * lambda * c * (c.adjoint() * gamma_operator(frame, bath, epsilon, t));
}

Trajectory effective_solve(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                           double lambda, const CVector& z0, double t_end, const EffectiveOptions& options) {
    if (std::abs(z0.norm() - 1.0) > 1e-12) throw std::invalid_argument("effective_solve: z0 must be normalized");
    const auto n_out = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / options.dt_out - 1e-9)));
    const Generator gen = [&](double u) {
        return CMatrix(-kI / epsilon * effective_generator(atom, frame, bath, epsilon, lambda, u));
    };
    const double radius = spectral_radius(frame);
    Trajectory traj;
    traj.t.push_back(0.0);
    traj.z.push_back(z0);
    CVector z = z0;
    for (std::size_t k = 1; k <= n_out; ++k) {
        const double a = t_end * static_cast<double>(k - 1) / static_cast<double>(n_out);
        const double b = k == n_out ? t_end : t_end * static_cast<double>(k) / static_cast<double>(n_out);
        const double rate = std::max(radius, operator_norm(effective_generator(atom, frame, bath, epsilon, lambda, a)));
        const std::size_t steps = steps_for(b - a, rate / epsilon, options.max_phase);
        z = magnus4(gen, a, b, steps, lambda == 0.0) * z;
        traj.steps += steps;
        traj.t.push_back(b);
        traj.z.push_back(z);
    }
    return traj;
}

CMatrix effective_propagator(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath, double epsilon,
                             double lambda, double t, double s, double max_phase) {
    const auto d = static_cast<Eigen::Index>(frame.levels());
    if (t == s) return CMatrix::Identity(d, d);
    const Generator gen = [&](double u) {
        return CMatrix(-kI / epsilon * effective_generator(atom, frame, bath, epsilon, lambda, u));
    };
    const double rate = std::max(spectral_radius(frame),
                                 operator_norm(effective_generator(atom, frame, bath, epsilon, lambda, s)));
    return magnus4(gen, s, t, steps_for(t - s, rate / epsilon, max_phase), lambda == 0.0);
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_distance: trajectories on different grids");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a.t[k] - b.t[k]) > 1e-9) throw std::invalid_argument("sup_distance: time grids differ");
        worst = std::max(worst, (a.z[k] - b.z[k]).norm());
    }
    return worst;
}

}  // namespace aww
