#include "aww/spectral_pt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "aww/errors.hpp"
#include "aww/propagators.hpp"
#include "aww/quadrature.hpp"
#include "aww/reduced.hpp"

namespace aww {

double PerturbedSpectrum::representation_error(const CMatrix& g) const {
    CMatrix acc = g;
    for (std::size_t j = 0; j < size(); ++j) acc -= eigenvalues[j] * projections[j];
    return operator_norm(acc);
}

PerturbedSpectrum perturbed_spectrum(const CMatrix& g, const FrameSample& unperturbed) {
    const Eigen::Index d = g.rows();
    Eigen::ComplexEigenSolver<CMatrix> es(g);
    if (es.info() != Eigen::Success) throw MatchingError("eigensolver failed on the generator");
    const CVector& mu = es.eigenvalues();
    const CMatrix& right = es.eigenvectors();
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = a + 1; b < d; ++b) {
            if (std::abs(mu(a) - mu(b)) < 1e-12) throw MatchingError("generator has a (near) double eigenvalue");
        }
    }
    const CMatrix left = right.inverse();  // rows are left eigenvectors

    struct Pair {
        Eigen::Index level, k;
        double dist, overlap;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            const double ov = std::abs(unperturbed.vectors.col(j).dot(right.col(k))) / right.col(k).norm();
            pairs.push_back({j, k, std::abs(mu(k) - unperturbed.energies(j)), ov});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (std::abs(a.dist - b.dist) > 1e-12 * std::max(1.0, a.dist)) return a.dist < b.dist;
        return a.overlap > b.overlap;
    });
    std::vector<bool> level_done(static_cast<std::size_t>(d), false), eig_done(static_cast<std::size_t>(d), false);
    PerturbedSpectrum out;
    out.eigenvalues.resize(static_cast<std::size_t>(d));
    out.projections.resize(static_cast<std::size_t>(d));
    out.source.resize(static_cast<std::size_t>(d));
    for (const Pair& p : pairs) {
        const auto j = static_cast<std::size_t>(p.level);
        const auto k = static_cast<std::size_t>(p.k);
        if (level_done[j] || eig_done[k]) continue;
        level_done[j] = eig_done[k] = true;
        out.eigenvalues[j] = mu(p.k);
        out.projections[j] = right.col(p.k) * left.row(p.k);
        out.source[j] = k;
    }
    return out;
}

cplx first_order_correction(const BathSpec& bath, cplx v_j, double alpha_j, double horizon) {
    if (horizon <= 0.0) return 0.0;
    return -kI * std::norm(v_j) * half_line_transform(bath, alpha_j, horizon);
}

cplx first_order_correction(const BathSpec& bath, cplx v_j, double alpha_j, double epsilon, double t) {
    return first_order_correction(bath, v_j, alpha_j, t / epsilon);
}

cplx contour_integral(const std::function<cplx(cplx)>& f, cplx center, double radius, std::size_t nodes) {
    cplx sum{};
    for (std::size_t k = 0; k < nodes; ++k) {
        const cplx e = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nodes));
        sum += e * f(center + radius * e);
    }
    return -(radius / static_cast<double>(nodes)) * sum;
}

namespace {

CMatrix riesz_rule(const CMatrix& g, cplx center, double radius, std::size_t nodes) {
    const Eigen::Index d = g.rows();
    const CMatrix id = CMatrix::Identity(d, d);
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < nodes; ++k) {
        const cplx e = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nodes));
        const CMatrix shifted = g - (center + radius * e) * id;
        Eigen::JacobiSVD<CMatrix> svd(shifted);
        const double smin = svd.singularValues()(d - 1);
        if (smin < 1e-8) throw ContourError("contour passes through the spectrum", smin);
        sum += e * shifted.partialPivLu().inverse();
    }
    return -(radius / static_cast<double>(nodes)) * sum;
}

}  // namespace

CMatrix riesz_projection(const CMatrix& g, cplx center, double radius, std::size_t nodes) {
    CMatrix p = riesz_rule(g, center, radius, nodes);
    for (std::size_t m = 2 * nodes; m <= 4096; m *= 2) {
        CMatrix q = riesz_rule(g, center, radius, m);
        const double change = (q - p).norm();
        p = std::move(q);
        if (change < 1e-13) break;
    }
    return p;
}

double projection_distance_bound(double lambda, double coupling_sup_sq, double gamma_l1, double gap) {
    return 4.0 * lambda * lambda * coupling_sup_sq * gamma_l1 / gap;
}

namespace {

struct PerturbedPath {
    const AtomPath& atom;
    const EigenFrame& frame;
    const BathSpec& bath;
    double epsilon;
    double lambda;

    [[nodiscard]] PerturbedSpectrum at(double u) const {
        const CMatrix g = effective_generator(atom, frame, bath, epsilon, lambda, u);
        return perturbed_spectrum(g, frame.at(u));
    }

    [[nodiscard]] std::vector<CMatrix> derivative(double u, double h) const {
        const auto pm2 = at(u - 2 * h), pm1 = at(u - h), pp1 = at(u + h), pp2 = at(u + 2 * h);
        std::vector<CMatrix> out;
        for (std::size_t j = 0; j < pm2.size(); ++j) {
            out.push_back((-pp2.projections[j] + 8.0 * pp1.projections[j] - 8.0 * pm1.projections[j] +
                           pm2.projections[j]) /
                          (12.0 * h));
        }
        return out;
    }

    [[nodiscard]] CMatrix kato(double u, double h) const {
        const auto p = at(u);
        const auto dp = derivative(u, h);
        const auto d = static_cast<Eigen::Index>(frame.levels());
        CMatrix k = CMatrix::Zero(d, d);
        for (std::size_t j = 0; j < dp.size(); ++j) k += dp[j] * p.projections[j];
        return k;
    }
};

}  // namespace

CMatrix adiabatic_evolution_diagnostic(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath,
                                       double epsilon, double lambda, double t, double s,
                                       const DiagnosticOptions& options) {
    const auto d = static_cast<Eigen::Index>(frame.levels());
    if (t == s) return CMatrix::Identity(d, d);
    const PerturbedPath path{atom, frame, bath, epsilon, lambda};
    const double h = options.derivative_step * epsilon;

    // Smoothness probe at the ends and the middle of [s, t].
    for (double u : {s + 2 * h, 0.5 * (s + t), t - 2 * h}) {
        const auto coarse = path.derivative(u, h);
        const auto fine = path.derivative(u, 0.5 * h);
        for (std::size_t j = 0; j < coarse.size(); ++j) {
            const double scale = std::max(1.0, fine[j].norm());
            const double change = (coarse[j] - fine[j]).norm() / scale;
            if (change > options.smoothness_tol) {
                throw FrameSmoothnessError("perturbed projections not smooth on the difference step", change);
            }
        }
    }

    const auto steps = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil((t - s) / epsilon * static_cast<double>(options.steps_per_epsilon))));
    const CMatrix w = magnus4([&](double u) { return path.kato(u, h); }, s, t, steps, false);

    // Phases −(i/ε)∫_s^t (α_j + λ²α′_j) by composite Simpson.
    const std::size_t n = steps + steps % 2;
    const double du = (t - s) / static_cast<double>(n);
    std::vector<std::vector<cplx>> integrand(frame.levels(), std::vector<cplx>(n + 1));
    for (std::size_t k = 0; k <= n; ++k) {
        const double u = s + du * static_cast<double>(k);
        const FrameSample fs = frame.at(u);
        const CVector c = coupling_vector(atom, fs);
        for (Eigen::Index j = 0; j < d; ++j) {
            const cplx vj = fs.vectors.col(j).dot(c);
            integrand[static_cast<std::size_t>(j)][k] =
                fs.energies(j) + lambda * lambda * first_order_correction(bath, vj, fs.energies(j), epsilon, u);
        }
    }
    const PerturbedSpectrum ps = path.at(s);
    CMatrix psi = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const cplx phase = quad::simpson<cplx>(integrand[static_cast<std::size_t>(j)], du);
        psi += std::exp(-kI / epsilon * phase) * ps.projections[static_cast<std::size_t>(j)];
    }
    return w * psi;
}

}  // namespace aww
