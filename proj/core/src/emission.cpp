#include "aww/emission.hpp"

#include <algorithm>
#include <cmath>

#include "aww/csv.hpp"
#include "aww/errors.hpp"
#include "aww/quadrature.hpp"

namespace aww {

cplx observable_average(const CVector& field, const ModeGrid& grid, const TestObservable& obs) {
    cplx sum{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sum += obs.weight(grid.omega[i]) * std::norm(field(static_cast<Eigen::Index>(i)));
    }
    return sum;
}

std::vector<cplx> observable_average(const Trajectory& traj, const ModeGrid& grid, const TestObservable& obs) {
    std::vector<cplx> out;
    out.reserve(traj.field.size());
    for (const CVector& f : traj.field) out.push_back(observable_average(f, grid, obs));
    return out;
}

cplx regime_A_limit(const EigenFrame& frame, const BathSpec& bath, const TestObservable& obs, std::size_t j) {
    const double alpha = frame.sample(0).energies(static_cast<Eigen::Index>(j));
    const double hat = fourier_hat(bath, alpha);
    if (hat == 0.0) {
        throw WellCoupledness("level " + std::to_string(j + 1) + " is outside the bath support at t=0");
    }
    return weighted_hat(bath, obs, alpha) / hat;
}

cplx regime_B_limit(const LeadingOrder& lo, const AtomPath& atom, const BathSpec& bath, const TestObservable& obs,
                    std::size_t j, double r, double t) {
    if (t <= 0.0) return 0.0;
    const EigenFrame& frame = lo.frame();
    double beta_max = 0.0;
    for (std::size_t k = 0; k < frame.grid().size(); ++k) beta_max = std::max(beta_max, lo.beta(j, frame.grid().at(k)));
    // Twenty nodes per decay length 1/(2rβ), never coarser than the frame grid.
    const double rate = 2.0 * r * beta_max;
    auto n = static_cast<std::size_t>(std::ceil(t * std::max(20.0 * rate, 1.0 / frame.grid().step())));
    n += n % 2;
    const double h = t / static_cast<double>(n);
    const auto ji = static_cast<Eigen::Index>(j);
    std::vector<cplx> integrand(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = h * static_cast<double>(k);
        const double alpha = frame.at(s).energies(ji);
        const double vj = std::norm(atom.coupling(s)(ji));
        integrand[k] = vj * std::exp(-2.0 * r * lo.int_beta(j, s)) * weighted_hat(bath, obs, alpha);
    }
    return kSqrt2Pi * r * quad::simpson<cplx>(integrand, h);
}

cplx observable_average_double_integral(const Trajectory& traj, std::size_t k, const AtomPath& atom,
                                        const EigenFrame& frame, const BathSpec& bath, const TestObservable& obs,
                                        double epsilon, double lambda) {
    if (k == 0) return 0.0;
    const double dt = traj.t[1] - traj.t[0];
    for (std::size_t m = 1; m <= k; ++m) {
        if (std::abs((traj.t[m] - traj.t[m - 1]) - dt) > 1e-9 * dt) {
            throw std::invalid_argument("observable_average_double_integral: history step must be uniform");
        }
    }
    std::vector<cplx> a(k + 1);
    for (std::size_t m = 0; m <= k; ++m) {
        const double w = (m == 0 || m == k) ? 0.5 * dt : dt;
        a[m] = w * coupling_vector(atom, frame, traj.t[m]).dot(traj.z[m]);
    }
    // γ_B at lags (q − m)·dt/ε for q − m = −k … k.
    std::vector<cplx> lag(2 * k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        lag[k + i] = weighted_correlation(bath, obs, static_cast<double>(i) * dt / epsilon);
    }
    for (std::size_t i = 1; i <= k; ++i) {
        lag[k - i] = weighted_correlation(bath, obs, -static_cast<double>(i) * dt / epsilon);
    }
    cplx sum{};
    for (std::size_t m = 0; m <= k; ++m) {
        cplx inner{};
        for (std::size_t q = 0; q <= k; ++q) inner += std::conj(a[q]) * lag[k + q - m];
        sum += a[m] * inner;
    }
    return lambda * lambda / (epsilon * epsilon) * sum;
}

void write_spectrum_csv(const std::filesystem::path& path, const Trajectory& traj, const ModeGrid& grid,
                        const TestObservable& obs, double limit_value) {
    csv::Writer out(path, {"kind", "t", "omega", "abs_f_sq", "B"});
    for (std::size_t s = 0; s < traj.field.size(); ++s) {
        const double t = traj.t[traj.field_index[s]];
        const CVector& f = traj.field[s];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out.row({"mode"}, {t, grid.omega[i], std::norm(f(static_cast<Eigen::Index>(i))),
                               obs.weight(grid.omega[i]).real()});
        }
        out.row({"summary"}, {t, 0.0, observable_average(f, grid, obs).real(), limit_value});
    }
}

}  // namespace aww
