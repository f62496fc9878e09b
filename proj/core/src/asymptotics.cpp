#include "aww/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>

#include "aww/quadrature.hpp"
#include "aww/spline.hpp"

namespace aww {

namespace {

// Im of the infinite half-line transform over the energy range of one level:
// exact for a constant energy, otherwise a spline on Chebyshev nodes.
class PrincipalValueTable {
public:
    PrincipalValueTable(const BathSpec& bath, const std::vector<double>& energies) {
        const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
        lo_ = *lo;
        hi_ = *hi;
        const auto eval = [&](double alpha) { return half_line_transform(bath, alpha, BathSpec::kInfinity).imag(); };
        if (hi_ - lo_ <= 1e-12 * std::max(1.0, std::abs(hi_))) {
            constant_ = eval(lo_);
            return;
        }
        constexpr std::size_t nodes = 97;
        std::vector<double> x(nodes), y(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double c = -std::cos(kPi * static_cast<double>(i) / static_cast<double>(nodes - 1));
            x[i] = 0.5 * (lo_ + hi_) + 0.5 * (hi_ - lo_) * c;
            y[i] = eval(x[i]);
        }
        spline_ = CubicSpline(std::move(x), std::move(y));
    }

    double operator()(double alpha) const { return constant_ ? *constant_ : spline_(alpha); }

private:
    double lo_{0.0}, hi_{0.0};
    std::optional<double> constant_;
    CubicSpline spline_;
};

}  // namespace

CumulativeTable::CumulativeTable(double t0, double h, std::vector<double> rate)
    : t0_(t0), h_(h), rate_(std::move(rate)) {
    value_ = quad::cumulative_simpson<double>(rate_, h_);
}

double CumulativeTable::operator()(double t) const {
    const double pos = (t - t0_) / h_;
    const auto last = static_cast<double>(value_.size() - 1);
    const double c = std::clamp(pos, 0.0, last);
    auto k = static_cast<std::size_t>(std::floor(c));
    if (k + 1 >= value_.size()) return value_.back();
    const double s = c - static_cast<double>(k);
    const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    return h00 * value_[k] + h10 * h_ * rate_[k] + h01 * value_[k + 1] + h11 * h_ * rate_[k + 1];
}

double CumulativeTable::rate(double t) const {
    const double c = std::clamp((t - t0_) / h_, 0.0, static_cast<double>(rate_.size() - 1));
    const auto k = static_cast<std::size_t>(std::floor(c));
    if (k + 1 >= rate_.size()) return rate_.back();
    const double s = c - static_cast<double>(k);
    return (1 - s) * rate_[k] + s * rate_[k + 1];
}

LeadingOrder::LeadingOrder(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath) : frame_(&frame) {
    const TimeGrid& g = frame.grid();
    const std::size_t d = frame.levels();
    std::vector<std::vector<double>> a(d), b(d), s(d);
    std::vector<std::vector<double>> weight(d);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const FrameSample& fs = frame.sample(k);
        const CVector v = atom.coupling(fs.t);
        for (std::size_t j = 0; j < d; ++j) {
            const auto ji = static_cast<Eigen::Index>(j);
            a[j].push_back(fs.energies(ji));
            weight[j].push_back(std::norm(v(ji)));
            b[j].push_back(std::sqrt(kPi / 2.0) * weight[j].back() * fourier_hat(bath, fs.energies(ji)));
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        const PrincipalValueTable pv(bath, a[j]);
        for (std::size_t k = 0; k < g.size(); ++k) s[j].push_back(weight[j][k] * pv(a[j][k]));
    }
    for (std::size_t j = 0; j < d; ++j) {
        alpha_.emplace_back(g.begin, g.step(), std::move(a[j]));
        beta_.emplace_back(g.begin, g.step(), std::move(b[j]));
        shift_.emplace_back(g.begin, g.step(), std::move(s[j]));
        // ξ_j through its rate i⟨φ_j, ∂φ_j⟩ so that off-grid values interpolate smoothly.
        std::vector<double> rate(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) {
            const cplx r = kI * frame.sample(k).vectors.col(static_cast<Eigen::Index>(j)).dot(
                                    frame.vector_derivative(j, g.at(k)));
            rate[k] = r.real();
        }
        xi_.emplace_back(g.begin, g.step(), std::move(rate));
    }
}

CVector LeadingOrder::z(double epsilon, double lambda, const CVector& z0, double t) const {
    const FrameSample now = frame_->at(t);
    const FrameSample& start = frame_->sample(0);
    const double l2 = lambda * lambda;
    CVector out = CVector::Zero(z0.size());
    for (std::size_t j = 0; j < levels(); ++j) {
        const auto ji = static_cast<Eigen::Index>(j);
        const double phase = -(int_alpha(j, t) + l2 * int_shift(j, t)) / epsilon + berry(j, t);
        const double decay = std::exp(-l2 / epsilon * int_beta(j, t));
        out += decay * std::polar(1.0, phase) * start.vectors.col(ji).dot(z0) * now.vectors.col(ji);
    }
    return out;
}

double LeadingOrder::population(double epsilon, double lambda, double p0, std::size_t j, double t) const {
    return std::exp(-2.0 * lambda * lambda / epsilon * int_beta(j, t)) * p0;
}

double LeadingOrder::p_down(double epsilon, double lambda, const CVector& z0, double t) const {
    double kept = 0.0;
    for (std::size_t j = 0; j < levels(); ++j) {
        const double p0 = std::norm(frame_->sample(0).vectors.col(static_cast<Eigen::Index>(j)).dot(z0));
        kept += population(epsilon, lambda, p0, j, t);
    }
    return 1.0 - kept;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::strong: return "strong";
        case Regime::davies: return "davies";
        case Regime::weak_a: return "weak_a";
        case Regime::weak_b: return "weak_b";
    }
    return "unknown";
}

Regime regime_classify(double epsilon, double lambda) {
    const double r = lambda * lambda / epsilon;
    if (r >= 10.0) return Regime::strong;
    if (r >= 0.1) return Regime::davies;
    return lambda * lambda / (epsilon * epsilon) >= 1.0 ? Regime::weak_a : Regime::weak_b;
}

RegimeReport regime_report(const LeadingOrder& lo, double epsilon, double lambda, const CVector& z0, double t) {
    RegimeReport rep;
    rep.regime = regime_classify(epsilon, lambda);
    rep.ratio = lambda * lambda / epsilon;
    rep.ratio_eps_sq = rep.ratio / epsilon;
    if (rep.regime == Regime::strong || rep.regime == Regime::davies) {
        rep.predicted_p_down = lo.p_down(epsilon, lambda, z0, t);
        rep.formula = "1 - sum_j exp(-2 r int beta_j) |z0_j|^2";
    } else {
        double acc = 0.0;
        for (std::size_t j = 0; j < lo.levels(); ++j) {
            const double p0 = std::norm(lo.frame().sample(0).vectors.col(static_cast<Eigen::Index>(j)).dot(z0));
            acc += p0 * lo.int_beta(j, t);
        }
        rep.predicted_p_down = 2.0 * rep.ratio * acc;
        rep.formula = "2 r sum_j |z0_j|^2 int beta_j";
    }
    return rep;
}

TimeIndependentSemigroup::TimeIndependentSemigroup(const CMatrix& a, const CVector& v, const BathSpec& bath,
                                                   double lambda) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
    vectors_ = es.eigenvectors();
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
        const double alpha = es.eigenvalues()(j);
        const DecayShift ds = decay_and_shift(bath, v(j), alpha);
        alpha_prime_.emplace_back(ds.lamb_shift, -ds.beta);
        levels_.push_back(alpha + lambda * lambda * alpha_prime_.back());
    }
}

CVector TimeIndependentSemigroup::operator()(const CVector& z0, double t) const {
    CVector out = CVector::Zero(z0.size());
    for (Eigen::Index j = 0; j < z0.size(); ++j) {
        out += std::exp(-kI * t * levels_[static_cast<std::size_t>(j)]) * vectors_.col(j).dot(z0) * vectors_.col(j);
    }
    return out;
}

CMatrix TimeIndependentSemigroup::generator() const {
    CMatrix g = CMatrix::Zero(vectors_.rows(), vectors_.cols());
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
        g += levels_[static_cast<std::size_t>(j)] * vectors_.col(j) * vectors_.col(j).adjoint();
    }
    return g;
}

CVector semigroup_time_independent(const CMatrix& a, const CVector& v, const BathSpec& bath, double lambda,
                                   const CVector& z0, double t) {
    return TimeIndependentSemigroup(a, v, bath, lambda)(z0, t);
}

}  // namespace aww
