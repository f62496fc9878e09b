// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// Usage: aww_acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "aww/asymptotics.hpp"
#include "aww/atom.hpp"
#include "aww/bath.hpp"
#include "aww/emission.hpp"
#include "aww/hilbert.hpp"
#include "aww/reduced.hpp"
#include "aww/scenario.hpp"
#include "aww/spectral_pt.hpp"
#include "aww/sweep.hpp"

using namespace aww;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

Scenario scenario(const std::string& name, bool override_smallness) {
    Config cfg;
    cfg.set("scenario", name);
    Scenario sc = load_scenario(cfg);
    sc.override_smallness = override_smallness;
    return sc;
}

// ---------------------------------------------------------------- 1
Outcome norm_conservation() {
    const Scenario sc = scenario("ww-ref-2level", true);
    const double eps = 0.05;
    PointOptions opts;
    opts.reduced = false;
    const PointResult r = evaluate_point(sc, eps, std::sqrt(eps), opts);
    return {r.norm_defect < 1e-8 && r.modes >= 500 && r.modes <= 800,
            "modes=" + std::to_string(r.modes) + " sup|norm^2-1|=" + fmt(r.norm_defect) + " (< 1e-8)"};
}

// ---------------------------------------------------------------- 2, 3
const std::vector<double> kScalingEps{0.2, 0.1, 0.05, 0.025};

std::vector<PointResult> scaling_sweep() {
    static std::vector<PointResult> cache;
    if (!cache.empty()) return cache;
    const Scenario sc = scenario("ww-ref-2level", true);
    PointOptions opts;
    opts.reduced = false;
    for (double e : kScalingEps) cache.push_back(evaluate_point(sc, e, std::sqrt(e), opts));
    return cache;
}

Outcome leading_order_scaling() {
    const auto pts = scaling_sweep();
    std::vector<double> x, y;
    bool monotone = true;
    std::string detail = "E_lead:";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        x.push_back(pts[i].epsilon);
        y.push_back(pts[i].e_lead);
        detail += " " + fmt(pts[i].e_lead);
        if (i > 0 && !(pts[i].e_lead < pts[i - 1].e_lead)) monotone = false;
    }
    const SlopeFit fit = fit_log_slope(x, y);
    detail += " slope=" + fmt(fit.slope) + " (in [0.7, 1.3], monotone=" + (monotone ? "yes" : "no") + ")";
    return {monotone && fit.slope >= 0.7 && fit.slope <= 1.3, detail};
}

Outcome population_bound() {
    const auto pts = scaling_sweep();
    std::vector<double> k;
    std::string detail = "K:";
    for (const auto& p : pts) {
        const double l2 = p.lambda * p.lambda;
        k.push_back(p.pop_error / (p.epsilon + l2 + l2 * l2 / p.epsilon));
        detail += " " + fmt(k.back());
    }
    const auto [lo, hi] = std::minmax_element(k.begin(), k.end());
    const double spread = *hi / *lo;
    detail += " max/min=" + fmt(spread) + " (<= 2)";
    return {*lo > 0 && spread <= 2.0, detail};
}

// ---------------------------------------------------------------- 4
Outcome regime_taxonomy() {
    const Scenario sc = scenario("ww-ref-2level", true);
    PointOptions opts;
    opts.reduced = false;
    const PointResult strong = evaluate_point(sc, 0.01, std::sqrt(0.1), opts);
    const double weak_eps = 0.1;
    const PointResult weak = evaluate_point(sc, weak_eps, std::sqrt(std::pow(weak_eps, 3)), opts);
    const bool ok = strong.p_down_measured > 0.9 && weak.p_down_measured < 5 * weak_eps &&
                    strong.regime == Regime::strong;
    return {ok, "strong p_down=" + fmt(strong.p_down_measured) + " (> 0.9) [" + to_string(strong.regime) +
                    "], weak p_down=" + fmt(weak.p_down_measured) + " (< " + fmt(5 * weak_eps) + ") [" +
                    to_string(weak.regime) + "]"};
}

// ---------------------------------------------------------------- 5
Outcome semigroup_scaling() {
    const Scenario sc = scenario("ww-const-2level", false);
    PointOptions opts;
    opts.reduced = false;
    std::vector<double> x, y;
    std::string detail = "E_semigroup:";
    for (double l : {0.05, 0.025, 0.0125}) {
        const PointResult r = evaluate_point(sc, 1.0, l, opts);
        x.push_back(l);
        y.push_back(r.e_semigroup);
        detail += " " + fmt(r.e_semigroup);
    }
    const SlopeFit fit = fit_log_slope(x, y);
    detail += " slope=" + fmt(fit.slope) + " (2 +- 0.3)";
    return {std::abs(fit.slope - 2.0) <= 0.3, detail};
}

// ---------------------------------------------------------------- 6
Outcome berry_phase_check() {
    const Scenario sc = scenario("ww-ref-2level", false);
    const EigenFrame& frame = *sc.frame;
    double worst = 0.0;
    for (double t : {0.25, 0.5, 1.0}) {
        const CMatrix w = kato_intertwiner(frame, t, 0.0);
        const FrameSample now = frame.at(t);
        for (std::size_t j = 0; j < frame.levels(); ++j) {
            const auto ji = static_cast<Eigen::Index>(j);
            const CVector lhs = w * frame.sample(0).vectors.col(ji);
            const CVector rhs = std::polar(1.0, berry_phase(frame, j, t)) * now.vectors.col(ji);
            worst = std::max(worst, (lhs - rhs).norm());
        }
    }
    const double theta = kPi / 4.0, omega = 1.0;
    const auto exact = [&](double t) {
        FrameSample s;
        s.t = t;
        s.energies = RVector::LinSpaced(2, 1.0, 2.0);
        s.vectors = CMatrix(2, 2);
        s.vectors << std::cos(theta), -std::sin(theta) * std::polar(1.0, -omega * t),
            std::sin(theta) * std::polar(1.0, omega * t), std::cos(theta);
        return s;
    };
    const EigenFrame analytic = EigenFrame::from_function(exact, TimeGrid{0.0, 1.0, 2000});
    const double xi = berry_phase(analytic, 0, 1.0);
    return {worst < 1e-6 && std::abs(xi + 0.5) < 1e-8,
            "max|W phi - e^{i xi} phi|=" + fmt(worst) + " (< 1e-6), xi_1(1)=" + fmt(xi) + " err=" +
                fmt(std::abs(xi + 0.5)) + " (< 1e-8)"};
}

// ---------------------------------------------------------------- 7
Outcome spectral_machinery() {
    const Scenario sc = scenario("ww-ref-2level", true);
    const EigenFrame& frame = *sc.frame;
    const double v_sup = coupling_sup_sq(sc.atom, frame);
    std::mt19937_64 rng(20261018);
    std::uniform_real_distribution<double> ut(0.0, 1.0), ul(0.01, 0.2), ue(0.02, 0.2);
    double riesz_err = 0.0, bound_slack = 1e300;
    std::size_t bound_ok = 0;
    const std::size_t samples = 50;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = ut(rng), lambda = ul(rng), eps = ue(rng);
        const CMatrix g = effective_generator(sc.atom, frame, *sc.bath, eps, lambda, t);
        const FrameSample s = frame.at(t);
        const PerturbedSpectrum ps = perturbed_spectrum(g, s);
        const double bound = projection_distance_bound(lambda, v_sup, sc.gamma_l1, frame.gap());
        bool all = true;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const auto ji = static_cast<Eigen::Index>(j);
            const CMatrix riesz = riesz_projection(g, s.energies(ji), frame.gap() / 2.0);
            riesz_err = std::max(riesz_err, (riesz - ps.projections[j]).norm());
            const CMatrix p0 = s.vectors.col(ji) * s.vectors.col(ji).adjoint();
            const double dist = (ps.projections[j] - p0).operatorNorm();
            bound_slack = std::min(bound_slack, bound - dist);
            all = all && dist <= bound;
        }
        if (all) ++bound_ok;
    }
    // residue identity around each unperturbed level of the reference frame at t = 0.5
    const FrameSample s = frame.at(0.5);
    double residue_err = 0.0;
    for (Eigen::Index j = 0; j < s.energies.size(); ++j) {
        for (Eigen::Index l = 0; l < s.energies.size(); ++l) {
            const double a = s.energies(l);
            const cplx value = contour_integral([a](cplx z) { return z / ((a - z) * (a - z)); }, s.energies(j),
                                                frame.gap() / 2.0, 256);
            residue_err = std::max(residue_err, std::abs(value - (j == l ? -1.0 : 0.0)));
        }
    }
    return {riesz_err < 1e-8 && residue_err < 1e-10 && bound_ok == samples,
            "riesz vs eigensolver=" + fmt(riesz_err) + " (< 1e-8), residue err=" + fmt(residue_err) +
                " (< 1e-10), bound held " + std::to_string(bound_ok) + "/" + std::to_string(samples) +
                " (min slack " + fmt(bound_slack) + ")"};
}

// ---------------------------------------------------------------- 8
Outcome emission_regime_b() {
    const Scenario sc = scenario("ww-ref-2level", true);
    const TestObservable one = TestObservable::constant(1.0);
    PointOptions opts;
    opts.reduced = false;
    opts.keep_trajectories = true;
    opts.field_every = static_cast<std::size_t>(-1);
    std::vector<double> rel;
    std::string detail;
    for (double eps : {0.05, 0.02}) {
        const PointResult r = evaluate_point(sc, eps, std::sqrt(eps), opts);
        const double measured = r.exact->field_norm_sq.back();
        const double limit = regime_B_limit(*sc.leading, sc.atom, *sc.bath, one, 0, 1.0, 1.0).real();
        rel.push_back(std::abs(measured - limit) / std::abs(limit));
        detail += "eps=" + fmt(eps) + " |f|^2=" + fmt(measured) + " limit=" + fmt(limit) + " rel=" + fmt(rel.back()) +
                  "; ";
    }
    const double b = regime_B_limit(*sc.leading, sc.atom, *sc.bath, one, 0, 1000.0, 1.0).real();
    const double a = regime_A_limit(*sc.frame, *sc.bath, one, 0).real();
    const double ab = std::abs(b - a) / std::abs(a);
    detail += "A vs B(r=1000) rel=" + fmt(ab) + " (< 0.01)";
    return {rel[0] < 0.2 && rel[1] < rel[0] && ab < 0.01, detail};
}

// ---------------------------------------------------------------- 9
Outcome volterra_oracle() {
    const Scenario sc = scenario("ww-ref-2level", true);
    PointOptions opts;
    opts.reduced = true;
    const PointResult a = evaluate_point(sc, 0.1, std::sqrt(0.1), opts);
    const PointResult b = evaluate_point(sc, 0.05, std::sqrt(0.05), opts);
    const double ratio = a.e_volt / b.e_volt;
    return {ratio >= 1.5, "E_volt(0.1)=" + fmt(a.e_volt) + " E_volt(0.05)=" + fmt(b.e_volt) + " ratio=" + fmt(ratio) +
                              " (>= 1.5)"};
}

// ---------------------------------------------------------------- 10
Outcome bath_identities() {
    const BathSpec bath = BathSpec::reference();
    const auto gamma = [](double t) {
        const cplx d(1.0, t);
        return cplx(2.0) / (d * d * d);
    };
    boost::math::quadrature::exp_sinh<double> half_line;
    const auto rho = [](double w) { return w * w * std::exp(-w); };

    const double gamma0_q = half_line.integrate(rho);
    const double gamma0 = correlation(bath, 0.0).real();
    const double l1_q = 2.0 * half_line.integrate([&](double t) { return std::abs(gamma(t)); });
    const double l1 = correlation_l1_norm(bath);
    // γ̂(1) = (2π)^{-1/2} ∫ γ(t) e^{it} dt = (2π)^{-1/2} 2 Re ∫_0^∞ γ(t) e^{it} dt
    const double re_half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return (gamma(t) * std::polar(1.0, t)).real(); }, 0.0, std::numeric_limits<double>::infinity(),
        15, 1e-13);
    const double hat_q = 2.0 * re_half / std::sqrt(2.0 * kPi);
    const double hat = fourier_hat(bath, 1.0);
    const double beta = decay_and_shift(bath, 1.0, 1.0).beta;
    const double beta_q = re_half;

    const double e1 = std::abs(gamma0 - 2.0) + std::abs(gamma0_q - 2.0);
    const double e2 = std::abs(l1 - 4.0) + std::abs(l1_q - 4.0);
    const double hat_exact = std::sqrt(2.0 * kPi) * std::exp(-1.0);
    const double e3 = std::abs(hat - hat_exact) + std::abs(hat_q - hat_exact);
    const double e4 = std::abs(beta - kPi / std::exp(1.0)) + std::abs(beta_q - kPi / std::exp(1.0));
    const bool ok = e1 < 1e-6 && e2 < 1e-6 && e3 < 1e-6 && e4 < 1e-6;
    return {ok, "gamma(0) err=" + fmt(e1) + ", L1 err=" + fmt(e2) + ", hat(1) err=" + fmt(e3) + ", beta err=" +
                    fmt(e4) + " (each < 1e-6)"};
}

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "norm conservation", norm_conservation},
        {2, "leading-order scaling", leading_order_scaling},
        {3, "population bound", population_bound},
        {4, "regime taxonomy", regime_taxonomy},
        {5, "time-independent semigroup", semigroup_scaling},
        {6, "Berry phase", berry_phase_check},
        {7, "spectral machinery", spectral_machinery},
        {8, "emission regime B", emission_regime_b},
        {9, "reduced dynamics oracle", volterra_oracle},
        {10, "bath identities", bath_identities},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
                  << " [" << fmt(secs) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
