#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "aww/bath.hpp"
#include "aww/errors.hpp"
#include "aww/spline.hpp"

using namespace aww;

namespace {
const BathSpec ref = BathSpec::reference();

// Im ∫_0^∞ e^{iαx} γ(x) dx for ρ = ω²e^{-ω}, via the exponential integral.
double pv_closed_form(double a) { return -(1.0 + a) + a * a * std::exp(-a) * std::expint(a); }
}  // namespace

TEST_CASE("correlation: closed form and quadrature agree") {
    CHECK(std::abs(correlation(ref, 0.0) - cplx(2.0, 0.0)) < 1e-12);
    CHECK(std::abs(correlation(ref, 1.0) - cplx(-0.5, -0.5)) < 1e-12);
    for (double t : {0.0, 0.3, 1.0, 4.0}) {
        const Estimate q = correlation_quadrature(ref, t, 60.0);
        CHECK(std::abs(q.value - correlation(ref, t)) < 1e-8);
        CHECK(std::abs(correlation(ref, -t) - std::conj(correlation(ref, t))) < 1e-14);
    }
}

TEST_CASE("fourier_hat") {
    CHECK(fourier_hat(ref, 1.0) == doctest::Approx(0.92214).epsilon(1e-5));
    CHECK(fourier_hat(ref, -0.5) == 0.0);
    for (double a = 0.0; a < 30.0; a += 0.7) CHECK(fourier_hat(ref, a) >= 0.0);
}

TEST_CASE("half-line transform at infinite horizon") {
    const cplx h = half_line_transform(ref, 1.0, BathSpec::kInfinity);
    CHECK(h.real() == doctest::Approx(kPi / std::exp(1.0)).epsilon(1e-10));
    for (double a : {0.3, 1.0, 2.5, 7.0}) {
        CHECK(half_line_transform(ref, a, BathSpec::kInfinity).imag() == doctest::Approx(pv_closed_form(a)).epsilon(1e-9));
    }
    // below the support the integrand has no pole
    CHECK(half_line_transform(ref, -0.5, BathSpec::kInfinity).imag() ==
          doctest::Approx(pv_closed_form(-0.5)).epsilon(1e-9));
    CHECK(half_line_transform(ref, 1.0, 0.0) == cplx(0.0, 0.0));
}

TEST_CASE("half-line transform at finite horizon matches direct quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    for (double horizon : {0.5, 5.0, 40.0}) {
        const auto re = gauss_kronrod<double, 61>::integrate(
            [](double x) { return (std::polar(1.0, 1.3 * x) * 2.0 / std::pow(cplx(1.0, x), 3)).real(); }, 0.0,
            horizon, 20, 1e-14);
        const auto im = gauss_kronrod<double, 61>::integrate(
            [](double x) { return (std::polar(1.0, 1.3 * x) * 2.0 / std::pow(cplx(1.0, x), 3)).imag(); }, 0.0,
            horizon, 20, 1e-14);
        const cplx h = half_line_transform(ref, 1.3, horizon);
        CHECK(std::abs(h - cplx(re, im)) < 1e-9);
        CHECK(std::abs(half_line_transform(ref, 1.3, -horizon) + std::conj(h)) < 1e-14);
    }
}

TEST_CASE("truncated transform reports its tail") {
    const Estimate e = half_line_transform_truncated(ref, 1.0, 1e-8);
    CHECK(e.error < 1e-7);
    CHECK(std::abs(e.value - half_line_transform(ref, 1.0, BathSpec::kInfinity)) < 1e-6);
}

TEST_CASE("L1 norm and decay bound") {
    CHECK(correlation_l1_norm(ref) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(decay_bound_holds(ref));
    const BathSpec loose("loose", [](double w) { return w * w * std::exp(-w); }, BathSpec::kInfinity,
                         DecayBound{2.0, 3.0}, BathSpec::Correlation([](double t) { return 2.0 / std::pow(cplx(1.0, t), 3); }), 3.0);
    CHECK_FALSE(decay_bound_holds(loose));
}

TEST_CASE("decay_and_shift") {
    const DecayShift d = decay_and_shift(ref, 1.0, 1.0);
    CHECK(d.beta == doctest::Approx(1.15573).epsilon(1e-5));
    CHECK(d.lamb_shift == doctest::Approx(pv_closed_form(1.0)).epsilon(1e-9));
    CHECK(d.well_coupled);
    const DecayShift zero = decay_and_shift(ref, 0.0, 1.0);
    CHECK(zero.beta == 0.0);
    CHECK(zero.lamb_shift == 0.0);
    const DecayShift off = decay_and_shift(ref, 1.0, -2.0);
    CHECK(off.beta == 0.0);
    CHECK_FALSE(off.well_coupled);
}

TEST_CASE("observable-weighted correlation") {
    const TestObservable one = TestObservable::constant(1.0);
    const TestObservable nothing = TestObservable::constant(0.0);
    const TestObservable omega = TestObservable::power(1.0);
    for (double t : {0.0, 0.5, 2.0}) {
        CHECK(std::abs(weighted_correlation(ref, one, t) - correlation(ref, t)) < 1e-8);
        CHECK(std::abs(weighted_correlation(ref, nothing, t)) == 0.0);
    }
    CHECK(std::abs(weighted_hat(ref, omega, 1.0) / fourier_hat(ref, 1.0) - 1.0) < 1e-12);
    CHECK(std::abs(weighted_hat(ref, omega, 2.0) / fourier_hat(ref, 2.0) - 2.0) < 1e-12);
}

TEST_CASE("tabulated bath and registry") {
    std::vector<double> w, r;
    for (int i = 0; i <= 400; ++i) {
        w.push_back(0.1 * i);
        r.push_back(w.back() * w.back() * std::exp(-w.back()));
    }
    const BathSpec tab = BathSpec::tabulated("tab", w, r, DecayBound{2.0, 3.0});
    CHECK(tab.density(1.05) == doctest::Approx(ref.density(1.05)).epsilon(1e-5));
    CHECK(std::abs(correlation(tab, 0.5) - correlation(ref, 0.5)) < 1e-4);
    for (double t : {0.0, 0.05, 0.5, 3.0, 30.0}) {
        // exact spline transform against a brute-force frequency quadrature
        CHECK(std::abs(correlation(tab, t) - correlation_quadrature(tab, t, tab.support_max(), 1e-10).value) < 1e-8);
    }
    CHECK_THROWS_AS(builtin_bath("nope"), ConfigError);
    CHECK_THROWS_AS(BathSpec::tabulated("x", {0, 1}, {0, 1}, std::nullopt), ConfigError);
}

TEST_CASE("spline transforms are exact on linear data") {
    const CubicSpline line({0.0, 0.25, 0.5, 1.0}, {0.0, 0.25, 0.5, 1.0});
    // PV ∫_0^1 x/(a − x) dx = −1 + a ln|a/(a − 1)|
    for (double a : {0.5, 0.25, 0.3, 1.7, -0.4}) {
        const double expected = -1.0 + a * std::log(std::abs(a / (a - 1.0)));
        CHECK(line.principal_value(a) == doctest::Approx(expected).epsilon(1e-13));
    }
    // ∫_0^1 x e^{-ixt} dx
    for (double t : {0.0, 0.5, 3.0, 40.0}) {
        const cplx s(0.0, -t);
        const cplx expected = t == 0.0 ? cplx(0.5) : std::exp(s) / s - (std::exp(s) - 1.0) / (s * s);
        CHECK(std::abs(line.fourier(t) - expected) < 1e-13);
    }
}

TEST_CASE("tabulated principal value tracks the closed form") {
    std::vector<double> w, r;
    for (int i = 0; i <= 600; ++i) {
        w.push_back(0.05 * i);
        r.push_back(w.back() * w.back() * std::exp(-w.back()));
    }
    const BathSpec tab = BathSpec::tabulated("tab", w, r, DecayBound{4.0 * std::sqrt(2.0), 3.0});
    for (double a : {0.5, 1.0, 2.0, 2.05, 6.0}) {
        const cplx h = half_line_transform(tab, a, BathSpec::kInfinity);
        CHECK(h.imag() == doctest::Approx(pv_closed_form(a)).epsilon(1e-5));
        CHECK(h.real() == doctest::Approx(kPi * a * a * std::exp(-a)).epsilon(1e-5));
    }
}
