#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "aww/asymptotics.hpp"
#include "aww/reduced.hpp"

using namespace aww;

namespace {
const BathSpec bath = BathSpec::reference();
}

TEST_CASE("leading order on the reference atom") {
    const AtomPath atom = reference_atom();
    const EigenFrame frame = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 2000});
    const LeadingOrder lo(atom, frame, bath);
    CVector z0 = frame.sample(0).vectors.col(0);
    CHECK((lo.z(0.05, 0.2, z0, 0.0) - z0).norm() < 1e-14);
    CHECK(lo.population(0.05, 0.0, 0.7, 0, 1.0) == doctest::Approx(0.7));
    CHECK(lo.population(0.05, 0.2, 0.7, 0, 0.0) == doctest::Approx(0.7));
    // α_1 = 1 throughout, so ∫β_1 = t πe^{-1}·|v_1|² with |v_1|² = 1
    CHECK(lo.int_beta(0, 1.0) == doctest::Approx(kPi / std::exp(1.0)).epsilon(1e-8));
    CHECK(lo.int_alpha(0, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(lo.int_alpha(1, 1.0) == doctest::Approx(2.15).epsilon(1e-10));
    CHECK(std::abs(lo.berry(0, 1.0)) < 1e-10);
    CHECK(lo.beta(1, 0.5) == doctest::Approx(kPi * std::pow(2.15, 2) * std::exp(-2.15)).epsilon(1e-8));
    // λ²/ε = 1 and p(0) = 1
    CHECK(lo.population(0.1, std::sqrt(0.1), 1.0, 0, 1.0) == doctest::Approx(0.0990).epsilon(1e-3));
}

TEST_CASE("regime classification") {
    CHECK(regime_classify(0.01, std::sqrt(0.1)) == Regime::strong);
    CHECK(regime_classify(0.05, std::sqrt(0.05)) == Regime::davies);
    CHECK(regime_classify(0.1, std::sqrt(1e-3)) == Regime::weak_b);
    CHECK(regime_classify(0.001, std::sqrt(5e-6)) == Regime::weak_a);
    CHECK(to_string(Regime::weak_a) == "weak_a");

    const AtomPath atom = reference_atom();
    const EigenFrame frame = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 1000});
    const LeadingOrder lo(atom, frame, bath);
    CVector z0 = frame.sample(0).vectors.col(0);
    CHECK(regime_report(lo, 0.01, std::sqrt(0.1), z0, 1.0).predicted_p_down > 0.99);
    const RegimeReport davies = regime_report(lo, 0.1, std::sqrt(0.1), z0, 1.0);
    CHECK(davies.predicted_p_down == doctest::Approx(1.0 - std::exp(-2.0 * kPi / std::exp(1.0))).epsilon(1e-6));
    CHECK(regime_report(lo, 0.1, std::sqrt(1e-3), z0, 1.0).predicted_p_down < 0.5);
}

TEST_CASE("time-independent semigroup") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    const CVector v = CVector::Ones(2);
    CVector z0(2);
    z0 << 0.6, 0.8;
    const TimeIndependentSemigroup free(a, v, bath, 0.0);
    CHECK((free(z0, 0.0) - z0).norm() < 1e-14);
    CHECK((free(z0, 3.0) - (cplx(0.0, -3.0) * a).exp() * z0).norm() < 1e-12);

    const TimeIndependentSemigroup s(a, v, bath, 0.1);
    CHECK(s.first_order()[0].imag() == doctest::Approx(-kPi / std::exp(1.0)).epsilon(1e-9));
    CHECK(std::abs(s.corrected_levels()[1] - (2.0 + 0.01 * s.first_order()[1])) < 1e-14);
    CHECK((semigroup_time_independent(a, v, bath, 0.1, z0, 5.0) - s(z0, 5.0)).norm() < 1e-14);
    CHECK(s(z0, 10.0).norm() < 1.0);
}
