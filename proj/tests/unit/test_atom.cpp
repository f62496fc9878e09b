#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "aww/atom.hpp"
#include "aww/errors.hpp"

using namespace aww;

namespace {

AtomPath rotating(double omega_t) {
    return diag_rotation_atom(
        "rot", {[](double) { return 1.0; }, [](double) { return 2.0; }}, [=](double t) { return omega_t * t; },
        [](double) { return CVector::Ones(2); });
}

}  // namespace

TEST_CASE("diagonal atom has the standard frame") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    const AtomPath atom = constant_atom("d", a, CVector::Ones(2));
    const EigenFrame f = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 100});
    const FrameSample s = f.at(0.37);
    CHECK(s.energies(0) == doctest::Approx(1.0));
    CHECK(s.energies(1) == doctest::Approx(2.0));
    CHECK((s.vectors - CMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK(f.gap() == doctest::Approx(1.0));
}

TEST_CASE("rotating atom: constant spectrum, rotating vectors, zero Berry phase") {
    const AtomPath atom = rotating(kPi / 4.0);
    const EigenFrame f = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 400});
    for (double t : {0.0, 0.3, 1.0}) {
        const FrameSample s = f.at(t);
        CHECK(s.energies(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.energies(1) == doctest::Approx(2.0).epsilon(1e-12));
        const double th = kPi / 4.0 * t;
        CHECK(std::abs(std::abs(s.vectors(0, 0)) - std::cos(th)) < 1e-12);
        CHECK(std::abs(std::abs(s.vectors(1, 0)) - std::sin(th)) < 1e-12);
        CHECK(std::abs(berry_phase(f, 0, t)) < 1e-10);
        CHECK(std::abs(berry_phase(f, 1, t)) < 1e-10);
    }
    CHECK(berry_phase(f, 0, 0.0) == 0.0);
}

TEST_CASE("w vector: unitary change of basis") {
    const AtomPath atom = rotating(kPi / 4.0);
    const EigenFrame f = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 400});
    CHECK((w_vector(atom, f, 0.0) - atom.coupling(0.0)).norm() < 1e-12);
    for (double t : {0.2, 0.7, 1.0}) CHECK(w_vector(atom, f, t).norm() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("tracked frame of random Hermitian paths is orthonormal and matches the eigensolver") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    CMatrix a0(3, 3), a1(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j) {
            a0(i, j) = cplx(n(rng), n(rng));
            a1(i, j) = cplx(n(rng), n(rng));
        }
    a0 = (a0 + a0.adjoint()).eval();
    a1 = 0.1 * (a1 + a1.adjoint()).eval();
    a0 += 10.0 * CMatrix::Identity(3, 3);  // keep all levels above zero
    AtomPath atom{"random", 3, [=](double t) -> CMatrix { return a0 + t * a1; },
                  [](double) -> CVector { return CVector::Ones(3); }};
    const EigenFrame f = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 200}, 1e-6);
    for (double t : {0.0, 0.41, 1.0}) {
        const FrameSample s = f.at(t);
        CHECK((s.vectors.adjoint() * s.vectors - CMatrix::Identity(3, 3)).norm() < 1e-10);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(atom.hamiltonian(t));
        CHECK((s.energies - es.eigenvalues()).norm() < 1e-10);
        for (Eigen::Index j = 0; j < 3; ++j) {
            const CMatrix p = s.vectors.col(j) * s.vectors.col(j).adjoint();
            const CMatrix q = es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
            CHECK((p - q).norm() < 1e-10);
        }
    }
}

TEST_CASE("complex gauge: analytic Berry phase") {
    const double th = kPi / 4.0;
    const auto exact = [&](double t) {
        FrameSample s;
        s.t = t;
        s.energies = RVector::LinSpaced(2, 1.0, 2.0);
        s.vectors = CMatrix(2, 2);
        s.vectors << std::cos(th), -std::sin(th) * std::polar(1.0, -t), std::sin(th) * std::polar(1.0, t),
            std::cos(th);
        return s;
    };
    const EigenFrame f = EigenFrame::from_function(exact, TimeGrid{0.0, 1.0, 500});
    CHECK(berry_phase(f, 0, 1.0) == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(berry_phase(f, 0, 0.5) == doctest::Approx(-0.25).epsilon(1e-10));
    const auto table = berry_phase_table(f, 0);
    CHECK(table.back() == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("Kato intertwiner") {
    const AtomPath atom = reference_atom();
    const EigenFrame f = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 1000});
    CHECK((kato_intertwiner(f, 0.4, 0.4) - CMatrix::Identity(2, 2)).norm() < 1e-14);
    const CMatrix w = kato_intertwiner(f, 0.8, 0.1);
    CHECK((w.adjoint() * w - CMatrix::Identity(2, 2)).norm() < 1e-10);
    // intertwining: W P_j(s) W* = P_j(t)
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK((w * f.projection(j, 0.1) * w.adjoint() - f.projection(j, 0.8)).norm() < 1e-8);
    }
}

TEST_CASE("validate_coupling on the reference atom") {
    const AtomPath atom = reference_atom();
    const EigenFrame f = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 1000});
    const BathSpec bath = BathSpec::reference();
    const CouplingReport r = validate_coupling(atom, f, bath, std::sqrt(1.0 / 64.0), 4.0);
    CHECK(r.gap == doctest::Approx(1.0));
    CHECK(r.coupling_sup_sq == doctest::Approx(2.0));
    CHECK(r.smallness_margin() == doctest::Approx(0.5));
    CHECK(r.passed());
    const CouplingReport zero = validate_coupling(atom, f, bath, 0.0, 4.0);
    CHECK(zero.smallness_ok);
    CHECK(zero.all_well_coupled() == r.all_well_coupled());
    CHECK_FALSE(validate_coupling(atom, f, bath, 0.5, 4.0).smallness_ok);
}

TEST_CASE("well-coupledness fails when a level leaves the support") {
    std::vector<double> w, r;
    for (int i = 0; i <= 50; ++i) {
        w.push_back(0.1 * i);
        r.push_back(w.back() * (5.0 - w.back()));
    }
    const BathSpec band = BathSpec::tabulated("band", w, r, DecayBound{10.0, 3.0});
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 8.0;
    const AtomPath atom = constant_atom("wide", a, CVector::Ones(2));
    const EigenFrame f = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 50});
    const CouplingReport rep = validate_coupling(atom, f, band, 0.01);
    CHECK(rep.well_coupled[0]);
    CHECK_FALSE(rep.well_coupled[1]);
    CHECK_FALSE(rep.passed());
}

TEST_CASE("gap violation and registry") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    const AtomPath degenerate = constant_atom("deg", a, CVector::Ones(2));
    CHECK_THROWS_AS(EigenFrame::track(degenerate, TimeGrid{0.0, 1.0, 10}), GapViolation);
    a(0, 0) = -1.0;
    const AtomPath below_ground = constant_atom("neg", a, CVector::Ones(2));
    CHECK_THROWS_AS(EigenFrame::track(below_ground, TimeGrid{0.0, 1.0, 10}), GapViolation);
    CHECK_THROWS_AS(builtin_atom("nope"), ConfigError);
    CHECK(builtin_atom("ww-const-2level").levels == 2);
}
