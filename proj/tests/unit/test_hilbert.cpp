#include <doctest.h>

#include <cmath>

#include "aww/asymptotics.hpp"
#include "aww/errors.hpp"
#include "aww/hilbert.hpp"
#include "aww/reduced.hpp"

using namespace aww;

namespace {
const BathSpec bath = BathSpec::reference();
const AtomPath atom = reference_atom();
const EigenFrame frame = EigenFrame::track(atom, TimeGrid{0.0, 1.0, 2000});
}  // namespace

TEST_CASE("bath discretization meets the correlation tolerance") {
    const ModeGrid g = discretize_bath(bath, 0.05);
    CHECK(g.size() > 500);
    CHECK(g.size() < 800);
    CHECK(g.correlation_error < 1e-4);
    CHECK(std::abs(g.correlation(0.0) - correlation(bath, 0.0)) < 1e-6);
    CHECK(correlation_error(g, bath, 20.0) < 1e-4);
}

TEST_CASE("a single mode cannot represent the bath") {
    const ModeGrid one = discretize_bath_fixed(bath, 25.0, 1, 1);
    CHECK(one.size() == 1);
    CHECK(std::abs(one.correlation(0.0)) == doctest::Approx(std::abs(one.g[0] * one.g[0])));
    CHECK(correlation_error(one, bath, 20.0) > 1e-4);
    DiscretizeOptions tight;
    tight.tol_corr = 1e-14;
    tight.max_nodes = 3;
    CHECK_THROWS_AS(discretize_bath(bath, 0.05, tight), DiscretizationError);
}

TEST_CASE("decoupled dynamics follow the atomic propagator") {
    const ModeGrid g = discretize_bath(bath, 0.1);
    CVector z0 = CVector::Zero(2);
    z0(0) = 1.0;
    ExactOptions opts;
    opts.field_every = 10;
    const Trajectory tr = propagate_exact(atom, frame, g, z0, 0.1, 0.0, 1.0, opts);
    CHECK(tr.max_norm_defect() < 1e-9);
    for (std::size_t k = 0; k < tr.size(); k += 50) {
        CHECK((tr.z[k] - atomic_propagator(frame, 0.1, tr.t[k], 0.0) * z0).norm() < 1e-7);
        CHECK(tr.field_norm_sq[k] == 0.0);
    }
    for (const auto& f : tr.field) CHECK(f.norm() == 0.0);
    // populations stay put up to O(ε) without coupling
    const Populations p = populations(tr, frame);
    CHECK(std::abs(p.p.back()(0) - 1.0) < 0.1);
}

TEST_CASE("coupled dynamics conserve the norm and reproduce the leading-order decay") {
    const double eps = 0.05, lambda = std::sqrt(eps);
    DiscretizeOptions d;
    d.horizon = 1.0 / eps;
    const ModeGrid g = discretize_bath(bath, eps, d);
    CVector z0 = frame.sample(0).vectors.col(0);
    const Trajectory tr = propagate_exact(atom, frame, g, z0, eps, lambda, 1.0);
    const Populations p = populations(tr, frame);
    CHECK(p.p.front()(0) == doctest::Approx(1.0));
    CHECK(p.p.front()(1) == doctest::Approx(0.0));
    for (std::size_t k = 0; k < tr.size(); ++k) {
        CHECK(std::abs(p.p[k].sum() + tr.field_norm_sq[k] - 1.0) < 1e-6);
    }
    const LeadingOrder lo(atom, frame, bath);
    const double predicted = std::exp(-2.0 * lo.int_beta(0, 1.0));
    CHECK(std::abs(p.p.back()(0) - predicted) < 3.0 * eps);
}

TEST_CASE("field amplitude: closed form matches the propagated field") {
    const double eps = 0.1, lambda = 0.2;
    DiscretizeOptions d;
    d.horizon = 1.0 / eps;
    const ModeGrid g = discretize_bath(bath, eps, d);
    CVector z0 = CVector::Zero(2);
    z0(0) = 1.0;
    ExactOptions opts;
    opts.dt_out = 1.0 / 4000.0;
    opts.field_every = 2000;
    const Trajectory tr = propagate_exact(atom, frame, g, z0, eps, lambda, 1.0, opts);
    CHECK(field_amplitude_closed_form(tr, 0, atom, frame, g, eps, lambda).norm() == 0.0);
    for (std::size_t i = 0; i < tr.field_index.size(); ++i) {
        const std::size_t k = tr.field_index[i];
        const CVector closed = field_amplitude_closed_form(tr, k, atom, frame, g, eps, lambda);
        CHECK((closed - tr.field[i]).cwiseAbs().maxCoeff() < 1e-4);
    }
    ExactOptions coarse;
    coarse.dt_out = 0.05;
    const Trajectory rough = propagate_exact(atom, frame, g, z0, eps, lambda, 0.2, coarse);
    CHECK_THROWS_AS(field_amplitude_closed_form(rough, 2, atom, frame, g, eps, lambda), ResolutionError);
}

TEST_CASE("propagation is reversible") {
    const double eps = 0.1, lambda = 0.3;
    const ModeGrid g = discretize_bath(bath, eps);
    SingleExcitationState s{CVector::Zero(2), CVector::Zero(static_cast<Eigen::Index>(g.size()))};
    s.z(0) = 1.0;
    const SingleExcitationState fwd = propagate_state(atom, frame, g, s, eps, lambda, 0.0, 0.5);
    const SingleExcitationState back = propagate_state(atom, frame, g, fwd, eps, lambda, 0.5, 0.0);
    CHECK(fwd.norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((back.z - s.z).norm() < 1e-7);
    CHECK(back.f.norm() < 1e-7);
}
