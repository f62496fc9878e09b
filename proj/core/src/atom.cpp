#include "aww/atom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "aww/errors.hpp"
#include "aww/propagators.hpp"
#include "aww/quadrature.hpp"
#include "aww/spline.hpp"

namespace aww {

namespace {

FrameSample diagonalize(const CMatrix& a, double t) {
    const double asym = (a - a.adjoint()).norm();
    if (asym > 1e-12 * std::max(1.0, a.norm())) {
        throw std::invalid_argument("atom Hamiltonian is not Hermitian at t=" + std::to_string(t));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
    return {t, es.eigenvalues(), es.eigenvectors()};
}

// Rotate each column so that its largest-magnitude component is real positive.
void fix_initial_gauge(CMatrix& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index arg = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&arg);
        const cplx c = vectors(arg, j);
        vectors.col(j) *= std::conj(c) / std::abs(c);
    }
}

// Multiply each column by the unit phase making ⟨anchor_j, v_j⟩ real positive.
void align(CMatrix& vectors, const CMatrix& anchor, double t) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        const cplx overlap = anchor.col(j).dot(vectors.col(j));
        if (std::abs(overlap) < 0.5) {
            throw FrameSmoothnessError("eigenvector of level " + std::to_string(j) +
                                           " jumps between neighbouring samples near t=" + std::to_string(t),
                                       std::abs(overlap));
        }
        vectors.col(j) *= std::conj(overlap) / std::abs(overlap);
    }
}

double level_gap(const RVector& energies) {
    // Includes the ground level α_0 = 0.
    double gap = energies(0);
    for (Eigen::Index j = 1; j < energies.size(); ++j) gap = std::min(gap, energies(j) - energies(j - 1));
    return gap;
}

CMatrix rotation(std::size_t d, double theta) {
    CMatrix r = CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    if (d >= 2) {
        r(0, 0) = std::cos(theta);
        r(0, 1) = -std::sin(theta);
        r(1, 0) = std::sin(theta);
        r(1, 1) = std::cos(theta);
    }
    return r;
}

}  // namespace

AtomPath diag_rotation_atom(std::string name, std::vector<std::function<double(double)>> energies,
                            std::function<double(double)> angle, std::function<CVector(double)> coupling) {
    const std::size_t d = energies.size();
    if (d == 0) throw std::invalid_argument("diag_rotation_atom: need at least one level");
    AtomPath atom;
    atom.name = std::move(name);
    atom.levels = d;
    atom.hamiltonian = [energies = std::move(energies), angle = std::move(angle), d](double t) {
        RVector diag(static_cast<Eigen::Index>(d));
        for (std::size_t j = 0; j < d; ++j) diag(static_cast<Eigen::Index>(j)) = energies[j](t);
        const CMatrix r = rotation(d, angle(t));
        return CMatrix(r * diag.cast<cplx>().asDiagonal() * r.transpose());
    };
    atom.coupling = std::move(coupling);
    return atom;
}

AtomPath constant_atom(std::string name, CMatrix hamiltonian, CVector coupling) {
    if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() != coupling.size()) {
        throw std::invalid_argument("constant_atom: dimension mismatch");
    }
    AtomPath atom;
    atom.name = std::move(name);
    atom.levels = static_cast<std::size_t>(coupling.size());
    atom.hamiltonian = [hamiltonian](double) { return hamiltonian; };
    atom.coupling = [coupling](double) { return coupling; };
    return atom;
}

AtomPath tabulated_atom(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open atom file " + path.string());
    std::string line;
    std::vector<std::vector<double>> columns;
    std::size_t row = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> values;
        std::istringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (!header_checked && row == 1) {
                header_checked = true;
                continue;  // header row
            }
            throw ConfigError("atom file " + path.string() + ": non-numeric row " + std::to_string(row));
        }
        if (columns.empty()) columns.resize(values.size());
        if (values.size() != columns.size()) {
            throw ConfigError("atom file " + path.string() + ": inconsistent column count at row " +
                              std::to_string(row));
        }
        for (std::size_t c = 0; c < values.size(); ++c) columns[c].push_back(values[c]);
    }
    if (columns.empty()) throw ConfigError("atom file " + path.string() + " has no data rows");
    // columns = 1 + 2d² + 2d
    std::size_t d = 0;
    for (std::size_t k = 1; k <= 64; ++k) {
        if (1 + 2 * k * k + 2 * k == columns.size()) d = k;
    }
    if (d == 0) {
        throw ConfigError("atom file " + path.string() + ": column count " + std::to_string(columns.size()) +
                          " is not 1 + 2d^2 + 2d");
    }
    if (columns[0].size() < 2) throw ConfigError("atom file " + path.string() + ": need at least two rows");
    auto splines = std::make_shared<std::vector<CubicSpline>>();
    try {
        for (std::size_t c = 1; c < columns.size(); ++c) splines->emplace_back(columns[0], columns[c]);
    } catch (const std::invalid_argument&) {
        throw ConfigError("atom file " + path.string() + ": t must be strictly increasing");
    }
    AtomPath atom;
    atom.name = path.stem().string();
    atom.levels = d;
    const auto di = static_cast<Eigen::Index>(d);
    atom.hamiltonian = [splines, di](double t) {
        CMatrix a(di, di);
        std::size_t c = 0;
        for (Eigen::Index r = 0; r < di; ++r) {
            for (Eigen::Index s = 0; s < di; ++s, c += 2) a(r, s) = cplx((*splines)[c](t), (*splines)[c + 1](t));
        }
        return a;
    };
    atom.coupling = [splines, di](double t) {
        CVector v(di);
        std::size_t c = 2 * static_cast<std::size_t>(di * di);
        for (Eigen::Index r = 0; r < di; ++r, c += 2) v(r) = cplx((*splines)[c](t), (*splines)[c + 1](t));
        return v;
    };
    for (double t : columns[0]) {
        const CMatrix a = atom.hamiltonian(t);
        if ((a - a.adjoint()).norm() > 1e-12 * std::max(1.0, a.norm())) {
            throw ConfigError("atom file " + path.string() + ": matrix not Hermitian at t=" + std::to_string(t));
        }
    }
    return atom;
}

AtomPath reference_atom() {
    CVector v(2);
    v << 1.0, 1.0;
    return diag_rotation_atom(
        "ww-ref-2level", {[](double) { return 1.0; }, [](double t) { return 2.0 + 0.3 * t; }},
        [](double t) { return kPi * t / 4.0; }, [v](double) { return v; });
}

AtomPath constant_reference_atom() {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    CVector v(2);
    v << 1.0, 1.0;
    return constant_atom("ww-const-2level", a, v);
}

AtomPath builtin_atom(const std::string& name) {
    if (name == "ww-ref-2level") return reference_atom();
    if (name == "ww-const-2level") return constant_reference_atom();
    throw ConfigError("unknown builtin atom '" + name + "'");
}

EigenFrame EigenFrame::track(const AtomPath& atom, const TimeGrid& grid, double min_gap) {
    EigenFrame frame;
    frame.grid_ = grid;
    frame.levels_ = atom.levels;
    frame.aligned_ = true;
    const auto hamiltonian = atom.hamiltonian;
    frame.raw_ = [hamiltonian](double t) { return diagonalize(hamiltonian(t), t); };
    frame.samples_.reserve(grid.size());
    frame.gap_ = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.at(k);
        FrameSample s = frame.raw_(t);
        if (static_cast<std::size_t>(s.energies.size()) != atom.levels) {
            throw std::invalid_argument("atom Hamiltonian dimension differs from declared level count");
        }
        const double gap = level_gap(s.energies);
        if (gap < min_gap) throw GapViolation(t, gap);
        frame.gap_ = std::min(frame.gap_, gap);
        if (k == 0) {
            fix_initial_gauge(s.vectors);
        } else {
            align(s.vectors, frame.samples_.back().vectors, t);
        }
        frame.samples_.push_back(std::move(s));
    }
    return frame;
}

EigenFrame EigenFrame::from_function(Evaluator exact, const TimeGrid& grid) {
    EigenFrame frame;
    frame.grid_ = grid;
    frame.aligned_ = false;
    frame.raw_ = std::move(exact);
    frame.gap_ = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        frame.samples_.push_back(frame.raw_(grid.at(k)));
        frame.gap_ = std::min(frame.gap_, level_gap(frame.samples_.back().energies));
    }
    frame.levels_ = static_cast<std::size_t>(frame.samples_.front().energies.size());
    return frame;
}

FrameSample EigenFrame::at(double t) const {
    FrameSample s = raw_(t);
    if (!aligned_) return s;
    const double pos = (t - grid_.begin) / grid_.step();
    const auto k = static_cast<std::size_t>(std::clamp(std::floor(pos + 1e-9), 0.0, static_cast<double>(grid_.intervals)));
    align(s.vectors, samples_[k].vectors, t);
    return s;
}

CMatrix EigenFrame::projection(std::size_t j, double t) const {
    const FrameSample s = raw_(t);
    const auto c = s.vectors.col(static_cast<Eigen::Index>(j));
    return c * c.adjoint();
}

CVector EigenFrame::vector_derivative(std::size_t j, double t, double h) const {
    if (h <= 0.0) h = grid_.step();
    const auto ji = static_cast<Eigen::Index>(j);
    if (!aligned_) {
        return (-raw_(t + 2 * h).vectors.col(ji) + 8.0 * raw_(t + h).vectors.col(ji) -
                8.0 * raw_(t - h).vectors.col(ji) + raw_(t - 2 * h).vectors.col(ji)) /
               (12.0 * h);
    }
    // All stencil points aligned to the vector at t itself.
    const CMatrix anchor = at(t).vectors;
    const auto point = [&](double u) {
        FrameSample s = raw_(u);
        align(s.vectors, anchor, u);
        return CVector(s.vectors.col(ji));
    };
    return (-point(t + 2 * h) + 8.0 * point(t + h) - 8.0 * point(t - h) + point(t - 2 * h)) / (12.0 * h);
}

CMatrix EigenFrame::projection_derivative(std::size_t j, double t, double h) const {
    if (h <= 0.0) h = grid_.step();
    return (-projection(j, t + 2 * h) + 8.0 * projection(j, t + h) - 8.0 * projection(j, t - h) +
            projection(j, t - 2 * h)) /
           (12.0 * h);
}

CMatrix EigenFrame::kato_generator(double t, double h) const {
    const auto d = static_cast<Eigen::Index>(levels_);
    CMatrix k = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < levels_; ++j) k += projection_derivative(j, t, h) * projection(j, t);
    return k;
}

EigenFrame eigenframe(const AtomPath& atom, const TimeGrid& grid, double min_gap) {
    return EigenFrame::track(atom, grid, min_gap);
}

CVector coupling_vector(const AtomPath& atom, const FrameSample& sample) {
    return sample.vectors * atom.coupling(sample.t);
}

CVector coupling_vector(const AtomPath& atom, const EigenFrame& frame, double t) {
    return coupling_vector(atom, frame.at(t));
}

CVector w_vector(const AtomPath& atom, const EigenFrame& frame, double t) {
    return frame.sample(0).vectors.adjoint() * coupling_vector(atom, frame, t);
}

BerryPhase berry_phase_detailed(const EigenFrame& frame, std::size_t j, double t) {
    const double t0 = frame.grid().begin;
    if (t <= t0) return {};
    auto n = static_cast<std::size_t>(std::ceil((t - t0) / frame.grid().step()));
    n += n % 2;
    const double h = (t - t0) / static_cast<double>(n);
    std::vector<cplx> integrand(n + 1);
    const auto ji = static_cast<Eigen::Index>(j);
    for (std::size_t k = 0; k <= n; ++k) {
        const double u = t0 + static_cast<double>(k) * h;
        const CVector phi = frame.at(u).vectors.col(ji);
        integrand[k] = kI * phi.dot(frame.vector_derivative(j, u));
    }
    const cplx xi = quad::simpson<cplx>(integrand, h);
    return {xi.real(), xi.imag()};
}

double berry_phase(const EigenFrame& frame, std::size_t j, double t) {
    const BerryPhase b = berry_phase_detailed(frame, j, t);
    if (std::abs(b.imaginary_residue) > 1e-8) {
        throw FrameSmoothnessError("Berry phase accumulated a non-real part", std::abs(b.imaginary_residue));
    }
    return b.value;
}

std::vector<double> berry_phase_table(const EigenFrame& frame, std::size_t j) {
    const TimeGrid& g = frame.grid();
    std::vector<cplx> integrand(g.size());
    const auto ji = static_cast<Eigen::Index>(j);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double u = g.at(k);
        integrand[k] = kI * frame.sample(k).vectors.col(ji).dot(frame.vector_derivative(j, u));
    }
    const auto cumulative = quad::cumulative_simpson<cplx>(integrand, g.step());
    std::vector<double> out(cumulative.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = cumulative[k].real();
    return out;
}

CMatrix kato_intertwiner(const EigenFrame& frame, double t, double s) {
    const auto d = static_cast<Eigen::Index>(frame.levels());
    if (t == s) return CMatrix::Identity(d, d);
    const auto steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(t - s) / frame.grid().step())));
    const CMatrix w = magnus4([&frame](double u) { return frame.kato_generator(u); }, s, t, steps, true);
    const double defect = unitarity_defect(w);
    if (defect > 1e-8) throw IntegratorError("Kato intertwiner lost unitarity; reduce the frame grid step", defect);
    return w;
}

double coupling_sup_sq(const AtomPath& atom, const EigenFrame& frame) {
    double sup = 0.0;
    for (std::size_t k = 0; k < frame.grid().size(); ++k) {
        sup = std::max(sup, atom.coupling(frame.grid().at(k)).squaredNorm());
    }
    return sup;
}

bool CouplingReport::all_well_coupled() const {
    return std::all_of(well_coupled.begin(), well_coupled.end(), [](bool b) { return b; });
}

CouplingReport validate_coupling(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath,
                                 double lambda, std::optional<double> gamma_l1) {
    CouplingReport r;
    r.lambda = lambda;
    r.gap = frame.gap();
    r.coupling_sup_sq = coupling_sup_sq(atom, frame);
    r.gamma_l1 = gamma_l1 ? *gamma_l1 : correlation_l1_norm(bath);
    r.smallness = 4.0 * lambda * lambda * r.coupling_sup_sq * r.gamma_l1 / r.gap;
    r.smallness_ok = r.smallness < 1.0;
    r.inf_beta.assign(frame.levels(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < frame.grid().size(); ++k) {
        const FrameSample& s = frame.sample(k);
        const CVector v = atom.coupling(s.t);
        for (std::size_t j = 0; j < frame.levels(); ++j) {
            const auto ji = static_cast<Eigen::Index>(j);
            const double beta = std::sqrt(kPi / 2.0) * std::norm(v(ji)) * fourier_hat(bath, s.energies(ji));
            r.inf_beta[j] = std::min(r.inf_beta[j], beta);
        }
    }
    r.well_coupled.resize(frame.levels());
    for (std::size_t j = 0; j < frame.levels(); ++j) r.well_coupled[j] = r.inf_beta[j] > 0.0;
    return r;
}

}  // namespace aww
