#include "aww/propagators.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace aww {

CMatrix exp_anti_hermitian(const CMatrix& m) {
    // m = -iH with H = i m Hermitian; exp(m) = V exp(-iΛ) V*.
    const CMatrix h = kI * m;
    const CMatrix herm = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    const RVector& lam = es.eigenvalues();
    CVector phases(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) phases[i] = std::polar(1.0, -lam[i]);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix exp_general(const CMatrix& m) {
    return m.exp();
}

CMatrix magnus4_step(const Generator& generator, double t, double h, bool anti_hermitian) {
    static const double c = std::sqrt(3.0) / 6.0;
    const CMatrix m1 = generator(t + (0.5 - c) * h);
    const CMatrix m2 = generator(t + (0.5 + c) * h);
    const CMatrix omega = 0.5 * h * (m1 + m2) + (std::sqrt(3.0) / 12.0) * h * h * (m2 * m1 - m1 * m2);
    return anti_hermitian ? exp_anti_hermitian(omega) : exp_general(omega);
}

CMatrix magnus4(const Generator& generator, double from, double to, std::size_t steps, bool anti_hermitian) {
    const auto path = magnus4_path(generator, from, to, steps, anti_hermitian);
    return path.back();
}

std::vector<CMatrix> magnus4_path(const Generator& generator, double from, double to, std::size_t steps,
                                  bool anti_hermitian) {
    const Eigen::Index d = generator(from).rows();
    std::vector<CMatrix> out;
    out.reserve(steps + 1);
    out.push_back(CMatrix::Identity(d, d));
    if (steps == 0 || to == from) return out;
    const double h = (to - from) / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = from + static_cast<double>(k) * h;
        out.push_back(magnus4_step(generator, t, h, anti_hermitian) * out.back());
    }
    return out;
}

double unitarity_defect(const CMatrix& y) {
    const CMatrix e = y.adjoint() * y - CMatrix::Identity(y.rows(), y.cols());
    return operator_norm(e);
}

double operator_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace aww
