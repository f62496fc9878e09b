// asymptotics.hpp: closed-form leading-order predictions.

#pragma once

#include <string>
#include <vector>

#include "aww/atom.hpp"
#include "aww/bath.hpp"
#include "aww/types.hpp"

namespace aww {

/// Running integral of a sampled rate on a uniform grid, with cubic Hermite
/// interpolation between nodes (the rate supplies the slopes).
class CumulativeTable {
public:
    CumulativeTable() = default;
    CumulativeTable(double t0, double h, std::vector<double> rate);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] double rate(double t) const;
    [[nodiscard]] const std::vector<double>& values() const noexcept { return value_; }

private:
    double t0_{0.0};
    double h_{1.0};
    std::vector<double> rate_;
    std::vector<double> value_;
};

/// ∫α_j, ∫β_j, ∫α̃_j and ξ_j on the frame grid, built once.
class LeadingOrder {
public:
    LeadingOrder(const AtomPath& atom, const EigenFrame& frame, const BathSpec& bath);

    [[nodiscard]] std::size_t levels() const noexcept { return frame_->levels(); }
    [[nodiscard]] double int_alpha(std::size_t j, double t) const { return alpha_[j](t); }
    [[nodiscard]] double int_beta(std::size_t j, double t) const { return beta_[j](t); }
    [[nodiscard]] double int_shift(std::size_t j, double t) const { return shift_[j](t); }
    [[nodiscard]] double berry(std::size_t j, double t) const { return xi_[j](t); }
    [[nodiscard]] double beta(std::size_t j, double t) const { return beta_[j].rate(t); }
    [[nodiscard]] const EigenFrame& frame() const noexcept { return *frame_; }

    /// z_lead(t) = Σ_j e^{−(i/ε)∫(α_j + λ²α̃_j)} e^{−(λ²/ε)∫β_j} e^{iξ_j} ⟨φ_j(0), z0⟩ φ_j(t).
    [[nodiscard]] CVector z(double epsilon, double lambda, const CVector& z0, double t) const;

    /// e^{−2(λ²/ε)∫_0^t β_j} p0.
    [[nodiscard]] double population(double epsilon, double lambda, double p0, std::size_t j, double t) const;

    /// 1 − Σ_j e^{−2(λ²/ε)∫β_j} |⟨φ_j(0), z0⟩|².
    [[nodiscard]] double p_down(double epsilon, double lambda, const CVector& z0, double t) const;

private:
    const EigenFrame* frame_;
    std::vector<CumulativeTable> alpha_, beta_, shift_, xi_;
};

enum class Regime { strong, davies, weak_a, weak_b };

std::string to_string(Regime r);

struct RegimeReport {
    Regime regime{Regime::davies};
    double ratio{0.0};          ///< r = λ²/ε
    double ratio_eps_sq{0.0};   ///< λ²/ε²
    double predicted_p_down{0.0};
    std::string formula;
};

/// r ≥ 10 strong; 0.1 ≤ r ≤ 10 Davies; r < 0.1 weak_a if λ²/ε² ≥ 1 else weak_b.
Regime regime_classify(double epsilon, double lambda);

/// Classification plus the regime's p↓(t) formula evaluated on the tables:
/// strong and Davies use 1 − Σ e^{−2r∫β_j}|z_{0,j}|², the weak regimes its
/// linearization 2r Σ |z_{0,j}|² ∫β_j.
RegimeReport regime_report(const LeadingOrder& lo, double epsilon, double lambda, const CVector& z0, double t);

/// Weak-coupling semigroup for time-independent A and v (v_j attached to
/// the j-th eigenvector of A, ascending).
class TimeIndependentSemigroup {
public:
    TimeIndependentSemigroup(const CMatrix& a, const CVector& v, const BathSpec& bath, double lambda);

    /// Σ_j e^{−it(α_j + λ²α′_j)} P_j z0, t in physical time.
    [[nodiscard]] CVector operator()(const CVector& z0, double t) const;
    /// Σ_j (α_j + λ²α′_j) P_j
    [[nodiscard]] CMatrix generator() const;
    [[nodiscard]] const std::vector<cplx>& corrected_levels() const noexcept { return levels_; }
    [[nodiscard]] const std::vector<cplx>& first_order() const noexcept { return alpha_prime_; }

private:
    CMatrix vectors_;
    std::vector<cplx> levels_;
    std::vector<cplx> alpha_prime_;
};

CVector semigroup_time_independent(const CMatrix& a, const CVector& v, const BathSpec& bath, double lambda,
                                   const CVector& z0, double t);

}  // namespace aww
