// bath.hpp: spectral density of the field, its correlation function
// γ(t) = ∫ ρ(ω) e^{-iωt} dω and the transforms built from it.
//
// Fourier convention throughout: γ̂(α) = (2π)^{-1/2} ∫ e^{iαt} γ(t) dt, so for a
// density supported on ω ≥ 0, γ̂(α) = √(2π) ρ(α).

#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aww/types.hpp"

namespace aww {

/// Certified envelope |γ(t)| ≤ c_gamma / (1 + t)^exponent for t ≥ 0.
struct DecayBound {
    double c_gamma{1.0};
    double exponent{3.0};

    [[nodiscard]] double envelope(double t) const;
    /// ∫_x^∞ of the envelope.
    [[nodiscard]] double tail(double x) const;
};

class BathSpec {
public:
    using Density = std::function<double(double)>;
    using Correlation = std::function<cplx(double)>;

    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    /// `phase_rate` bounds |d/dt arg γ(t)| and sizes time-domain quadrature
    /// panels; `support_max` may be infinite only with a closed-form γ.
    BathSpec(std::string name, Density rho, double support_max, DecayBound bound,
             std::optional<Correlation> closed_form, double phase_rate);

    /// ρ(ω) = ω² e^{-ω}; γ(t) = 2 / (1 + it)³; C_γ = 4√2, m = 3.
    static BathSpec reference();

    /// Natural cubic spline through (ω_k, ρ_k), zero outside [ω_0, ω_n].
    /// γ and the principal value are integrated exactly on the spline.
    /// The decay bound is fitted on a log grid unless supplied.
    static BathSpec tabulated(std::string name, std::vector<double> omega, std::vector<double> rho,
                              std::optional<DecayBound> bound = std::nullopt);

    /// CSV with header `omega,rho`; omega strictly increasing, rho ≥ 0.
    static BathSpec from_csv(const std::filesystem::path& path,
                             std::optional<DecayBound> bound = std::nullopt);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] double density(double omega) const;
    [[nodiscard]] double support_max() const noexcept { return support_max_; }
    [[nodiscard]] bool has_closed_form() const noexcept { return closed_form_.has_value(); }
    [[nodiscard]] const DecayBound& decay_bound() const noexcept { return bound_; }
    [[nodiscard]] double phase_rate() const noexcept { return phase_rate_; }
    [[nodiscard]] std::optional<cplx> closed_form(double t) const;
    /// PV ∫ ρ(ω)/(α − ω) dω when the density admits an exact evaluation.
    [[nodiscard]] std::optional<double> exact_principal_value(double alpha) const;

    /// Smallest integer Ω with ∫_Ω^∞ ρ < tail_tol (support_max if finite and smaller).
    [[nodiscard]] double cutoff(double tail_tol) const;

private:
    std::string name_;
    Density rho_;
    double support_max_;
    DecayBound bound_;
    std::optional<Correlation> closed_form_;
    double phase_rate_;
    std::function<double(double)> principal_value_;
};

/// Value of a transform together with its estimated absolute error.
struct Estimate {
    cplx value{};
    double error{0.0};
};

inline constexpr double kQuadratureTolerance = 1e-10;

/// γ(t). Closed form when available, otherwise composite Gauss over ρ with
/// panel width ≤ π/(4|t|). γ(-t) = conj γ(t) by construction.
cplx correlation(const BathSpec& bath, double t);

/// Always the quadrature route, over [0, omega_max]; error estimated by
/// panel doubling. Throws QuadratureError above `tol`.
Estimate correlation_quadrature(const BathSpec& bath, double t, double omega_max,
                                double tol = kQuadratureTolerance);

/// γ̂(α) = √(2π) ρ(α); zero off the support.
double fourier_hat(const BathSpec& bath, double alpha);

/// ∫_0^T e^{ixα} γ(x) dx. T may be BathSpec::kInfinity; negative T integrates
/// backwards.
cplx half_line_transform(const BathSpec& bath, double alpha, double horizon);

/// Same with an error estimate. For infinite T the real part is π ρ(α) and
/// the imaginary part the principal value ∫ ρ(ω)/(α - ω) dω.
Estimate half_line_transform_estimate(const BathSpec& bath, double alpha, double horizon);

/// Direct time-domain evaluation on [0, X*] where the envelope tail drops
/// below `tail_tol`; the analytic tail bound is added to the error.
Estimate half_line_transform_truncated(const BathSpec& bath, double alpha, double tail_tol = 1e-10);

/// ‖γ‖_{L¹(ℝ)} = 2 ∫_0^∞ |γ|, with the envelope tail added beyond the cut.
double correlation_l1_norm(const BathSpec& bath);

/// True if |γ(t_k)| ≤ envelope(t_k) on `points` log-spaced times up to t_max.
bool decay_bound_holds(const BathSpec& bath, double t_max = 1e3, std::size_t points = 200);

struct DecayShift {
    double beta{0.0};        ///< decay rate β_j ≥ 0
    double lamb_shift{0.0};  ///< α̃_j
    bool well_coupled{false};
};

/// β = √(π/2) |v|² γ̂(α), α̃ = |v|² Im ∫_0^∞ e^{ixα} γ(x) dx.
DecayShift decay_and_shift(const BathSpec& bath, cplx coupling, double alpha);

/// Test function B(ω) on the radially reduced frequency axis.
struct TestObservable {
    std::string name;
    std::function<cplx(double)> weight;

    static TestObservable constant(cplx c);
    /// B(ω) = ω^p
    static TestObservable power(double p);
};

/// γ_B(t) = ∫ B(ω) ρ(ω) e^{-iωt} dω by quadrature.
cplx weighted_correlation(const BathSpec& bath, const TestObservable& obs, double t);

/// γ̂_B(α) = √(2π) B(α) ρ(α).
cplx weighted_hat(const BathSpec& bath, const TestObservable& obs, double alpha);

/// Registry used by configuration: "reference" only.
BathSpec builtin_bath(const std::string& name);

}  // namespace aww
