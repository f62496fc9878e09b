#include "aww/bath.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aww/errors.hpp"
#include "aww/quadrature.hpp"
#include "aww/spline.hpp"

namespace aww {

namespace {

constexpr int kPanelOrder = 8;
constexpr int kMaxDoublings = 8;

// Frequency window used when the support is unbounded.
double effective_support(const BathSpec& bath) {
    return std::isfinite(bath.support_max()) ? bath.support_max() : bath.cutoff(1e-14);
}

// Breakpoints on [from, to] whose widths start at `first` next to `from` and
// double until they reach `max_width`. Works for from > to as well.
std::vector<double> graded_breaks(double from, double to, double first, double max_width) {
    std::vector<double> breaks{from};
    const double dir = to > from ? 1.0 : -1.0;
    double width = std::min(first, max_width);
    double x = from;
    while (dir * (to - x) > 0.0) {
        x = dir > 0 ? std::min(x + width, to) : std::max(x - width, to);
        breaks.push_back(x);
        width = std::min(2.0 * width, max_width);
    }
    if (dir < 0) std::reverse(breaks.begin(), breaks.end());
    return breaks;
}

// Analytic γ on an unbounded support: integrate in time. Tabulated baths
// integrate in frequency, where each density sample is cheap.
bool time_domain(const BathSpec& bath) {
    return bath.has_closed_form() && !std::isfinite(bath.support_max());
}

// (e^{iδT} - 1) / (iδ), the finite-horizon kernel of the half-line transform.
cplx finite_horizon_kernel(double delta, double horizon) {
    const double x = delta * horizon;
    if (std::abs(x) < 1e-4) {
        return horizon * cplx(1.0 - x * x / 6.0, 0.5 * x);
    }
    return (std::polar(1.0, x) - 1.0) / (kI * delta);
}

// Principal value ∫_0^Ω ρ(ω)/(α - ω) dω with a symmetric window around α.
double principal_value(const BathSpec& bath, double alpha, double omega_max, int order) {
    const auto regular = [&](double w) { return bath.density(w) / (alpha - w); };
    const double max_width = 0.5;
    if (alpha <= 0.0 || alpha >= omega_max) {
        const double dist = std::max(alpha <= 0.0 ? -alpha : alpha - omega_max, 1e-6 * omega_max);
        const auto breaks = alpha <= 0.0 ? graded_breaks(0.0, omega_max, dist, max_width)
                                         : graded_breaks(omega_max, 0.0, dist, max_width);
        return quad::integrate_breakpoints(regular, breaks, order);
    }
    const double half = std::min(alpha, omega_max - alpha);
    const auto symmetric = [&](double u) {
        return (bath.density(alpha - u) - bath.density(alpha + u)) / u;
    };
    const auto panels = static_cast<std::size_t>(std::ceil(half / max_width));
    double value = quad::integrate_panels(symmetric, 0.0, half, std::max<std::size_t>(panels, 1), order);
    if (alpha - half > 0.0) {
        const auto breaks = graded_breaks(alpha - half, 0.0, half, max_width);
        value += quad::integrate_breakpoints(regular, breaks, order);
    } else if (alpha + half < omega_max) {
        const auto breaks = graded_breaks(alpha + half, omega_max, half, max_width);
        value += quad::integrate_breakpoints(regular, breaks, order);
    }
    return value;
}

std::size_t panels_for(double length, double width) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / width)));
}

}  // namespace

std::optional<double> BathSpec::exact_principal_value(double alpha) const {
    if (!principal_value_) return std::nullopt;
    return principal_value_(alpha);
}

double DecayBound::envelope(double t) const {
    return c_gamma / std::pow(1.0 + std::abs(t), exponent);
}

double DecayBound::tail(double x) const {
    return c_gamma / ((exponent - 1.0) * std::pow(1.0 + x, exponent - 1.0));
}

BathSpec::BathSpec(std::string name, Density rho, double support_max, DecayBound bound,
                   std::optional<Correlation> closed_form, double phase_rate)
    : name_(std::move(name)),
      rho_(std::move(rho)),
      support_max_(support_max),
      bound_(bound),
      closed_form_(std::move(closed_form)),
      phase_rate_(phase_rate) {
    if (!(support_max_ > 0.0)) throw std::invalid_argument("BathSpec: support_max must be positive");
    if (!std::isfinite(support_max_) && !closed_form_) {
        throw std::invalid_argument("BathSpec: unbounded support requires a closed-form correlation");
    }
    if (!(bound_.c_gamma > 0.0)) throw std::invalid_argument("BathSpec: C_gamma must be positive");
}

BathSpec BathSpec::reference() {
    return BathSpec(
        "reference", [](double w) { return w * w * std::exp(-w); }, kInfinity, DecayBound{4.0 * std::numbers::sqrt2, 3.0},
        Correlation([](double t) {
            const cplx d(1.0, t);
            return 2.0 / (d * d * d);
        }),
        3.0);
}

BathSpec BathSpec::tabulated(std::string name, std::vector<double> omega, std::vector<double> rho,
                             std::optional<DecayBound> bound) {
    if (omega.size() != rho.size() || omega.size() < 4) {
        throw ConfigError("tabulated bath: need at least four (omega, rho) rows");
    }
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (omega[i] < 0.0) throw ConfigError("tabulated bath: omega must be non-negative");
        if (rho[i] < 0.0) throw ConfigError("tabulated bath: rho must be non-negative");
        if (i > 0 && !(omega[i] > omega[i - 1])) {
            throw ConfigError("tabulated bath: omega must be strictly increasing");
        }
    }
    const double lo = omega.front();
    const double hi = omega.back();
    auto spline = std::make_shared<CubicSpline>(std::move(omega), std::move(rho));
    Density density = [spline, lo, hi](double w) {
        if (w < lo || w > hi) return 0.0;
        return std::max(0.0, (*spline)(w));
    };
    Correlation gamma = [spline](double t) { return spline->fourier(t); };
    BathSpec bath(std::move(name), density, hi, bound.value_or(DecayBound{1.0, 3.0}), gamma, hi);
    bath.principal_value_ = [spline](double alpha) { return spline->principal_value(alpha); };
    if (!bound) {
        // Fit the envelope: exponent from the late-time slope, constant from the max ratio.
        std::vector<double> ts, mags;
        for (int k = 0; k <= 60; ++k) {
            const double t = std::pow(10.0, -1.0 + 4.0 * k / 60.0);
            ts.push_back(t);
            mags.push_back(std::abs(correlation(bath, t)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t k = 30; k < ts.size(); ++k) {
            const double x = std::log(1.0 + ts[k]);
            const double y = std::log(std::max(mags[k], 1e-300));
            sx += x, sy += y, sxx += x * x, sxy += x * y;
            ++n;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        DecayBound fitted{1.0, std::max(-slope, 1.0 + 1e-3)};
        double c = std::abs(correlation(bath, 0.0));
        for (std::size_t k = 0; k < ts.size(); ++k) {
            c = std::max(c, mags[k] * std::pow(1.0 + ts[k], fitted.exponent));
        }
        fitted.c_gamma = 1.05 * c;
        bath.bound_ = fitted;
    }
    return bath;
}

BathSpec BathSpec::from_csv(const std::filesystem::path& path, std::optional<DecayBound> bound) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open bath file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("bath file " + path.string() + " is empty");
    std::string header = line;
    header.erase(std::remove_if(header.begin(), header.end(), ::isspace), header.end());
    if (header != "omega,rho") throw ConfigError("bath file " + path.string() + ": header must be 'omega,rho'");
    std::vector<double> omega, rho;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            throw ConfigError("bath file " + path.string() + ": malformed row " + std::to_string(row));
        }
        try {
            omega.push_back(std::stod(a));
            rho.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw ConfigError("bath file " + path.string() + ": non-numeric row " + std::to_string(row));
        }
    }
    return tabulated(path.stem().string(), std::move(omega), std::move(rho), bound);
}

double BathSpec::density(double omega) const {
    if (omega < 0.0 || omega > support_max_) return 0.0;
    return rho_(omega);
}

std::optional<cplx> BathSpec::closed_form(double t) const {
    if (!closed_form_) return std::nullopt;
    return (*closed_form_)(t);
}

double BathSpec::cutoff(double tail_tol) const {
    const auto rho = [this](double w) { return density(w); };
    const double limit = std::isfinite(support_max_) ? support_max_ : 1e4;
    for (double omega = 1.0; omega < limit; omega += 1.0) {
        const double far = std::min(limit, omega + 500.0);
        const double tail = quad::integrate_panels(rho, omega, far, panels_for(far - omega, 0.5), 16);
        if (tail < tail_tol) return omega;
    }
    return limit;
}

Estimate correlation_quadrature(const BathSpec& bath, double t, double omega_max, double tol) {
    const double at = std::abs(t);
    const auto integrand = [&](double w) { return bath.density(w) * std::polar(1.0, -w * at); };
    double width = std::min(omega_max / 16.0, 0.5);
    if (at > 0.0) width = std::min(width, kPi / (4.0 * at));
    std::size_t panels = panels_for(omega_max, width);
    cplx coarse = quad::integrate_panels(integrand, 0.0, omega_max, panels, kPanelOrder);
    double err = 0.0;
    for (int k = 0; k < kMaxDoublings; ++k) {
        panels *= 2;
        const cplx fine = quad::integrate_panels(integrand, 0.0, omega_max, panels, kPanelOrder);
        err = std::abs(fine - coarse);
        coarse = fine;
        if (err <= tol) {
            return {t < 0 ? std::conj(fine) : fine, err};
        }
    }
    throw QuadratureError("correlation quadrature did not converge at t=" + std::to_string(t), err);
}

cplx correlation(const BathSpec& bath, double t) {
    if (t < 0.0) return std::conj(correlation(bath, -t));
    if (auto closed = bath.closed_form(t)) return *closed;
    return correlation_quadrature(bath, t, bath.support_max()).value;
}

double fourier_hat(const BathSpec& bath, double alpha) {
    return kSqrt2Pi * bath.density(alpha);
}

Estimate half_line_transform_estimate(const BathSpec& bath, double alpha, double horizon) {
    if (horizon < 0.0) {
        // ∫_0^{-T} = -conj ∫_0^T since γ(-x) = conj γ(x).
        const Estimate e = half_line_transform_estimate(bath, alpha, -horizon);
        return {-std::conj(e.value), e.error};
    }
    if (horizon == 0.0) return {};
    if (!std::isfinite(horizon)) {
        if (const auto pv = bath.exact_principal_value(alpha)) return {cplx(kPi * bath.density(alpha), *pv), 0.0};
        const double omega_max = effective_support(bath);
        const double im16 = principal_value(bath, alpha, omega_max, 16);
        const double im24 = principal_value(bath, alpha, omega_max, 24);
        return {cplx(kPi * bath.density(alpha), im24), std::abs(im24 - im16)};
    }
    if (time_domain(bath)) {
        const auto integrand = [&](double x) { return std::polar(1.0, alpha * x) * *bath.closed_form(x); };
        const double width = std::min(0.5, kPi / (2.0 * (std::abs(alpha) + bath.phase_rate())));
        const std::size_t panels = panels_for(horizon, width);
        const cplx coarse = quad::integrate_panels(integrand, 0.0, horizon, panels, kPanelOrder);
        const cplx fine = quad::integrate_panels(integrand, 0.0, horizon, 2 * panels, kPanelOrder);
        return {fine, std::abs(fine - coarse)};
    }
    // Frequency route: ∫ ρ(ω) (e^{i(α-ω)T} - 1)/(i(α-ω)) dω; the kernel has width ~1/T.
    const double omega_max = bath.support_max();
    const auto integrand = [&](double w) { return bath.density(w) * finite_horizon_kernel(alpha - w, horizon); };
    const double width = std::min(0.25, kPi / (4.0 * horizon));
    const std::size_t panels = panels_for(omega_max, width);
    const cplx coarse = quad::integrate_panels(integrand, 0.0, omega_max, panels, kPanelOrder);
    const cplx fine = quad::integrate_panels(integrand, 0.0, omega_max, 2 * panels, kPanelOrder);
    return {fine, std::abs(fine - coarse)};
}

cplx half_line_transform(const BathSpec& bath, double alpha, double horizon) {
    if (horizon < 0.0) return -std::conj(half_line_transform(bath, alpha, -horizon));
    if (horizon == 0.0) return {};
    if (!std::isfinite(horizon)) {
        const Estimate e = half_line_transform_estimate(bath, alpha, horizon);
        if (e.error > 1e-8) {
            throw QuadratureError("half-line principal value did not converge", e.error);
        }
        return e.value;
    }
    if (time_domain(bath)) {
        const auto integrand = [&](double x) { return std::polar(1.0, alpha * x) * *bath.closed_form(x); };
        const double width = std::min(0.5, kPi / (2.0 * (std::abs(alpha) + bath.phase_rate())));
        return quad::integrate_panels(integrand, 0.0, horizon, panels_for(horizon, width), kPanelOrder);
    }
    const auto integrand = [&](double w) { return bath.density(w) * finite_horizon_kernel(alpha - w, horizon); };
    const double width = std::min(0.25, kPi / (4.0 * horizon));
    return quad::integrate_panels(integrand, 0.0, bath.support_max(), panels_for(bath.support_max(), width),
                                  kPanelOrder);
}

Estimate half_line_transform_truncated(const BathSpec& bath, double alpha, double tail_tol) {
    const DecayBound& b = bath.decay_bound();
    const double cut = std::pow(b.c_gamma / ((b.exponent - 1.0) * tail_tol), 1.0 / (b.exponent - 1.0)) - 1.0;
    const Estimate body = half_line_transform_estimate(bath, alpha, cut);
    return {body.value, body.error + b.tail(cut)};
}

double correlation_l1_norm(const BathSpec& bath) {
    const DecayBound& b = bath.decay_bound();
    // Tabulated correlations cost O(knots) per sample; their tail is cut earlier.
    const double tol = std::isfinite(bath.support_max()) ? 1e-4 : 1e-9;
    const double cut = std::pow(b.c_gamma / ((b.exponent - 1.0) * tol), 1.0 / (b.exponent - 1.0)) - 1.0;
    const auto magnitude = [&](double t) { return std::abs(correlation(bath, t)); };
    const double max_width = kPi / (2.0 * bath.phase_rate());
    std::vector<double> breaks{0.0};
    double x = 0.0;
    while (x < cut) {
        x = std::min(cut, x + std::min(0.25 * (1.0 + x), max_width));
        breaks.push_back(x);
    }
    const double body = quad::integrate_breakpoints(magnitude, breaks, 16);
    return 2.0 * (body + b.tail(cut));
}

bool decay_bound_holds(const BathSpec& bath, double t_max, std::size_t points) {
    const DecayBound& b = bath.decay_bound();
    if (std::abs(correlation(bath, 0.0)) > b.envelope(0.0) * (1.0 + 1e-12)) return false;
    for (std::size_t k = 0; k < points; ++k) {
        const double t = std::pow(10.0, -3.0 + (std::log10(t_max) + 3.0) * static_cast<double>(k) /
                                                     static_cast<double>(points - 1));
        if (std::abs(correlation(bath, t)) > b.envelope(t) * (1.0 + 1e-12)) return false;
    }
    return true;
}

DecayShift decay_and_shift(const BathSpec& bath, cplx coupling, double alpha) {
    const double weight = std::norm(coupling);
    DecayShift out;
    if (weight == 0.0) return out;
    out.beta = std::sqrt(kPi / 2.0) * weight * fourier_hat(bath, alpha);
    out.lamb_shift = weight * half_line_transform(bath, alpha, BathSpec::kInfinity).imag();
    out.well_coupled = out.beta > 0.0;
    return out;
}

TestObservable TestObservable::constant(cplx c) {
    std::ostringstream name;
    name << "constant(" << c.real() << (c.imag() != 0.0 ? "+i" + std::to_string(c.imag()) : "") << ")";
    return {name.str(), [c](double) { return c; }};
}

TestObservable TestObservable::power(double p) {
    std::ostringstream name;
    name << "omega^" << p;
    return {name.str(), [p](double w) { return cplx(std::pow(w, p), 0.0); }};
}

cplx weighted_correlation(const BathSpec& bath, const TestObservable& obs, double t) {
    const double omega_max = effective_support(bath);
    const auto integrand = [&](double w) { return obs.weight(w) * bath.density(w) * std::polar(1.0, -w * t); };
    double width = std::min(0.5, omega_max / 16.0);
    if (t != 0.0) width = std::min(width, kPi / (4.0 * std::abs(t)));
    std::size_t panels = panels_for(omega_max, width);
    cplx coarse = quad::integrate_panels(integrand, 0.0, omega_max, panels, kPanelOrder);
    double err = 0.0;
    for (int k = 0; k < kMaxDoublings; ++k) {
        panels *= 2;
        const cplx fine = quad::integrate_panels(integrand, 0.0, omega_max, panels, kPanelOrder);
        err = std::abs(fine - coarse);
        coarse = fine;
        if (err <= kQuadratureTolerance * std::max(1.0, std::abs(fine))) return fine;
    }
    throw QuadratureError("weighted correlation quadrature did not converge at t=" + std::to_string(t), err);
}

cplx weighted_hat(const BathSpec& bath, const TestObservable& obs, double alpha) {
    const double rho = bath.density(alpha);
    if (rho == 0.0) return {};
    return kSqrt2Pi * obs.weight(alpha) * rho;
}

BathSpec builtin_bath(const std::string& name) {
    if (name == "reference") return BathSpec::reference();
    throw ConfigError("unknown builtin bath '" + name + "'");
}

}  // namespace aww
