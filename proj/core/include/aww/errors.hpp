// errors.hpp: exception types raised by the numerical modules.
//
// Every error derives from aww::Error. ConfigError maps to CLI exit code 2,
// everything else to exit code 1.

#pragma once

#include <stdexcept>
#include <string>

namespace aww {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Carries the error estimate that was actually reached.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double achieved)
        : Error(what + " (achieved " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    [[nodiscard]] double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DiscretizationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegratorError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FrameSmoothnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ContourError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class GapViolation : public Error {
public:
    GapViolation(double time, double gap)
        : Error("spectral gap " + std::to_string(gap) + " below minimum at t=" + std::to_string(time)),
          time_(time), gap_(gap) {}
    [[nodiscard]] double time() const noexcept { return time_; }
    [[nodiscard]] double gap() const noexcept { return gap_; }

private:
    double time_;
    double gap_;
};

class MatchingError : public Error {
public:
    using Error::Error;
};

class WellCoupledness : public Error {
public:
    using Error::Error;
};

}  // namespace aww
