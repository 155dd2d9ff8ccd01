#pragma once

#include <stdexcept>
#include <string>

namespace hsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (non-finite vector,
/// mismatched grids, non-positive epsilon, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A grid does not resolve the object placed on it.
class ResolutionError : public Error {
public:
    ResolutionError(const std::string& what, int minimal_points = 0)
        : Error(what), minimal_points_(minimal_points) {}
    /// Smallest admissible points-per-axis, when one can be named (0 otherwise).
    int minimal_points() const noexcept { return minimal_points_; }

private:
    int minimal_points_;
};

/// Solver configuration violates an accuracy guard.
class ConfigurationError : public Error {
public:
    ConfigurationError(const std::string& what, double admissible_dt = 0.0)
        : Error(what), admissible_dt_(admissible_dt) {}
    double admissible_dt() const noexcept { return admissible_dt_; }

private:
    double admissible_dt_;
};

/// d <= m: the effective potential integral diverges.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Quadrature or iteration failed to reach its certified tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

class UnsupportedOrderError : public Error {
public:
    using Error::Error;
};

/// Violated operation precondition that is not a domain problem.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace hsim
