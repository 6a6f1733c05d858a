#pragma once

#include <stdexcept>
#include <string>

namespace eos {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid value or violated precondition (bad depth, nonpositive x, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A coordinate product had the wrong sign for the requested operation.
struct SignError : DomainError {
    using DomainError::DomainError;
};

/// Two vectors that must share a depth do not.
struct DepthMismatchError : DomainError {
    using DomainError::DomainError;
};

/// An iterative solver failed to converge; carries the best estimate seen.
struct SolverError : Error {
    SolverError(const std::string& what, double best)
        : Error(what), best_estimate(best) {}
    double best_estimate;
};

/// A trajectory or scalar map left its admissible region.
struct DivergedError : Error {
    using Error::Error;
};

/// Bad experiment configuration; `field` names the offending option.
struct ConfigError : Error {
    ConfigError(const std::string& field_, const std::string& what)
        : Error("config error in '" + field_ + "': " + what), field(field_) {}
    std::string field;
};

}  // namespace eos
