#pragma once

#include <stdexcept>
#include <string>

namespace uqr {

/// Base of every exception raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A point outside the domain of a map (e.g. |x| >= 1 for ball automorphisms).
struct DomainError : Error {
    using Error::Error;
};

/// Inversion requested at a value the map omits.
struct OmittedValueError : Error {
    using Error::Error;
};

/// Beam height beyond the representable exponential range.
struct RangeError : Error {
    using Error::Error;
};

struct ArgumentError : Error {
    using Error::Error;
};

/// Preimage enumeration collapsed two candidates: target is close to a critical value.
struct DegenerateInputError : Error {
    using Error::Error;
};

/// Linearization requested at a point with nontrivial stabilizer.
struct BranchPointError : Error {
    using Error::Error;
};

struct NotFixedPointError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

/// Invalid scene configuration or command-line usage.
struct ConfigError : ArgumentError {
    using ArgumentError::ArgumentError;
};

/// A file could not be read or written.
struct IoError : Error {
    using Error::Error;
};

} // namespace uqr
