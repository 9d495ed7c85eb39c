#pragma once

#include <stdexcept>
#include <string>

namespace sldiff {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The sine-like phase left (0, pi), or a log-sin / cotangent pole was hit.
struct DomainError : Error {
    using Error::Error;
};

/// An argument violated a precondition (NaN, non-positive state, bad level, ...).
struct InvalidInput : Error {
    using Error::Error;
};

/// An operation requiring uniform sample spacing was called on non-uniform data.
struct SpacingError : Error {
    using Error::Error;
};

/// The score function has no sign change in any scanned sub-bracket.
struct NoRootError : Error {
    using Error::Error;
};

/// The profile variance collapsed to zero; the transition density is undefined.
struct DegenerateError : Error {
    using Error::Error;
};

/// Paired inputs have different lengths.
struct LengthMismatch : Error {
    using Error::Error;
};

/// An input file could not be parsed; message names the offending line.
struct ParseError : Error {
    using Error::Error;
};

/// Parsed data violates a series invariant (order, positivity, size).
struct ValidationError : Error {
    using Error::Error;
};

/// An iterative optimizer exhausted its round budget without converging.
struct NoConvergenceError : Error {
    using Error::Error;
};

}  // namespace sldiff
