#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shapetest {

// Base class for all library errors. The CLI maps subclasses onto its
// exit-code taxonomy: parse errors -> 2, focal points -> 3, numerical
// breakdowns -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- numerical errors ------------------------------------------------------

struct NonConvergenceError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

struct SingularCovarianceError : Error {
    using Error::Error;
};

struct SingularAnticovarianceError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

// Raised when a projection onto the embedded manifold is not unique:
// zero ambient vector on the sphere, or an eigenvalue tie at the relevant
// end of the spectrum in the Hermitian case.
struct FocalPointError : Error {
    using Error::Error;
};

// --- contract violations ----------------------------------------------------

struct DescriptorMismatchError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct NotNormalizedError : Error {
    using Error::Error;
};

struct NotOnManifoldError : Error {
    using Error::Error;
};

struct DegenerateKAdError : Error {
    using Error::Error;
};

struct UnsupportedDescriptorError : Error {
    using Error::Error;
};

// --- ingestion errors -------------------------------------------------------

struct ParseError : Error {
    ParseError(const std::string& message, std::size_t line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

struct InconsistentKError : Error {
    using Error::Error;
};

struct EmptyFileError : Error {
    using Error::Error;
};

}  // namespace shapetest
