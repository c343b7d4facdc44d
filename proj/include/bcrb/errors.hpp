#pragma once

#include <stdexcept>
#include <string>

namespace bcrb {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature box misses required mass, absolute continuity fails, or a
// convolution grid would overflow its configured extent.
struct IntegrationDomainError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Request exceeds the desk-scale capability guards (dimension, node count).
struct CapabilityError : Error {
    using Error::Error;
};

// A declared invariant failed (non-normalized density, KP > 1, ...).
struct InvariantViolation : Error {
    using Error::Error;
};

// Fixed-point iteration failed to converge or lost its contraction property.
struct IterationError : Error {
    using Error::Error;
};

// Numerical evaluation impossible (vanishing density under finite differences).
struct EvaluationError : Error {
    using Error::Error;
};

struct ConfigParseError : Error {
    ConfigParseError(const std::string& msg, int line, int col)
        : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
          line(line),
          col(col) {}
    int line = 0;
    int col = 0;
};

struct ConfigValidationError : Error {
    using Error::Error;
};

}  // namespace bcrb
