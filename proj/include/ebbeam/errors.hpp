#pragma once

#include <stdexcept>
#include <string>

namespace ebbeam {

// Domain errors. All recoverable failures use distinct types so callers
// (and the CLI's exit-code mapping) can tell configuration mistakes from
// numerical breakdowns.

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundaryConstraintViolated : DomainError {
    using DomainError::DomainError;
};
struct NonPositiveCoefficient : DomainError {
    using DomainError::DomainError;
};
struct SingularMass : DomainError {
    using DomainError::DomainError;
};
struct ResolutionExceeded : DomainError {
    using DomainError::DomainError;
};
struct EigenSolverFailure : DomainError {
    using DomainError::DomainError;
};
struct InsufficientSmoothness : DomainError {
    using DomainError::DomainError;
};
struct IndexOutOfRange : DomainError {
    using DomainError::DomainError;
};
struct NonFiniteEvaluation : DomainError {
    using DomainError::DomainError;
};
struct NewtonDiverged : DomainError {
    using DomainError::DomainError;
};
struct DegenerateLinearization : DomainError {
    using DomainError::DomainError;
};
struct SingularOperator : DomainError {
    using DomainError::DomainError;
};
struct NeumannDiverged : DomainError {
    using DomainError::DomainError;
};
struct ContractionFailed : DomainError {
    using DomainError::DomainError;
};
struct UncertifiedParameters : DomainError {
    using DomainError::DomainError;
};
struct WindowUnderflow : DomainError {
    using DomainError::DomainError;
};
struct ConfigError : DomainError {
    using DomainError::DomainError;
};

}  // namespace ebbeam
