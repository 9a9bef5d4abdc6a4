#pragma once

#include <stdexcept>
#include <string>

namespace sasaki {

// Error taxonomy. Everything derives from Error so callers can catch the
// whole family; the concrete types encode *why* a computation refused.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input point outside a map's declared domain.
struct DomainError : Error {
    using Error::Error;
};

// Non-finite intermediate, singular matrix, incompatible jet dimensions.
struct NumericError : Error {
    using Error::Error;
};

// Linear dependence / rank deficiency where full rank is required.
struct RankError : Error {
    using Error::Error;
};

// Operator not self-adjoint with respect to the supplied metric.
struct SymmetryError : Error {
    using Error::Error;
};

// Bad user-facing configuration: manifests, flags, constructor arguments.
struct ConfigError : Error {
    using Error::Error;
};

// A model failed its own construction-time validation.
struct ModelError : Error {
    using Error::Error;
};

// Geometric consistency violated (e.g. a vector that must be tangent is not).
struct StructureError : Error {
    using Error::Error;
};

} // namespace sasaki
