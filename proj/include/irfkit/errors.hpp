#ifndef IRFKIT_ERRORS_HPP
#define IRFKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace irfkit {

/// Base class for all irfkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed cell content while reading data (row/column named in message).
struct ParseError : Error {
    using Error::Error;
};

/// Structurally invalid input (duplicate keys, misaligned panels, ...).
struct StructuralError : Error {
    using Error::Error;
};

/// Missing values encountered under NaPolicy::reject.
struct IngestionError : Error {
    using Error::Error;
};

/// Too few usable rows for the requested estimation.
struct InsufficientSampleError : Error {
    using Error::Error;
};

/// Rank-deficient design; message names the dependent columns.
struct SingularityError : Error {
    using Error::Error;
};

/// Invalid parameter value (bandwidth, lag order, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Invalid or unsupported simulation / estimator specification.
struct SpecError : Error {
    using Error::Error;
};

/// Series with zero sample variance where variation is required.
struct DegenerateSeriesError : Error {
    using Error::Error;
};

/// First-stage rank deficiency or vanishing instrument relevance.
struct WeakInstrumentError : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
struct DomainError : Error {
    using Error::Error;
};

}  // namespace irfkit

#endif
