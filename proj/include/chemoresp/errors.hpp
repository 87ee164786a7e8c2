#pragma once

#include <stdexcept>
#include <string>

namespace chemoresp {

// Error categories map to CLI exit codes: ConfigError -> 2, DataError -> 3,
// DegenerateError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct DegenerateError : Error {
    using Error::Error;
};

// I/O and format errors
struct IoError : DataError {
    using DataError::DataError;
};
struct FormatError : DataError {
    using DataError::DataError;
};
struct UnsupportedDatatype : DataError {
    using DataError::DataError;
};
struct ShapeError : DataError {
    using DataError::DataError;
};
struct ModeError : DataError {
    using DataError::DataError;
};
struct SchemaError : DataError {
    using DataError::DataError;
};
struct ParseError : DataError {
    using DataError::DataError;
};
struct RangeError : DataError {
    using DataError::DataError;
};
struct DuplicateError : DataError {
    using DataError::DataError;
};
struct NotFoundError : DataError {
    using DataError::DataError;
};
struct MissingProbError : DataError {
    using DataError::DataError;
};

// Grid / segmentation errors
struct GridError : DataError {
    using DataError::DataError;
};
struct DisjointnessError : DataError {
    using DataError::DataError;
};
struct EmptyRoiError : DataError {
    using DataError::DataError;
};

// Degenerate-cohort errors
struct DegenerateLabelsError : DegenerateError {
    using DegenerateError::DegenerateError;
};
struct FoldDegenerateError : DegenerateError {
    using DegenerateError::DegenerateError;
};
struct CohortTooSmall : DegenerateError {
    using DegenerateError::DegenerateError;
};
struct BalanceError : DegenerateError {
    using DegenerateError::DegenerateError;
};
struct EmptyEvalError : DegenerateError {
    using DegenerateError::DegenerateError;
};

} // namespace chemoresp
