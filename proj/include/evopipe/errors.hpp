#pragma once

#include <stdexcept>
#include <string>

namespace evopipe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// Dataset loading / splitting problems (CLI exit code 3).
struct DataError : Error {
    using Error::Error;
};

struct MissingValueError : DataError {
    MissingValueError(std::size_t row, std::size_t col)
        : DataError("missing value at row " + std::to_string(row) + ", column " + std::to_string(col)),
          row(row), col(col) {}
    std::size_t row, col;
};

struct NonNumericCellError : DataError {
    NonNumericCellError(std::size_t row, std::size_t col, const std::string& cell)
        : DataError("non-numeric cell \"" + cell + "\" at row " + std::to_string(row) +
                    ", column " + std::to_string(col)),
          row(row), col(col) {}
    std::size_t row, col;
};

struct UnknownColumnError : DataError {
    explicit UnknownColumnError(const std::string& what) : DataError(what) {}
};

struct StratificationImpossibleError : DataError {
    using DataError::DataError;
};

struct EmptyClassError : DataError {
    using DataError::DataError;
};

struct DegenerateDataError : DataError {
    using DataError::DataError;
};

struct EmptyCatalogError : Error {
    using Error::Error;
};

struct ShapeMismatchError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at byte " + std::to_string(position) + ")"), position(position) {}
    std::size_t position;
};

struct LengthMismatchError : Error {
    using Error::Error;
};

struct SingleClassError : Error {
    using Error::Error;
};

struct ArityMismatchError : Error {
    using Error::Error;
};

struct PointBeyondReferenceError : Error {
    using Error::Error;
};

struct BudgetTooSmallError : Error {
    using Error::Error;
};

}  // namespace evopipe
