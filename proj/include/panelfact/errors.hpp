#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace panelfact {

/// Shape or index violation (zero dimensions, mismatched operands, out-of-bounds regions).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed Matrix Market input.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class NumericalFailure {
    NotPositiveDefinite,
    SingularLeadingMinor,
    RankDeficient,
};

/// A decomposition could not proceed at a given (1-based) column.
class NumericalError : public std::runtime_error {
public:
    NumericalError(NumericalFailure kind, std::size_t column);

    NumericalFailure kind() const noexcept { return kind_; }
    std::size_t column() const noexcept { return column_; }

private:
    NumericalFailure kind_;
    std::size_t column_;
};

std::string to_string(NumericalFailure kind);

} // namespace panelfact
