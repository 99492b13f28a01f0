#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tvaraug {

enum class ErrorCode {
    Io,
    MissingColumn,
    DuplicateColumn,
    NonNumericValue,
    DuplicateTimestamp,
    EmptyUnit,
    IrregularSampling,
    DegenerateLength,
    OutOfRange,
    InvalidOrder,
    DivisionByZero,
    NegativeRadicand,
    R1Violation,
    NonFiniteStats,
    InvalidParameter,
    SchemaVersionMismatch,
    CorruptModel,
    ShapeMismatch,
    LengthMismatch,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/**
 * @brief Library-wide exception carrying a machine-readable code.
 *
 * what() is prefixed with the code name, e.g. "NonNumericValue: row 4 ...".
 */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tvaraug
