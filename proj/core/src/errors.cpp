#include "tvaraug/errors.hpp"

namespace tvaraug {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Io: return "Io";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::DuplicateColumn: return "DuplicateColumn";
        case ErrorCode::NonNumericValue: return "NonNumericValue";
        case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
        case ErrorCode::EmptyUnit: return "EmptyUnit";
        case ErrorCode::IrregularSampling: return "IrregularSampling";
        case ErrorCode::DegenerateLength: return "DegenerateLength";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::NegativeRadicand: return "NegativeRadicand";
        case ErrorCode::R1Violation: return "R1Violation";
        case ErrorCode::NonFiniteStats: return "NonFiniteStats";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
        case ErrorCode::CorruptModel: return "CorruptModel";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace tvaraug
