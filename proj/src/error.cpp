#include "msr/error.hpp"

namespace msr {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NotEnoughElements: return "NotEnoughElements";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DuplicateGenerators: return "DuplicateGenerators";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DegenerateConstants: return "DegenerateConstants";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateNodes: return "DuplicateNodes";
    case ErrorCode::InconsistentContents: return "InconsistentContents";
    case ErrorCode::UnsupportedPattern: return "UnsupportedPattern";
    case ErrorCode::MissingMessage: return "MissingMessage";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::NonsingularityFailure: return "NonsingularityFailure";
    case ErrorCode::InvalidRegime: return "InvalidRegime";
    case ErrorCode::NotEnoughLiveNodes: return "NotEnoughLiveNodes";
    case ErrorCode::AlreadyFailed: return "AlreadyFailed";
    case ErrorCode::TooManyFailures: return "TooManyFailures";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Format: return "Format";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace msr
