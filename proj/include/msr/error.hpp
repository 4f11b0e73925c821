#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msr {

enum class ErrorCode {
    InvalidArgument,
    DivisionByZero,
    FieldMismatch,
    NotEnoughElements,
    DimensionMismatch,
    SingularMatrix,
    DuplicateGenerators,
    TooLarge,
    DegenerateConstants,
    GenerationExhausted,
    IndexOutOfRange,
    DuplicateNodes,
    InconsistentContents,
    UnsupportedPattern,
    MissingMessage,
    SolveFailure,
    NonsingularityFailure,
    InvalidRegime,
    NotEnoughLiveNodes,
    AlreadyFailed,
    TooManyFailures,
    VerificationFailure,
    Io,
    Format,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

} // namespace msr
