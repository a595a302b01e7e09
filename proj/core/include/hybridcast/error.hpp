#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hybridcast {

enum class ErrorCode {
    MalformedRow,
    NonPositivePrice,
    DuplicateDate,
    EmptyFile,
    TooShort,
    NonConvergent,
    MisalignedForecast,
    NonFiniteLoss,
    DimensionMismatch,
    InsufficientSpan,
    AllCandidatesFailed,
    MisalignedSeries,
    LengthMismatch,
    InvalidArgument,
    Config,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code so
// callers (the experiment runner in particular) can isolate per-method errors.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hybridcast
