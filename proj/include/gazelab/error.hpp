#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gazelab {

enum class ErrorCode {
    MalformedCoordinate,
    FileUnreadable,
    MissingColumn,
    EmptyAfterCleaning,
    DuplicateLevel,
    MixedStudents,
    TooFewSamples,
    EmptyAfterOutlierRemoval,
    NonMonotonicTimestamps,
    NoClassifiedSamples,
    EmptySession,
    IncompleteAnalysis,
    UnknownChart,
    InvalidParameter,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (CLI exit codes, HTTP status mapping) can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gazelab
