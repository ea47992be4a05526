#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrabi {

enum class ErrorCode {
    InvalidParam,
    TruncationTooSmall,
    PhaseMismatch,
    DimMismatch,
    UnknownLabel,
    SymmetryBroken,
    NotHermitian,
    ConvergenceFailure,
    NotConverged,
    ConditionsViolated,
    InvalidState,
    TooFewPoints,
    TooFewFeatures,
    ConfigError,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::PhaseMismatch: return "PhaseMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::SymmetryBroken: return "SymmetryBroken";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ConditionsViolated: return "ConditionsViolated";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TooFewFeatures: return "TooFewFeatures";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Single exception type for the library; the code says which contract was broken.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace qrabi
