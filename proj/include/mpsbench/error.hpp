#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpsbench {

enum class ErrorCode {
    InvalidArgument,
    OverflowExponent,
    IncommensurateTones,
    NonPeriodicSteadyState,
    BadRecordLength,
    OffBinTarget,
    ZeroReference,
    PeriodMismatch,
    DegenerateLoop,
    NoZeroCrossing,
    ZeroMoles,
    NoResonance,
    UnknownProtocol,
    UnknownParticle,
    UnitError,
    ParseError,
    IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OverflowExponent: return "OverflowExponent";
    case ErrorCode::IncommensurateTones: return "IncommensurateTones";
    case ErrorCode::NonPeriodicSteadyState: return "NonPeriodicSteadyState";
    case ErrorCode::BadRecordLength: return "BadRecordLength";
    case ErrorCode::OffBinTarget: return "OffBinTarget";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::DegenerateLoop: return "DegenerateLoop";
    case ErrorCode::NoZeroCrossing: return "NoZeroCrossing";
    case ErrorCode::ZeroMoles: return "ZeroMoles";
    case ErrorCode::NoResonance: return "NoResonance";
    case ErrorCode::UnknownProtocol: return "UnknownProtocol";
    case ErrorCode::UnknownParticle: return "UnknownParticle";
    case ErrorCode::UnitError: return "UnitError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI's JSON error output) can dispatch without parsing text.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

inline void require(bool condition, const std::string& message) {
    if (!condition) fail(ErrorCode::InvalidArgument, message);
}

} // namespace mpsbench
