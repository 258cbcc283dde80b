#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chp {

enum class ErrorCode {
    NotMultipleOfSix,
    NoSolution,
    PreconditionViolated,
    InconsistentDna,
    CapExceeded,
    NoIntersection,
    Coincident,
    ConstructionFailed,
    CoincidentPoints,
    NonFinite,
    NoPath,
    AmbiguousStart,
    ShellCountMismatch,
    SchemaMismatch,
    ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotMultipleOfSix: return "NotMultipleOfSix";
        case ErrorCode::NoSolution: return "NoSolution";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::InconsistentDna: return "InconsistentDna";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::NoIntersection: return "NoIntersection";
        case ErrorCode::Coincident: return "Coincident";
        case ErrorCode::ConstructionFailed: return "ConstructionFailed";
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NoPath: return "NoPath";
        case ErrorCode::AmbiguousStart: return "AmbiguousStart";
        case ErrorCode::ShellCountMismatch: return "ShellCountMismatch";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace chp
