#ifndef GWAVE_ERRORS_HPP
#define GWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gwave {

enum class ErrorKind {
    MixedGrid,
    DimensionMismatch,
    AllZeroTail,
    GridInvalid,
    SyntaxError,
    UnknownSymbol,
    DomainError,
    NonScalar,
    BadMollifier,
    OutOfDomain,
    ResolutionExceeded,
    SupportClipped,
    EmptyRegion,
    PreconditionViolated,
    EmptyInput,
    ParseError,
    ValidationError,
    IoError,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::MixedGrid: return "MixedGrid";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::AllZeroTail: return "AllZeroTail";
        case ErrorKind::GridInvalid: return "GridInvalid";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownSymbol: return "UnknownSymbol";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::NonScalar: return "NonScalar";
        case ErrorKind::BadMollifier: return "BadMollifier";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::ResolutionExceeded: return "ResolutionExceeded";
        case ErrorKind::SupportClipped: return "SupportClipped";
        case ErrorKind::EmptyRegion: return "EmptyRegion";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Toolkit error; `where` carries a position (parser offset, scenario line,
/// grid index) when one is meaningful, -1 otherwise.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, long where = -1)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind), where_(where) {}

    ErrorKind kind() const noexcept { return kind_; }
    long where() const noexcept { return where_; }

private:
    ErrorKind kind_;
    long where_;
};

} // namespace gwave

#endif
