#pragma once

#include <stdexcept>
#include <string>

namespace qhlat {

enum class ErrorCode {
    InvalidArgument,
    WindowMismatch,
    ScalarKindMismatch,
    SpectralSingularity,
    SingularMatrix,
    NotPositiveDefinite,
    HermiticityViolation,
    ParseError,
};

/// Domain error carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace qhlat
