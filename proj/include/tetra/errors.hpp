#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tetra {

enum class ErrorCode {
    BaseOutOfRange,
    NoConvergence,
    BasinEscape,
    DepthInsufficient,
    OverflowEscape,
    AtFixedPoint,
    BranchCollapse,
    OutOfStrip,
    OutsideDomain,
    Overflow,
    DomainClipped,
    BranchViolation,
    EvaluationFailure,
    MissingTable,
    InvalidTable,
    InvalidArgument,
    IoError,
};

/// Stable identifier used in machine-readable error output.
std::string_view error_code_name(ErrorCode code);

/// CLI exit status class: 2 for usage/domain errors, 3 for numerical failures.
int error_exit_status(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when an iteration budget is exhausted; carries the last update norm.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& message, double final_update_norm)
        : Error(ErrorCode::NoConvergence, message), final_update_norm_(final_update_norm) {}

    double final_update_norm() const noexcept { return final_update_norm_; }

private:
    double final_update_norm_;
};

}  // namespace tetra
