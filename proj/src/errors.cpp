#include "tetra/errors.hpp"

namespace tetra {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BaseOutOfRange: return "BaseOutOfRange";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::BasinEscape: return "BasinEscape";
        case ErrorCode::DepthInsufficient: return "DepthInsufficient";
        case ErrorCode::OverflowEscape: return "OverflowEscape";
        case ErrorCode::AtFixedPoint: return "AtFixedPoint";
        case ErrorCode::BranchCollapse: return "BranchCollapse";
        case ErrorCode::OutOfStrip: return "OutOfStrip";
        case ErrorCode::OutsideDomain: return "OutsideDomain";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::DomainClipped: return "DomainClipped";
        case ErrorCode::BranchViolation: return "BranchViolation";
        case ErrorCode::EvaluationFailure: return "EvaluationFailure";
        case ErrorCode::MissingTable: return "MissingTable";
        case ErrorCode::InvalidTable: return "InvalidTable";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int error_exit_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::NoConvergence:
        case ErrorCode::BasinEscape:
        case ErrorCode::DepthInsufficient:
        case ErrorCode::OverflowEscape:
        case ErrorCode::BranchCollapse:
        case ErrorCode::Overflow:
        case ErrorCode::EvaluationFailure:
            return 3;
        default:
            return 2;
    }
}

}  // namespace tetra
