#include "kfgm/errors.hpp"

namespace kfgm {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::NotMajoranaCompatible: return "NotMajoranaCompatible";
        case ErrorCode::WrongBranch: return "WrongBranch";
        case ErrorCode::SingularClosure: return "SingularClosure";
        case ErrorCode::ClosureNotSelfAdjoint: return "ClosureNotSelfAdjoint";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::InvalidMode: return "InvalidMode";
        case ErrorCode::SingularPropagator: return "SingularPropagator";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

}  // namespace kfgm
