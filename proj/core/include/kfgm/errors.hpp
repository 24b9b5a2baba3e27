#pragma once
#include <stdexcept>
#include <string>

namespace kfgm {

enum class ErrorCode {
    InvalidState,
    InvalidParams,
    NotMajoranaCompatible,
    WrongBranch,
    SingularClosure,
    ClosureNotSelfAdjoint,
    NumericalFailure,
    InvalidMode,
    SingularPropagator,
    InsufficientData,
    ConfigError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kfgm
