#pragma once

#include <stdexcept>
#include <string>

namespace abcc {

enum class ErrorCode {
    CapExceeded,
    BadK,
    BadParams,
    DomainMismatch,
    SizeMismatch,
    BadP,
    NotMonotonic,
    NotNormalized,
    NoWitness,
    DeltaSearchFailed,
    PreconditionFailed,
    NotAccurate,
    GenerationFailed,
    Parse,
    InvalidMetric,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for every recoverable library failure; the code
/// selects the CLI exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace abcc
