#include "abcc/errors.hpp"

namespace abcc {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::BadK: return "BadK";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::BadP: return "BadP";
        case ErrorCode::NotMonotonic: return "NotMonotonic";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NoWitness: return "NoWitness";
        case ErrorCode::DeltaSearchFailed: return "DeltaSearchFailed";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::NotAccurate: return "NotAccurate";
        case ErrorCode::GenerationFailed: return "GenerationFailed";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::InvalidMetric: return "InvalidMetric";
    }
    return "Unknown";
}

}  // namespace abcc
