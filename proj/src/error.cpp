#include "cgtc/error.hpp"

namespace cgtc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveDt: return "NonPositiveDt";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::Unreachable: return "Unreachable";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::FactorOutOfRange: return "FactorOutOfRange";
        case ErrorCode::InsideObstacle: return "InsideObstacle";
        case ErrorCode::StartInsideObstacle: return "StartInsideObstacle";
        case ErrorCode::DestinationInsideObstacle: return "DestinationInsideObstacle";
        case ErrorCode::ParallelCourses: return "ParallelCourses";
        case ErrorCode::NoForwardIntersection: return "NoForwardIntersection";
        case ErrorCode::NoFeasibleRadius: return "NoFeasibleRadius";
        case ErrorCode::NoGridPath: return "NoGridPath";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

}  // namespace cgtc
