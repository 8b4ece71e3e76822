#include "steklov/error.hpp"

namespace steklov {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDegenerateCurve: return "degenerate-curve";
    case ErrorCode::kInvalidCurve: return "invalid-curve";
    case ErrorCode::kOutOfTube: return "out-of-tube";
    case ErrorCode::kFootPointFailure: return "foot-point-failure";
    case ErrorCode::kCurvatureSingularity: return "curvature-singularity";
    case ErrorCode::kConditioning: return "conditioning";
    case ErrorCode::kSolverFailure: return "solver-failure";
    case ErrorCode::kOutOfDomain: return "out-of-domain";
    case ErrorCode::kRegionViolation: return "region-violation";
    case ErrorCode::kInvalidCenter: return "invalid-center";
    case ErrorCode::kUndersampled: return "undersampled";
    case ErrorCode::kDegenerateCenter: return "degenerate-center";
    case ErrorCode::kNetConstruction: return "net-construction";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFootPointFailure:
    case ErrorCode::kCurvatureSingularity:
    case ErrorCode::kConditioning:
    case ErrorCode::kSolverFailure:
    case ErrorCode::kDegenerateCenter:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace steklov
