#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steklov {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateCurve,
  kInvalidCurve,
  kOutOfTube,
  kFootPointFailure,
  kCurvatureSingularity,
  kConditioning,
  kSolverFailure,
  kOutOfDomain,
  kRegionViolation,
  kInvalidCenter,
  kUndersampled,
  kDegenerateCenter,
  kNetConstruction,
  kPrecondition,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Whether the failure is numerical (as opposed to bad input or usage).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace steklov
