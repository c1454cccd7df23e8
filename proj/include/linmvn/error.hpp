#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linmvn {

enum class ErrorCode {
  InvalidProblem,
  NotSymmetric,
  NotPsd,
  SingularEqualityGram,
  DegenerateRegion,
  EmptyArcSet,
  CyclingGuardExceeded,
  DegenerateSamples,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPsd: return "NotPSD";
    case ErrorCode::SingularEqualityGram: return "SingularEqualityGram";
    case ErrorCode::DegenerateRegion: return "DegenerateRegion";
    case ErrorCode::EmptyArcSet: return "EmptyArcSet";
    case ErrorCode::CyclingGuardExceeded: return "CyclingGuardExceeded";
    case ErrorCode::DegenerateSamples: return "DegenerateSamples";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported through this type;
/// the code identifies the failure class, the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace linmvn
