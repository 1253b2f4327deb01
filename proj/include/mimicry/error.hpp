#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mimicry {

enum class ErrorCode {
  kInvalidParameter,
  kDegenerateVector,
  kIndex,
  kInsufficientData,
  kInvalidDepth,
  kTracking,
  kDepthGap,
  kHallucination,
  kNoObstacle,
  kSchemaViolation,
  kAdapterUnavailable,
  kRemoteError,
  kGrounding,
  kPlanCycle,
  kNoGrasp,
  kGraspFailure,
  kValidation,
  kParse,
  kIo,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kDegenerateVector: return "degenerate-vector";
    case ErrorCode::kIndex: return "index";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kInvalidDepth: return "invalid-depth";
    case ErrorCode::kTracking: return "tracking";
    case ErrorCode::kDepthGap: return "depth-gap";
    case ErrorCode::kHallucination: return "hallucination";
    case ErrorCode::kNoObstacle: return "no-obstacle";
    case ErrorCode::kSchemaViolation: return "schema-violation";
    case ErrorCode::kAdapterUnavailable: return "adapter-unavailable";
    case ErrorCode::kRemoteError: return "remote-error";
    case ErrorCode::kGrounding: return "grounding";
    case ErrorCode::kPlanCycle: return "plan-cycle";
    case ErrorCode::kNoGrasp: return "no-grasp";
    case ErrorCode::kGraspFailure: return "grasp-failure";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

/// Single exception type for the library. `payload()` carries the raw body for
/// schema violations and the HTTP status text for remote errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::string payload = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        payload_(std::move(payload)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& payload() const noexcept { return payload_; }

 private:
  ErrorCode code_;
  std::string payload_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace mimicry
