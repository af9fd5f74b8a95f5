#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctr {

enum class ErrorCode {
  Schema,
  UnknownKey,
  DuplicateNode,
  DanglingReference,
  SelfLoop,
  DuplicateEdge,
  CycleDetected,
  TargetHasOutEdge,
  EmptyTargets,
  EmptySpot,
  SpotIntersectsTargets,
  EntryIsTarget,
  PathLimitExceeded,
  NonPositiveRate,
  InvalidDistribution,
  ZeroConditioningMass,
  QuadratureNotConverged,
  BudgetMismatch,
  BudgetExceedsSpot,
  UndefinedAction,
  InvalidPath,
  DegenerateSample,
  ArgumentOutOfRange,
  PolicyIncomplete,
  InvalidConfig,
  Io,
  AssertionFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ctr
