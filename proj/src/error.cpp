#include "ctr/error.hpp"

namespace ctr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::TargetHasOutEdge: return "TargetHasOutEdge";
    case ErrorCode::EmptyTargets: return "EmptyTargets";
    case ErrorCode::EmptySpot: return "EmptySpot";
    case ErrorCode::SpotIntersectsTargets: return "SpotIntersectsTargets";
    case ErrorCode::EntryIsTarget: return "EntryIsTarget";
    case ErrorCode::PathLimitExceeded: return "PathLimitExceeded";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::ZeroConditioningMass: return "ZeroConditioningMass";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::BudgetMismatch: return "BudgetMismatch";
    case ErrorCode::BudgetExceedsSpot: return "BudgetExceedsSpot";
    case ErrorCode::UndefinedAction: return "UndefinedAction";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::ArgumentOutOfRange: return "ArgumentOutOfRange";
    case ErrorCode::PolicyIncomplete: return "PolicyIncomplete";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
    case ErrorCode::AssertionFailed: return "AssertionFailed";
  }
  return "Unknown";
}

}  // namespace ctr
