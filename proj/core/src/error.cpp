// SPDX-License-Identifier: Apache-2.0
#include "trom/error.hpp"

namespace trom {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::InvalidMode: return "InvalidMode";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::InvalidRanks: return "InvalidRanks";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotOnGrid: return "NotOnGrid";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::StencilTooLarge: return "StencilTooLarge";
    case ErrorCode::RankBudgetExceeded: return "RankBudgetExceeded";
    case ErrorCode::OverflowRisk: return "OverflowRisk";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorCode::AlsDiverged: return "AlsDiverged";
    case ErrorCode::SingularStep: return "SingularStep";
  }
  return "Unknown";
}

bool is_numerical_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateNeighborhood:
    case ErrorCode::AlsDiverged:
    case ErrorCode::SingularStep:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::OverflowRisk:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace trom
