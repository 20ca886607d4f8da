// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trom {

enum class ErrorCode {
  InvalidDimension,
  InvalidMode,
  InvalidInput,
  InvalidRank,
  InvalidRanks,
  InvalidTolerance,
  InvalidGrid,
  DimensionMismatch,
  NotOnGrid,
  OutOfDomain,
  StencilTooLarge,
  RankBudgetExceeded,
  OverflowRisk,
  ZeroDenominator,
  FormatError,
  IoError,
  DegenerateNeighborhood,
  AlsDiverged,
  SingularStep,
};

[[nodiscard]] std::string_view error_code_name(ErrorCode code) noexcept;

/// Numerical failures (as opposed to bad input) map to CLI exit code 3.
[[nodiscard]] bool is_numerical_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

}  // namespace trom
