// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "couponalloc/error.h"

namespace couponalloc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateItemId: return "DuplicateItemId";
    case ErrorCode::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::kInconsistentFeatures: return "InconsistentFeatures";
    case ErrorCode::kEmptyArm: return "EmptyArm";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInsufficientEligibleItems:
      return "InsufficientEligibleItems";
    case ErrorCode::kZeroBaseRate: return "ZeroBaseRate";
    case ErrorCode::kInfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::kBruteForceTooLarge: return "BruteForceTooLarge";
    case ErrorCode::kMissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kPopulationMismatch: return "PopulationMismatch";
    case ErrorCode::kEmptyCell: return "EmptyCell";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string JoinViolations(
    const std::vector<ValidationError::Violation>& violations) {
  std::string out = std::to_string(violations.size()) + " violation(s)";
  for (const auto& v : violations) {
    out += "; ";
    out += ErrorCodeName(v.code);
    out += " ";
    out += v.detail;
  }
  return out;
}

ErrorCode FirstCode(const std::vector<ValidationError::Violation>& violations) {
  return violations.empty() ? ErrorCode::kInvalidConfig : violations[0].code;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(FirstCode(violations), JoinViolations(violations)),
      violations_(std::move(violations)) {}

}  // namespace couponalloc
