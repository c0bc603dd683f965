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

#ifndef COUPONALLOC_ERROR_H_
#define COUPONALLOC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace couponalloc {

enum class ErrorCode {
  kDuplicateItemId,
  kProbabilityOutOfRange,
  kInconsistentFeatures,
  kEmptyArm,
  kDimensionMismatch,
  kInsufficientEligibleItems,
  kZeroBaseRate,
  kInfeasibleBudget,
  kBruteForceTooLarge,
  kMissingGroundTruth,
  kInvalidConfig,
  kPopulationMismatch,
  kEmptyCell,
  kEmptyGroup,
  kIoError,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by dataset validation. Lists every violation found, not just the
// first one.
class ValidationError : public Error {
 public:
  struct Violation {
    ErrorCode code;
    std::string detail;
  };

  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace couponalloc

#endif  // COUPONALLOC_ERROR_H_
