// Copyright 2026 The robust_ot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef ROBUST_OT_ERROR_HPP_
#define ROBUST_OT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace robust_ot {

enum class ErrorKind {
  kEmptyInput,
  kNegativeMass,
  kMassNotNormalized,
  kDimensionMismatch,
  kLengthMismatch,
  kNormalizationViolated,
  kSolverStall,
  kNonUniformInput,
  kInstanceTooLarge,
  kDomainError,
  kTooFewPoints,
  kParseError,
  kIoError,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every validation or solver failure surfaces as this exception. Soft
// failures (non-convergence, stalls that still produce a usable iterate) are
// reported through flags on the result types instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace robust_ot

#endif  // ROBUST_OT_ERROR_HPP_
