// Copyright 2026 The sqa-sim Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sqa {

/// Malformed or out-of-range input: bad scenario fields, broken invariants,
/// invalid ids or flags. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message)
      : std::runtime_error(message) {}
};

/// Well-formed input on which the requested computation is undefined.
/// Maps to CLI exit code 3.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& message)
      : std::runtime_error(message) {}
};

/// The two operands live over different vocabularies.
class VocabularyMismatchError : public ValidationError {
 public:
  explicit VocabularyMismatchError(const std::string& where)
      : ValidationError(where + ": operands use different vocabularies") {}
};

/// CE(left||right) diverged: the left model has positive mass on a token the
/// right model assigns zero probability.
class InfiniteCrossEntropyError : public DomainError {
 public:
  InfiniteCrossEntropyError(std::string left, std::string right)
      : DomainError("cross entropy CE(" + left + "||" + right +
                    ") is infinite: the left model has positive mass on a "
                    "token the right model assigns zero probability; enable "
                    "smoothing (mu > 0) to make all supports full"),
        left_(std::move(left)),
        right_(std::move(right)) {}

  const std::string& left() const { return left_; }
  const std::string& right() const { return right_; }

 private:
  std::string left_;
  std::string right_;
};

}  // namespace sqa
