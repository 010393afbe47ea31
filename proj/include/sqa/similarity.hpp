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

#include <span>
#include <string>

#include "sqa/text_lm.hpp"

namespace sqa {

/// Cross entropy in nats: finite and nonnegative over shared full support,
/// +infinity exactly when the left model has mass where the right has none.
class CEValue {
 public:
  static CEValue finite(double nats);
  static CEValue infinite();

  bool is_finite() const { return finite_; }
  /// Finite value in nats; +inf when not finite.
  double nats() const;

 private:
  CEValue(double nats, bool finite) : nats_(nats), finite_(finite) {}
  double nats_;
  bool finite_;
};

/// Scopes all similarity calls of one scenario: the shift constant A taken
/// over the scenario's base documents, and the smoothing that produced the
/// models. Logs are natural throughout.
struct SimilarityContext {
  double shift_a = 0.0;
  SmoothingConfig smoothing{};
};

/// CE(px||py) = -sum_t px(t) * ln py(t), with 0 * ln 0 = 0.
CEValue cross_entropy(const UnigramModel& px, const UnigramModel& py);

/// CE(p||p), the Shannon entropy of p in nats.
double entropy(const UnigramModel& p);

/// A = max over ordered pairs (j1, j2), self-pairs included, of
/// CE(j1||j2) + CE(j2||j1). `labels` (optional, parallel to `base_docs`)
/// names the offending pair when a cross entropy diverges.
double shift_constant(std::span<const UnigramModel> base_docs,
                      std::span<const std::string> labels = {});

/// S(x, y) = 2A - CE(x||y) - CE(y||x). Symmetric; nonnegative whenever both
/// arguments are convex combinations of the base documents behind A.
double similarity(const UnigramModel& x, const UnigramModel& y,
                  const SimilarityContext& ctx);

/// The advertiser's value of showing `sponsored` instead of her ad.
double advertiser_value(const UnigramModel& sponsored, const UnigramModel& ad,
                        const SimilarityContext& ctx);

/// The user's utility of seeing `sponsored` instead of the organic answer.
double user_utility(const UnigramModel& sponsored, const UnigramModel& organic,
                    const SimilarityContext& ctx);

}  // namespace sqa
