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

#include "sqa/similarity.hpp"

#include <cmath>
#include <limits>

namespace sqa {

CEValue CEValue::finite(double nats) { return CEValue(nats, true); }

CEValue CEValue::infinite() {
  return CEValue(std::numeric_limits<double>::infinity(), false);
}

double CEValue::nats() const { return nats_; }

CEValue cross_entropy(const UnigramModel& px, const UnigramModel& py) {
  if (!same_vocabulary(*px.vocab(), *py.vocab())) {
    throw VocabularyMismatchError("cross_entropy");
  }
  double sum = 0.0;
  const auto p = px.probs();
  const auto q = py.probs();
  for (size_t t = 0; t < p.size(); ++t) {
    if (p[t] == 0.0) continue;
    if (q[t] == 0.0) return CEValue::infinite();
    sum -= p[t] * std::log(q[t]);
  }
  return CEValue::finite(sum);
}

double entropy(const UnigramModel& p) { return cross_entropy(p, p).nats(); }

double shift_constant(std::span<const UnigramModel> base_docs,
                      std::span<const std::string> labels) {
  if (base_docs.empty()) {
    throw ValidationError("shift_constant: at least one base document required");
  }
  auto name = [&](size_t j) {
    return j < labels.size() ? labels[j] : "doc[" + std::to_string(j) + "]";
  };
  double best = 0.0;
  for (size_t j1 = 0; j1 < base_docs.size(); ++j1) {
    for (size_t j2 = j1; j2 < base_docs.size(); ++j2) {
      CEValue forward = cross_entropy(base_docs[j1], base_docs[j2]);
      if (!forward.is_finite()) throw InfiniteCrossEntropyError(name(j1), name(j2));
      CEValue backward = cross_entropy(base_docs[j2], base_docs[j1]);
      if (!backward.is_finite()) throw InfiniteCrossEntropyError(name(j2), name(j1));
      best = std::max(best, forward.nats() + backward.nats());
    }
  }
  return best;
}

double similarity(const UnigramModel& x, const UnigramModel& y,
                  const SimilarityContext& ctx) {
  CEValue forward = cross_entropy(x, y);
  if (!forward.is_finite()) throw InfiniteCrossEntropyError("x", "y");
  CEValue backward = cross_entropy(y, x);
  if (!backward.is_finite()) throw InfiniteCrossEntropyError("y", "x");
  // Summing the CE terms first keeps S(x, y) bitwise equal to S(y, x).
  return 2.0 * ctx.shift_a - (forward.nats() + backward.nats());
}

double advertiser_value(const UnigramModel& sponsored, const UnigramModel& ad,
                        const SimilarityContext& ctx) {
  return similarity(sponsored, ad, ctx);
}

double user_utility(const UnigramModel& sponsored, const UnigramModel& organic,
                    const SimilarityContext& ctx) {
  return similarity(sponsored, organic, ctx);
}

}  // namespace sqa
