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

#include "sqa/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sqa {

namespace {

// Local failure type so this translation unit stays independent of the main
// modules; it still reads as a domain/validation failure at the CLI surface.
[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument("oracle: " + message);
}

std::vector<double> normalize(const std::vector<double>& counts, double mu) {
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) fail("counts must be finite and nonnegative");
    total += c;
  }
  if (!(total > 0.0)) fail("document length must be positive");
  std::vector<double> probs(counts.size());
  for (size_t t = 0; t < counts.size(); ++t) {
    probs[t] = (1.0 - mu) * counts[t] / total + mu / static_cast<double>(counts.size());
  }
  return probs;
}

double ce(const std::vector<double>& p, const std::vector<double>& q) {
  double sum = 0.0;
  for (size_t t = 0; t < p.size(); ++t) {
    if (p[t] == 0.0) continue;
    if (q[t] == 0.0) fail("infinite cross entropy (disjoint supports, mu = 0)");
    sum -= p[t] * std::log(q[t]);
  }
  return sum;
}

}  // namespace

OracleOutcome oracle_winner_bruteforce(const OracleInput& input) {
  if (input.doc_counts.size() < 3) fail("organic counts plus at least two ads required");
  const size_t n = input.doc_counts.size() - 1;
  if (input.lambdas.size() != n) fail("one lambda per advertiser required");
  if (!input.bids.empty() && input.bids.size() != n) fail("one bid per advertiser required");
  if (!(input.mu >= 0.0 && input.mu < 1.0)) fail("mu must lie in [0, 1)");
  const size_t vocab = input.doc_counts.front().size();
  for (const auto& counts : input.doc_counts) {
    if (counts.size() != vocab) fail("all documents must cover the same token ids");
  }

  std::vector<std::vector<double>> base;
  base.reserve(n + 1);
  for (const auto& counts : input.doc_counts) base.push_back(normalize(counts, input.mu));
  const std::vector<double>& organic = base.front();

  std::vector<std::vector<double>> sponsored(n);
  for (size_t i = 0; i < n; ++i) {
    const double lambda = input.lambdas[i];
    if (!(lambda >= 0.0 && lambda <= 1.0)) fail("lambda must lie in [0, 1]");
    sponsored[i].resize(vocab);
    for (size_t t = 0; t < vocab; ++t) {
      sponsored[i][t] = lambda * organic[t] + (1.0 - lambda) * base[i + 1][t];
    }
  }

  OracleOutcome out;
  for (size_t j1 = 0; j1 < base.size(); ++j1) {
    for (size_t j2 = 0; j2 < base.size(); ++j2) {
      const double sum = ce(base[j1], base[j2]) + ce(base[j2], base[j1]);
      if (sum > out.shift_a) out.shift_a = sum;
    }
  }

  out.values.resize(n);
  out.user_utils.resize(n);
  out.platform_values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.values[i] = 2.0 * out.shift_a - ce(sponsored[i], base[i + 1]) -
                    ce(base[i + 1], sponsored[i]);
    out.user_utils[i] =
        2.0 * out.shift_a - ce(sponsored[i], organic) - ce(organic, sponsored[i]);
  }
  const std::vector<double>& bids = input.bids.empty() ? out.values : input.bids;
  for (size_t i = 0; i < n; ++i) out.platform_values[i] = out.user_utils[i] + bids[i];

  auto best_except = [&](int skip) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i) == skip) continue;
      if (out.platform_values[i] > best) best = out.platform_values[i];
    }
    int chosen = -1;
    for (size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i) == skip) continue;
      if (out.platform_values[i] >= best - 1e-12) {
        chosen = static_cast<int>(i);
        break;  // lowest index wins ties
      }
    }
    return chosen;
  };
  out.winner_index = best_except(-1);
  out.second_index = best_except(out.winner_index);
  out.payment = bids[static_cast<size_t>(out.second_index)] +
                out.user_utils[static_cast<size_t>(out.second_index)] -
                out.user_utils[static_cast<size_t>(out.winner_index)];
  return out;
}

}  // namespace sqa
