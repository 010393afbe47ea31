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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sqa/errors.hpp"

namespace sqa {

/// Ordered set of distinct token strings with dense 0-based ids.
class Vocabulary {
 public:
  /// Returns the id of `token`, appending it if unseen.
  int add(std::string token);
  std::optional<int> find(std::string_view token) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

bool same_vocabulary(const Vocabulary& a, const Vocabulary& b);

/// Jelinek-Mercer mixing weight with the uniform background model;
/// mu = 0 disables smoothing (plain maximum likelihood).
struct SmoothingConfig {
  double mu = 0.0;
};

/// Relative emphasis on the organic answer when fusing it with an ad.
struct FusionWeight {
  double lambda = 0.5;
};

/// Bag of per-token counts over a vocabulary. Counts may be fractional so
/// that mean documents of a distribution are representable exactly.
class Document {
 public:
  /// `counts[i]` belongs to token id i. The vector may be shorter than the
  /// vocabulary (ids beyond it count 0), which happens when the vocabulary
  /// keeps growing while a corpus is ingested.
  Document(VocabularyPtr vocab, std::vector<double> counts);

  const VocabularyPtr& vocab() const { return vocab_; }
  std::span<const double> counts() const { return counts_; }
  double count(int token_id) const;
  double length() const { return length_; }

 private:
  VocabularyPtr vocab_;
  std::vector<double> counts_;
  double length_ = 0.0;
};

/// Multinomial distribution over a vocabulary.
class UnigramModel {
 public:
  UnigramModel(VocabularyPtr vocab, std::vector<double> probs);

  const VocabularyPtr& vocab() const { return vocab_; }
  std::span<const double> probs() const { return probs_; }
  double prob(int token_id) const { return probs_[static_cast<size_t>(token_id)]; }
  int vocab_size() const { return static_cast<int>(probs_.size()); }

 private:
  VocabularyPtr vocab_;
  std::vector<double> probs_;
};

/// Lowercases `text`, splits it on whitespace and counts the tokens into a
/// Document over a fresh vocabulary.
Document tokenize(std::string_view text);

/// Same, but unseen tokens are appended to `vocab`.
Document tokenize(std::string_view text, const std::shared_ptr<Vocabulary>& vocab);

/// probs[t] = (1 - mu) * counts[t] / length + mu / |V|.
UnigramModel induce_lm(const Document& doc, SmoothingConfig smoothing = {});

/// probs[t] = lambda * organic[t] + (1 - lambda) * ad[t].
UnigramModel mix_models(const UnigramModel& organic, const UnigramModel& ad,
                        FusionWeight weight);

/// The mean document of `model` at length n: counts[t] = n * probs[t].
Document mean_document(const UnigramModel& model, double n);

/// k i.i.d. draws from `model`; identical (model, k, seed) gives identical
/// output on every platform.
Document sample_document(const UnigramModel& model, std::int64_t k,
                         std::uint64_t seed);

/// A next-token distribution source: maps a generated prefix (token ids) to
/// a distribution over the vocabulary.
using NextTokenProvider = std::function<UnigramModel(std::span<const int>)>;

/// A provider that ignores the prefix and always returns `model`.
NextTokenProvider stateless_provider(UnigramModel model);

/// Pointwise convex combination of the providers' distributions at `prefix`.
UnigramModel next_token_mixture(std::span<const NextTokenProvider> sources,
                                std::span<const double> weights,
                                std::span<const int> prefix);

/// splitmix64 counter generator: tiny, splittable and bit-reproducible
/// across platforms, unlike the standard library distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double next_unit();
  /// Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound);
  /// An independent child stream.
  SplitMix64 split();

 private:
  std::uint64_t state_;
};

}  // namespace sqa
