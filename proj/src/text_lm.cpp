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

#include "sqa/text_lm.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace sqa {

namespace {

constexpr double kProbSumTolerance = 1e-12;

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace

int Vocabulary::add(std::string token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(tokens_.size());
  index_.emplace(token, id);
  tokens_.push_back(std::move(token));
  return id;
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(int id) const {
  require(id >= 0 && id < size(), "Vocabulary::token: id out of range");
  return tokens_[static_cast<size_t>(id)];
}

bool same_vocabulary(const Vocabulary& a, const Vocabulary& b) {
  return &a == &b || a.tokens() == b.tokens();
}

Document::Document(VocabularyPtr vocab, std::vector<double> counts)
    : vocab_(std::move(vocab)), counts_(std::move(counts)) {
  require(vocab_ != nullptr, "Document: null vocabulary");
  require(vocab_->size() >= 1, "Document: empty vocabulary");
  require(counts_.size() <= static_cast<size_t>(vocab_->size()),
          "Document: more counts than vocabulary entries");
  for (double c : counts_) {
    require(std::isfinite(c) && c >= 0.0, "Document: counts must be finite and nonnegative");
    length_ += c;
  }
  require(length_ > 0.0, "Document: at least one count must be positive");
}

double Document::count(int token_id) const {
  require(token_id >= 0 && token_id < vocab_->size(), "Document::count: id out of range");
  if (static_cast<size_t>(token_id) >= counts_.size()) return 0.0;
  return counts_[static_cast<size_t>(token_id)];
}

UnigramModel::UnigramModel(VocabularyPtr vocab, std::vector<double> probs)
    : vocab_(std::move(vocab)), probs_(std::move(probs)) {
  require(vocab_ != nullptr, "UnigramModel: null vocabulary");
  require(probs_.size() == static_cast<size_t>(vocab_->size()),
          "UnigramModel: probability vector must cover the vocabulary");
  double sum = 0.0;
  for (double& p : probs_) {
    require(std::isfinite(p) && p >= -kProbSumTolerance && p <= 1.0 + kProbSumTolerance,
            "UnigramModel: probabilities must lie in [0, 1]");
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    sum += p;
  }
  require(std::abs(sum - 1.0) <= kProbSumTolerance,
          "UnigramModel: probabilities must sum to 1");
}

namespace {

Document tokenize_into(std::string_view text, const std::shared_ptr<Vocabulary>& vocab) {
  std::unordered_map<int, double> counts;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    counts[vocab->add(token)] += 1.0;
    token.clear();
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  flush();
  if (counts.empty()) throw ValidationError("tokenize: text has no tokens");
  std::vector<double> dense(static_cast<size_t>(vocab->size()), 0.0);
  for (const auto& [id, c] : counts) dense[static_cast<size_t>(id)] = c;
  return Document(vocab, std::move(dense));
}

}  // namespace

Document tokenize(std::string_view text) {
  auto vocab = std::make_shared<Vocabulary>();
  return tokenize_into(text, vocab);
}

Document tokenize(std::string_view text, const std::shared_ptr<Vocabulary>& vocab) {
  require(vocab != nullptr, "tokenize: null vocabulary");
  return tokenize_into(text, vocab);
}

UnigramModel induce_lm(const Document& doc, SmoothingConfig smoothing) {
  require(smoothing.mu >= 0.0 && smoothing.mu < 1.0, "induce_lm: mu must lie in [0, 1)");
  if (doc.length() <= 0.0) throw ValidationError("induce_lm: zero-length document");
  const int vocab_size = doc.vocab()->size();
  const double background = smoothing.mu / static_cast<double>(vocab_size);
  std::vector<double> probs(static_cast<size_t>(vocab_size));
  for (int t = 0; t < vocab_size; ++t) {
    probs[static_cast<size_t>(t)] =
        (1.0 - smoothing.mu) * doc.count(t) / doc.length() + background;
  }
  return UnigramModel(doc.vocab(), std::move(probs));
}

UnigramModel mix_models(const UnigramModel& organic, const UnigramModel& ad,
                        FusionWeight weight) {
  if (!same_vocabulary(*organic.vocab(), *ad.vocab())) {
    throw VocabularyMismatchError("mix_models");
  }
  require(weight.lambda >= 0.0 && weight.lambda <= 1.0,
          "mix_models: lambda must lie in [0, 1]");
  const double lambda = weight.lambda;
  std::vector<double> probs(organic.probs().begin(), organic.probs().end());
  for (size_t t = 0; t < probs.size(); ++t) {
    probs[t] = lambda * probs[t] + (1.0 - lambda) * ad.probs()[t];
  }
  return UnigramModel(organic.vocab(), std::move(probs));
}

Document mean_document(const UnigramModel& model, double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("mean_document: n must be positive and finite");
  }
  std::vector<double> counts(model.probs().begin(), model.probs().end());
  for (double& c : counts) c *= n;
  return Document(model.vocab(), std::move(counts));
}

Document sample_document(const UnigramModel& model, std::int64_t k,
                         std::uint64_t seed) {
  require(k >= 1, "sample_document: k must be at least 1");
  SplitMix64 rng(seed);
  std::vector<double> counts(static_cast<size_t>(model.vocab_size()), 0.0);
  const auto probs = model.probs();
  for (std::int64_t draw = 0; draw < k; ++draw) {
    double u = rng.next_unit();
    double cumulative = 0.0;
    size_t chosen = probs.size() - 1;  // guards against cumulative < 1 rounding
    for (size_t t = 0; t < probs.size(); ++t) {
      cumulative += probs[t];
      if (u < cumulative) {
        chosen = t;
        break;
      }
    }
    counts[chosen] += 1.0;
  }
  return Document(model.vocab(), std::move(counts));
}

NextTokenProvider stateless_provider(UnigramModel model) {
  return [model = std::move(model)](std::span<const int>) { return model; };
}

UnigramModel next_token_mixture(std::span<const NextTokenProvider> sources,
                                std::span<const double> weights,
                                std::span<const int> prefix) {
  require(!sources.empty(), "next_token_mixture: no sources");
  require(sources.size() == weights.size(),
          "next_token_mixture: one weight per source required");
  double weight_sum = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, "next_token_mixture: weights must be nonnegative");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > kProbSumTolerance) {
    throw ValidationError("next_token_mixture: weights must sum to 1");
  }

  UnigramModel first = sources[0](prefix);
  std::vector<double> probs(static_cast<size_t>(first.vocab_size()), 0.0);
  for (size_t t = 0; t < probs.size(); ++t) probs[t] = weights[0] * first.prob(static_cast<int>(t));
  for (size_t s = 1; s < sources.size(); ++s) {
    UnigramModel dist = sources[s](prefix);
    if (!same_vocabulary(*dist.vocab(), *first.vocab())) {
      throw VocabularyMismatchError("next_token_mixture");
    }
    for (size_t t = 0; t < probs.size(); ++t) probs[t] += weights[s] * dist.prob(static_cast<int>(t));
  }
  return UnigramModel(first.vocab(), std::move(probs));
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
  require(bound > 0, "SplitMix64::next_below: bound must be positive");
  // Rejection-free modulo is fine here: bounds are tiny (< 2^8) so the bias
  // is far below anything the harnesses could observe.
  return next() % bound;
}

SplitMix64 SplitMix64::split() {
  return SplitMix64(next() ^ 0x6a09e667f3bcc909ULL);
}

}  // namespace sqa
