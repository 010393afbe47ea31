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
#include <utility>
#include <vector>

#include "sqa/similarity.hpp"
#include "sqa/text_lm.hpp"

namespace sqa {

/// PV ties within this margin are broken toward the lowest advertiser id.
inline constexpr double kTieTolerance = 1e-12;
/// Slack for the algebraic identities (payment, VCG surplus).
inline constexpr double kIdentityTolerance = 1e-9;

/// One bid per advertiser, aligned with the setup's advertiser order.
struct BidProfile {
  std::vector<double> bids;
};

/// Advertiser input: an ad document and the negotiated fusion weight.
struct AdvertiserSpec {
  int id = 0;
  Document ad;
  FusionWeight lambda{};
};

/// Advertiser with the quantities derived at setup time. `user_utility` is
/// bid-independent, so it is cached here once.
struct Advertiser {
  int id;
  Document ad;
  FusionWeight lambda;
  UnigramModel ad_model;
  UnigramModel sponsored_model;
  double value;
  double user_utility;
};

struct AuctionOptions {
  /// Experimentation switch; the payment rule itself never clamps and all
  /// verification paths leave this off.
  bool clamp_payment_at_zero = false;
};

/// The question-specific setup: question, organic answer, the advertisers
/// with their fused sponsored models and values, and the similarity context
/// whose shift constant is taken over {organic} + ads (self-pairs included).
class AuctionSetup {
 public:
  AuctionSetup(Document question, Document organic,
               std::vector<AdvertiserSpec> advertisers,
               SmoothingConfig smoothing = {}, AuctionOptions options = {});

  int size() const { return static_cast<int>(advertisers_.size()); }
  const Document& question() const { return question_; }
  const Document& organic() const { return organic_; }
  const UnigramModel& organic_model() const { return organic_model_; }
  const SimilarityContext& ctx() const { return ctx_; }
  const AuctionOptions& options() const { return options_; }
  std::span<const Advertiser> advertisers() const { return advertisers_; }
  const Advertiser& advertiser_at(int index) const;
  /// Index of the advertiser with this id; throws ValidationError if unknown.
  int index_of(int id) const;
  const Advertiser& advertiser(int id) const { return advertiser_at(index_of(id)); }
  /// Bids equal to values.
  BidProfile truthful_bids() const;

 private:
  Document question_;
  Document organic_;
  UnigramModel organic_model_;
  std::vector<Advertiser> advertisers_;
  SimilarityContext ctx_;
  AuctionOptions options_;
};

struct AuctionOutcome {
  int winner_id = 0;
  int second_id = 0;
  double payment = 0.0;
  bool negative_payment_flag = false;
  /// Per advertiser, in setup order.
  std::vector<double> platform_value;
  std::vector<double> user_utility;
  std::vector<double> value;
  std::vector<double> utility;
  double social_welfare_winner = 0.0;
  double social_welfare_second = 0.0;
};

/// PV = U + b.
double platform_value(double user_util, double bid);

/// (winner id, runner-up id). Both ranks break PV ties toward the lowest id.
std::pair<int, int> select_winner(const AuctionSetup& setup, const BidProfile& bids);

/// Lemma-style second price: p = b_second + U_second - U_winner. May be
/// negative; never clamped here.
double winner_payment(const AuctionSetup& setup, const BidProfile& bids,
                      int winner_id, int second_id);

/// value - payment for the winner, 0 for everyone else. Respects the
/// clamp_payment_at_zero option.
double advertiser_utility(const AuctionSetup& setup, const BidProfile& bids, int id);

/// SW of displaying advertiser `id`'s sponsored answer: U + v. Bids do not
/// enter.
double social_welfare(const AuctionSetup& setup, int id);

AuctionOutcome run_auction(const AuctionSetup& setup, const BidProfile& bids);

}  // namespace sqa
