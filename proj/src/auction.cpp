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

#include "sqa/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sqa {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

void check_bids(const AuctionSetup& setup, const BidProfile& bids) {
  require(bids.bids.size() == static_cast<size_t>(setup.size()),
          "bids: one bid per advertiser required");
  for (double b : bids.bids) {
    require(std::isfinite(b) && b >= 0.0, "bids: bids must be finite and nonnegative");
  }
}

// Winner and runner-up as indices. Two passes per rank: locate the maximal
// PV, then take the lowest id among near-ties of that maximum.
std::pair<int, int> select_indices(const AuctionSetup& setup, const BidProfile& bids) {
  const auto advertisers = setup.advertisers();
  const int n = setup.size();

  auto pv_at = [&](int i) {
    return advertisers[static_cast<size_t>(i)].user_utility + bids.bids[static_cast<size_t>(i)];
  };
  auto pick = [&](int skip) {
    double best_pv = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (i == skip) continue;
      best_pv = std::max(best_pv, pv_at(i));
    }
    int chosen = -1;
    for (int i = 0; i < n; ++i) {
      if (i == skip) continue;
      if (pv_at(i) < best_pv - kTieTolerance) continue;
      if (chosen < 0 || advertisers[static_cast<size_t>(i)].id <
                            advertisers[static_cast<size_t>(chosen)].id) {
        chosen = i;
      }
    }
    return chosen;
  };

  int winner = pick(-1);
  int second = pick(winner);
  return {winner, second};
}

}  // namespace

AuctionSetup::AuctionSetup(Document question, Document organic,
                           std::vector<AdvertiserSpec> advertisers,
                           SmoothingConfig smoothing, AuctionOptions options)
    : question_(std::move(question)),
      organic_(std::move(organic)),
      organic_model_(induce_lm(organic_, smoothing)),
      options_(options) {
  require(advertisers.size() >= 2, "AuctionSetup: at least two advertisers required");
  require(same_vocabulary(*question_.vocab(), *organic_.vocab()),
          "AuctionSetup: question and organic answer must share a vocabulary");

  std::vector<UnigramModel> base_docs;
  std::vector<std::string> labels;
  base_docs.push_back(organic_model_);
  labels.push_back("organic_answer");
  for (const auto& spec : advertisers) {
    require(same_vocabulary(*spec.ad.vocab(), *organic_.vocab()),
            "AuctionSetup: all documents must share a vocabulary");
    require(spec.lambda.lambda >= 0.0 && spec.lambda.lambda <= 1.0,
            "AuctionSetup: lambda must lie in [0, 1] (advertiser id " +
                std::to_string(spec.id) + ")");
    for (const auto& other : advertisers_) {
      require(other.id != spec.id, "AuctionSetup: duplicate advertiser id " +
                                       std::to_string(spec.id));
    }
    base_docs.push_back(induce_lm(spec.ad, smoothing));
    labels.push_back("advertiser " + std::to_string(spec.id) + " ad");
    advertisers_.push_back(Advertiser{spec.id, spec.ad, spec.lambda,
                                      base_docs.back(),
                                      mix_models(organic_model_, base_docs.back(), spec.lambda),
                                      0.0, 0.0});
  }

  ctx_.shift_a = shift_constant(base_docs, labels);
  ctx_.smoothing = smoothing;
  for (auto& adv : advertisers_) {
    adv.value = advertiser_value(adv.sponsored_model, adv.ad_model, ctx_);
    adv.user_utility = user_utility(adv.sponsored_model, organic_model_, ctx_);
  }
}

const Advertiser& AuctionSetup::advertiser_at(int index) const {
  require(index >= 0 && index < size(), "AuctionSetup: advertiser index out of range");
  return advertisers_[static_cast<size_t>(index)];
}

int AuctionSetup::index_of(int id) const {
  for (int i = 0; i < size(); ++i) {
    if (advertisers_[static_cast<size_t>(i)].id == id) return i;
  }
  throw ValidationError("AuctionSetup: unknown advertiser id " + std::to_string(id));
}

BidProfile AuctionSetup::truthful_bids() const {
  BidProfile profile;
  profile.bids.reserve(advertisers_.size());
  for (const auto& adv : advertisers_) profile.bids.push_back(adv.value);
  return profile;
}

double platform_value(double user_util, double bid) { return user_util + bid; }

std::pair<int, int> select_winner(const AuctionSetup& setup, const BidProfile& bids) {
  check_bids(setup, bids);
  auto [w, s] = select_indices(setup, bids);
  return {setup.advertiser_at(w).id, setup.advertiser_at(s).id};
}

double winner_payment(const AuctionSetup& setup, const BidProfile& bids,
                      int winner_id, int second_id) {
  check_bids(setup, bids);
  require(winner_id != second_id, "winner_payment: winner and runner-up must differ");
  const Advertiser& winner = setup.advertiser(winner_id);
  const Advertiser& second = setup.advertiser(second_id);
  const double second_bid = bids.bids[static_cast<size_t>(setup.index_of(second_id))];
  return second_bid + second.user_utility - winner.user_utility;
}

double advertiser_utility(const AuctionSetup& setup, const BidProfile& bids, int id) {
  check_bids(setup, bids);
  const int index = setup.index_of(id);
  auto [w, s] = select_indices(setup, bids);
  if (w != index) return 0.0;
  double payment = winner_payment(setup, bids, id, setup.advertiser_at(s).id);
  if (setup.options().clamp_payment_at_zero) payment = std::max(payment, 0.0);
  return setup.advertiser_at(index).value - payment;
}

double social_welfare(const AuctionSetup& setup, int id) {
  const Advertiser& adv = setup.advertiser(id);
  return adv.user_utility + adv.value;
}

AuctionOutcome run_auction(const AuctionSetup& setup, const BidProfile& bids) {
  check_bids(setup, bids);
  const auto advertisers = setup.advertisers();
  const int n = setup.size();

  auto [w, s] = select_indices(setup, bids);
  AuctionOutcome outcome;
  outcome.winner_id = advertisers[static_cast<size_t>(w)].id;
  outcome.second_id = advertisers[static_cast<size_t>(s)].id;

  const double raw_payment =
      winner_payment(setup, bids, outcome.winner_id, outcome.second_id);
  outcome.negative_payment_flag = raw_payment < 0.0;
  outcome.payment = setup.options().clamp_payment_at_zero
                        ? std::max(raw_payment, 0.0)
                        : raw_payment;

  outcome.platform_value.resize(static_cast<size_t>(n));
  outcome.user_utility.resize(static_cast<size_t>(n));
  outcome.value.resize(static_cast<size_t>(n));
  outcome.utility.resize(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& adv = advertisers[static_cast<size_t>(i)];
    outcome.user_utility[static_cast<size_t>(i)] = adv.user_utility;
    outcome.value[static_cast<size_t>(i)] = adv.value;
    outcome.platform_value[static_cast<size_t>(i)] =
        platform_value(adv.user_utility, bids.bids[static_cast<size_t>(i)]);
  }
  outcome.utility[static_cast<size_t>(w)] =
      advertisers[static_cast<size_t>(w)].value - outcome.payment;
  outcome.social_welfare_winner = social_welfare(setup, outcome.winner_id);
  outcome.social_welfare_second = social_welfare(setup, outcome.second_id);
  return outcome;
}

}  // namespace sqa
