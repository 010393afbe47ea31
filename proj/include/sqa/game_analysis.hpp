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
#include <optional>
#include <span>
#include <vector>

#include "sqa/auction.hpp"

namespace sqa {

/// Finite per-advertiser bid candidates for the dominance and Nash searches.
/// Each advertiser's grid is sorted, spans [0, 2 * value] and contains the
/// truthful value exactly.
class BidGrid {
 public:
  /// Evenly spaced grid with `points` candidates per advertiser (>= 1). Even
  /// counts are rounded up so the midpoint lands exactly on the value.
  static BidGrid linear(const AuctionSetup& setup, int points);

  const std::vector<double>& for_advertiser(int index) const;
  int advertisers() const { return static_cast<int>(grids_.size()); }

 private:
  std::vector<std::vector<double>> grids_;
};

struct DominanceReport {
  int advertiser_id = 0;
  std::int64_t profiles_tested = 0;
  std::int64_t deviations_tested = 0;
  /// Most positive U(deviation) - U(truthful) seen; <= 0 means truthful
  /// bidding was never beaten.
  double max_violation = 0.0;
  bool passed = false;
};

/// Searches for a bid deviation of `advertiser_id` that beats truthful
/// bidding against each opponent profile. Entry `index_of(advertiser_id)` of
/// an opponent profile is ignored.
DominanceReport check_truthful_dominance(const AuctionSetup& setup, int advertiser_id,
                                         const BidGrid& grid,
                                         std::span<const BidProfile> opponent_profiles);

struct NashDeviation {
  int advertiser_id = 0;
  double bid = 0.0;
  double gain = 0.0;
};

struct NashReport {
  bool is_equilibrium = true;
  /// The most profitable unilateral grid deviation found, if any improves
  /// its player's utility by more than the identity tolerance.
  std::optional<NashDeviation> worst_deviation;
};

NashReport check_nash(const AuctionSetup& setup, const BidProfile& profile,
                      const BidGrid& grid);

/// SW of a generic strategy profile: the sum of player utilities.
double profile_social_welfare(std::span<const double> utilities);

/// Runs the truthful auction and returns
/// utility[winner] - (SW(winner) - SW(second)); zero up to rounding.
double vcg_surplus_identity(const AuctionSetup& setup);

/// The two built-in counterexample families. Both use the two-token skewed
/// vocabulary; they differ in the fusion weights.
enum class Prop { kProp2 = 2, kProp3 = 3 };

struct CounterexampleScenario {
  Prop which;
  double epsilon;
  AuctionSetup setup;  // advertisers 1 and 2
};

/// lambda_1 = eps, lambda_2 = 1 - eps: the higher-value advertiser loses.
CounterexampleScenario build_prop2_scenario(double epsilon);
/// lambda_1 = 1 - eps, lambda_2 = 0.5: the higher-user-utility advertiser
/// loses.
CounterexampleScenario build_prop3_scenario(double epsilon);

struct Prop2Report {
  double epsilon = 0.0;
  bool value_inequality = false;  // v_1 > v_2
  bool winner_is_2 = false;       // truthful winner is advertiser 2
  double value_margin = 0.0;      // v_1 - v_2
  double pv_margin = 0.0;         // PV_2 - PV_1 under truthful bids
};

struct Prop3Report {
  double epsilon = 0.0;
  bool utility_inequality = false;  // U_1 > U_2
  bool winner_is_2 = false;
  double utility_margin = 0.0;  // U_1 - U_2
  double pv_margin = 0.0;       // PV_2 - PV_1 under truthful bids
};

Prop2Report verify_prop2(double epsilon);
Prop3Report verify_prop3(double epsilon);

struct SweepRow {
  double epsilon = 0.0;
  double value_gap = 0.0;    // v_1 - v_2
  double utility_gap = 0.0;  // U_1 - U_2
  double pv_gap = 0.0;       // PV_2 - PV_1 under truthful bids
  int winner = 0;            // advertiser id
  double payment = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// First epsilon (if any) where the strict inequality of the first row
  /// stops holding.
  std::optional<double> value_gap_flip;
  std::optional<double> utility_gap_flip;
  std::optional<double> pv_gap_flip;
  /// First epsilon (if any) where the winner differs from the first row's.
  std::optional<double> winner_change;
};

/// Evenly spaced exact evaluation of a counterexample family over
/// [eps_start, eps_end]. jobs = 0 uses all available cores; row order is by
/// epsilon regardless of scheduling.
SweepResult epsilon_sweep(Prop which, double eps_start, double eps_end, int steps,
                          int jobs = 0);

/// Raw random scenario: organic counts first, then one count vector per
/// advertiser. Feeds both the main pipeline and the brute-force oracle.
struct RandomScenario {
  std::vector<std::vector<double>> doc_counts;
  std::vector<double> lambdas;
};

/// Vocabulary 2..6 tokens, 2..4 advertisers, strictly positive counts,
/// lambdas uniform in [0, 1]. Deterministic in the generator state.
RandomScenario draw_random_scenario(SplitMix64& rng);

/// Builds the main-pipeline setup for a raw draw; advertiser ids are 1..n in
/// order.
AuctionSetup make_setup(const RandomScenario& scenario, SmoothingConfig smoothing = {});

/// `count` full profiles with each bid uniform in [0, 2 * value].
std::vector<BidProfile> draw_bid_profiles(const AuctionSetup& setup, int count,
                                          SplitMix64& rng);

}  // namespace sqa
