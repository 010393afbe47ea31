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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "sqa/game_analysis.hpp"
#include "sqa/oracle.hpp"
#include "test_helpers.hpp"

using namespace sqa;
using sqa::testing::letters;

namespace {

// Frozen from an independent 50-digit evaluation of the counterexample
// scenarios (margins are eps-specific, see each use).
constexpr double kShiftA001 = 9.1184379749734909;
constexpr double kPayment001 = 9.8150270015171643;

struct Margins {
  double epsilon;
  double headline;
  double pv;
};

constexpr Margins kValueProfileMargins[] = {
    {0.001, 3.9223619691569616, 9.1616332966265896},
    {0.01, 2.6437971712949531, 5.6179986747942587},
    {0.05, 1.4993245460754301, 2.9903885927256636},
};
constexpr Margins kUtilityProfileMargins[] = {
    {0.001, 1.9975736775754691, 9.5763070550063159},
    {0.01, 1.3268450626320049, 5.54681576688423},
    {0.05, 0.68752943034964654, 2.7702255416787002},
};

AuctionSetup identical_pair() {
  auto vocab = letters(2);
  Document organic(vocab, {3.0, 1.0});
  Document ad(vocab, {1.0, 3.0});
  std::vector<AdvertiserSpec> advertisers;
  advertisers.push_back({1, ad, FusionWeight{0.5}});
  advertisers.push_back({2, ad, FusionWeight{0.5}});
  return AuctionSetup(organic, organic, std::move(advertisers));
}

}  // namespace

TEST_CASE("profile social welfare sums player utilities") {
  std::vector<double> example{3.0, 4.0};
  CHECK(profile_social_welfare(example) == 7.0);
  std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(profile_social_welfare(zeros) == 0.0);
  std::vector<double> auction_case{0.0, 5.618, 0.0};
  CHECK(profile_social_welfare(auction_case) == 5.618);
  CHECK_THROWS_AS(profile_social_welfare({}), ValidationError);
}

TEST_CASE("bid grids span [0, 2v] and contain the value exactly") {
  CounterexampleScenario scenario = build_prop2_scenario(0.01);
  BidGrid grid = BidGrid::linear(scenario.setup, 101);
  for (int i = 0; i < scenario.setup.size(); ++i) {
    const std::vector<double>& bids = grid.for_advertiser(i);
    const double value = scenario.setup.advertiser_at(i).value;
    REQUIRE(bids.size() == 101);
    CHECK(bids.front() == 0.0);
    CHECK(bids[50] == value);  // bitwise: constructed as value * (50 / 50)
    CHECK(bids.back() == doctest::Approx(2.0 * value).epsilon(1e-15));
    CHECK(std::is_sorted(bids.begin(), bids.end()));
  }

  BidGrid even = BidGrid::linear(scenario.setup, 10);  // rounded up to 11
  CHECK(even.for_advertiser(0).size() == 11);
  BidGrid singleton = BidGrid::linear(scenario.setup, 1);
  CHECK(singleton.for_advertiser(0) ==
        std::vector<double>{scenario.setup.advertiser_at(0).value});
  CHECK_THROWS_AS(BidGrid::linear(scenario.setup, 0), ValidationError);
}

TEST_CASE("bidding the value itself is never a deviation") {
  CounterexampleScenario scenario = build_prop2_scenario(0.01);
  SplitMix64 rng(51);
  std::vector<BidProfile> profiles = draw_bid_profiles(scenario.setup, 5, rng);
  BidGrid only_value = BidGrid::linear(scenario.setup, 1);
  for (int id : {1, 2}) {
    DominanceReport report =
        check_truthful_dominance(scenario.setup, id, only_value, profiles);
    CHECK(report.max_violation == 0.0);
    CHECK(report.passed);
    CHECK(report.profiles_tested == 5);
    CHECK(report.deviations_tested == 5);
  }
}

TEST_CASE("overbidding to win only hurts the losing advertiser") {
  CounterexampleScenario scenario = build_prop2_scenario(0.01);
  const AuctionSetup& setup = scenario.setup;
  BidProfile bids = setup.truthful_bids();
  CHECK(advertiser_utility(setup, bids, 1) == 0.0);  // advertiser 1 loses truthfully

  // Overbid enough to displace the winner: the utility goes negative by
  // exactly the truthful PV gap.
  bids.bids[static_cast<size_t>(setup.index_of(1))] += 10.0;
  auto [winner, second] = select_winner(setup, bids);
  CHECK(winner == 1);
  CHECK(second == 2);
  const double utility = advertiser_utility(setup, bids, 1);
  CHECK(utility < 0.0);
  CHECK(std::abs(utility + kValueProfileMargins[1].pv) <= 1e-9);
}

TEST_CASE("dominance harness finds no profitable deviation on random scenarios") {
  SplitMix64 rng(53);
  double worst = -1.0;
  for (int trial = 0; trial < 20; ++trial) {
    AuctionSetup setup = make_setup(draw_random_scenario(rng));
    BidGrid grid = BidGrid::linear(setup, 21);
    std::vector<BidProfile> profiles = draw_bid_profiles(setup, 10, rng);
    for (const Advertiser& adv : setup.advertisers()) {
      DominanceReport report = check_truthful_dominance(setup, adv.id, grid, profiles);
      CHECK(report.passed);
      worst = std::max(worst, report.max_violation);
    }
  }
  CHECK(worst <= kIdentityTolerance);
}

TEST_CASE("truthful profiles are Nash equilibria") {
  CounterexampleScenario scenario = build_prop2_scenario(0.01);
  BidGrid grid = BidGrid::linear(scenario.setup, 41);
  NashReport report =
      check_nash(scenario.setup, scenario.setup.truthful_bids(), grid);
  CHECK(report.is_equilibrium);
  CHECK_FALSE(report.worst_deviation.has_value());

  AuctionSetup symmetric = identical_pair();
  NashReport symmetric_report =
      check_nash(symmetric, symmetric.truthful_bids(), BidGrid::linear(symmetric, 11));
  CHECK(symmetric_report.is_equilibrium);

  SplitMix64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    AuctionSetup setup = make_setup(draw_random_scenario(rng));
    CHECK(check_nash(setup, setup.truthful_bids(), BidGrid::linear(setup, 21))
              .is_equilibrium);
  }
}

TEST_CASE("a displaced winner has a profitable deviation back") {
  CounterexampleScenario scenario = build_prop2_scenario(0.01);
  const AuctionSetup& setup = scenario.setup;
  BidProfile profile = setup.truthful_bids();
  // The truthful winner shades her bid far enough to lose.
  profile.bids[static_cast<size_t>(setup.index_of(2))] = 0.0;
  auto [winner, second] = select_winner(setup, profile);
  REQUIRE(winner == 1);
  (void)second;

  NashReport report = check_nash(setup, profile, BidGrid::linear(setup, 41));
  CHECK_FALSE(report.is_equilibrium);
  REQUIRE(report.worst_deviation.has_value());
  CHECK(report.worst_deviation->advertiser_id == 2);
  CHECK(std::abs(report.worst_deviation->gain - kValueProfileMargins[1].pv) <= 1e-9);
}

TEST_CASE("winner utility equals the social welfare externality gap") {
  CHECK(std::abs(vcg_surplus_identity(build_prop2_scenario(0.01).setup)) <=
        kIdentityTolerance);

  AuctionSetup symmetric = identical_pair();
  AuctionOutcome outcome = run_auction(symmetric, symmetric.truthful_bids());
  CHECK(std::abs(outcome.utility[0]) <= kIdentityTolerance);
  CHECK(std::abs(outcome.social_welfare_winner - outcome.social_welfare_second) <=
        kIdentityTolerance);
  CHECK(std::abs(vcg_surplus_identity(symmetric)) <= kIdentityTolerance);

  SplitMix64 rng(61);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    AuctionSetup setup = make_setup(draw_random_scenario(rng));
    worst = std::max(worst, std::abs(vcg_surplus_identity(setup)));
  }
  CHECK(worst <= kIdentityTolerance);
}

TEST_CASE("the value-profile counterexample construction") {
  CounterexampleScenario scenario = build_prop2_scenario(0.01);
  const AuctionSetup& setup = scenario.setup;
  CHECK(scenario.which == Prop::kProp2);
  CHECK(setup.advertiser(1).lambda.lambda == 0.01);
  CHECK(setup.advertiser(2).lambda.lambda == 0.99);

  const UnigramModel& s1 = setup.advertiser(1).sponsored_model;
  const UnigramModel& s2 = setup.advertiser(2).sponsored_model;
  CHECK(std::abs(s1.prob(0) - 0.0198) <= 1e-12);
  CHECK(std::abs(s1.prob(1) - 0.9802) <= 1e-12);
  CHECK(std::abs(s2.prob(0) - 0.9851) <= 1e-12);
  CHECK(std::abs(s2.prob(1) - 0.0149) <= 1e-12);
  CHECK(std::abs(setup.ctx().shift_a - kShiftA001) <= 1e-9);

  CounterexampleScenario tiny = build_prop2_scenario(1e-7);
  const UnigramModel& s1_tiny = tiny.setup.advertiser(1).sponsored_model;
  const UnigramModel& s2_tiny = tiny.setup.advertiser(2).sponsored_model;
  CHECK(std::abs(s1_tiny.prob(1) - 1.0) <= 1e-6);   // s1 -> ad 1
  CHECK(std::abs(s2_tiny.prob(0) - 1.0) <= 1e-6);   // s2 -> organic

  CounterexampleScenario quarter = build_prop2_scenario(0.25);
  CHECK(std::abs(quarter.setup.advertiser(1).sponsored_model.prob(0) - 0.375) <= 1e-15);

  CHECK_THROWS_AS(build_prop2_scenario(0.0), ValidationError);
  CHECK_THROWS_AS(build_prop2_scenario(0.5), ValidationError);
  CHECK_THROWS_AS(build_prop2_scenario(-0.1), ValidationError);
}

TEST_CASE("the utility-profile counterexample construction") {
  CounterexampleScenario scenario = build_prop3_scenario(0.01);
  const AuctionSetup& setup = scenario.setup;
  CHECK(setup.advertiser(1).lambda.lambda == 0.99);
  CHECK(setup.advertiser(2).lambda.lambda == 0.5);

  const UnigramModel& s1 = setup.advertiser(1).sponsored_model;
  const UnigramModel& s2 = setup.advertiser(2).sponsored_model;
  CHECK(std::abs(s1.prob(0) - 0.9802) <= 1e-12);
  CHECK(std::abs(s1.prob(1) - 0.0198) <= 1e-12);
  CHECK(std::abs(s2.prob(0) - 0.745) <= 1e-12);
  CHECK(std::abs(s2.prob(1) - 0.255) <= 1e-12);

  CounterexampleScenario tiny = build_prop3_scenario(1e-7);
  CHECK(std::abs(tiny.setup.advertiser(1).sponsored_model.prob(0) - 1.0) <= 1e-6);

  CHECK_THROWS_AS(build_prop3_scenario(0.5), ValidationError);
}

TEST_CASE("exact verification of the value counterexample") {
  for (const Margins& expected : kValueProfileMargins) {
    Prop2Report report = verify_prop2(expected.epsilon);
    CHECK(report.value_inequality);
    CHECK(report.winner_is_2);
    CHECK(std::abs(report.value_margin - expected.headline) <= 1e-9);
    CHECK(std::abs(report.pv_margin - expected.pv) <= 1e-9);
  }
}

TEST_CASE("exact verification of the utility counterexample") {
  for (const Margins& expected : kUtilityProfileMargins) {
    Prop3Report report = verify_prop3(expected.epsilon);
    CHECK(report.utility_inequality);
    CHECK(report.winner_is_2);
    CHECK(std::abs(report.utility_margin - expected.headline) <= 1e-9);
    CHECK(std::abs(report.pv_margin - expected.pv) <= 1e-9);
  }
}

TEST_CASE("epsilon sweeps: shape, determinism and flip detection") {
  SweepResult two = epsilon_sweep(Prop::kProp2, 0.01, 0.05, 2);
  REQUIRE(two.rows.size() == 2);
  CHECK(two.rows.front().epsilon == 0.01);
  CHECK(two.rows.back().epsilon == 0.05);
  CHECK(two.rows.front().winner == 2);
  CHECK(two.rows.back().winner == 2);

  CHECK_THROWS_AS(epsilon_sweep(Prop::kProp2, 0.0, 0.4, 5), ValidationError);
  CHECK_THROWS_AS(epsilon_sweep(Prop::kProp2, 0.01, 0.5, 5), ValidationError);
  CHECK_THROWS_AS(epsilon_sweep(Prop::kProp2, 0.1, 0.05, 5), ValidationError);
  CHECK_THROWS_AS(epsilon_sweep(Prop::kProp2, 0.01, 0.4, 1), ValidationError);

  SweepResult sweep = epsilon_sweep(Prop::kProp3, 0.01, 0.49, 97);
  REQUIRE(sweep.rows.size() == 97);
  for (const SweepRow& row : sweep.rows) {
    CHECK(row.winner == 2);  // the exact winner condition never flips here
    if (row.epsilon <= 0.05) {
      CHECK(row.utility_gap > 0.0);
      CHECK(row.pv_gap > 0.0);
    }
  }
  CHECK_FALSE(sweep.winner_change.has_value());
  CHECK_FALSE(sweep.pv_gap_flip.has_value());
  // The two sponsored models coincide at eps = 1/4, so the utility gap flips
  // there (one grid step of slack for the epsilon spacing).
  REQUIRE(sweep.utility_gap_flip.has_value());
  CHECK(std::abs(*sweep.utility_gap_flip - 0.25) <= 0.006);

  // The value-profile family flips its headline inequality near 0.413.
  SweepResult value_sweep = epsilon_sweep(Prop::kProp2, 0.01, 0.49, 97);
  REQUIRE(value_sweep.value_gap_flip.has_value());
  CHECK(std::abs(*value_sweep.value_gap_flip - 0.413) <= 0.006);
  CHECK_FALSE(value_sweep.winner_change.has_value());

  // Bitwise reproducibility, independent of the worker count.
  SweepResult serial = epsilon_sweep(Prop::kProp3, 0.01, 0.49, 97, 1);
  SweepResult parallel = epsilon_sweep(Prop::kProp3, 0.01, 0.49, 97, 4);
  for (size_t j = 0; j < serial.rows.size(); ++j) {
    CHECK(serial.rows[j].epsilon == parallel.rows[j].epsilon);
    CHECK(serial.rows[j].value_gap == parallel.rows[j].value_gap);
    CHECK(serial.rows[j].utility_gap == parallel.rows[j].utility_gap);
    CHECK(serial.rows[j].pv_gap == parallel.rows[j].pv_gap);
    CHECK(serial.rows[j].winner == parallel.rows[j].winner);
    CHECK(serial.rows[j].payment == parallel.rows[j].payment);
  }
}

TEST_CASE("the brute-force oracle reproduces the pinned scenario") {
  OracleInput input;
  input.doc_counts = {{0.99, 0.01}, {0.01, 0.99}, {0.5, 0.5}};
  input.lambdas = {0.01, 0.99};
  OracleOutcome outcome = oracle_winner_bruteforce(input);
  CHECK(outcome.winner_index == 1);  // advertiser 2
  CHECK(outcome.second_index == 0);
  CHECK(std::abs(outcome.shift_a - kShiftA001) <= 1e-9);
  CHECK(std::abs(outcome.payment - kPayment001) <= 1e-9);
  CHECK(outcome.values[0] > outcome.values[1]);
}

TEST_CASE("the oracle breaks ties like the main pipeline") {
  OracleInput input;
  input.doc_counts = {{3.0, 1.0}, {1.0, 3.0}, {1.0, 3.0}};
  input.lambdas = {0.5, 0.5};
  OracleOutcome outcome = oracle_winner_bruteforce(input);
  CHECK(outcome.winner_index == 0);
  CHECK(outcome.second_index == 1);
}

TEST_CASE("oracle input validation") {
  OracleInput input;
  input.doc_counts = {{1.0, 1.0}, {1.0, 2.0}};
  input.lambdas = {0.5};
  CHECK_THROWS(oracle_winner_bruteforce(input));  // only one advertiser

  OracleInput disjoint;
  disjoint.doc_counts = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
  disjoint.lambdas = {0.5, 0.5};
  CHECK_THROWS(oracle_winner_bruteforce(disjoint));
}

TEST_CASE("main pipeline matches the oracle on random scenarios") {
  SplitMix64 rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    RandomScenario scenario = draw_random_scenario(rng);
    AuctionSetup setup = make_setup(scenario);
    BidProfile bids = trial % 2 == 0 ? setup.truthful_bids()
                                     : draw_bid_profiles(setup, 1, rng).front();
    AuctionOutcome outcome = run_auction(setup, bids);

    OracleInput input;
    input.doc_counts = scenario.doc_counts;
    input.lambdas = scenario.lambdas;
    input.bids = bids.bids;
    OracleOutcome oracle = oracle_winner_bruteforce(input);

    CHECK(oracle.winner_index == setup.index_of(outcome.winner_id));
    CHECK(oracle.second_index == setup.index_of(outcome.second_id));
    CHECK(std::abs(oracle.payment - outcome.payment) <= kIdentityTolerance);
    CHECK(std::abs(oracle.shift_a - setup.ctx().shift_a) <= kIdentityTolerance);
  }
}

TEST_CASE("random scenario draws stay inside their envelope") {
  SplitMix64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    RandomScenario scenario = draw_random_scenario(rng);
    const size_t vocab = scenario.doc_counts.front().size();
    CHECK(vocab >= 2);
    CHECK(vocab <= 6);
    CHECK(scenario.doc_counts.size() >= 3);
    CHECK(scenario.doc_counts.size() <= 5);
    for (const auto& counts : scenario.doc_counts) {
      for (double c : counts) CHECK(c > 0.0);
    }
    for (double lambda : scenario.lambdas) {
      CHECK(lambda >= 0.0);
      CHECK(lambda <= 1.0);
    }
  }
}
