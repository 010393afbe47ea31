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

#include "sqa/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "sqa/auction.hpp"
#include "sqa/game_analysis.hpp"
#include "sqa/oracle.hpp"

namespace sqa {

namespace {

// Pinned expectations for the counterexample scenarios at epsilon = 0.01,
// all independently cross-checked against the brute-force oracle.
constexpr double kProp2ValueMargin = 2.6438;
constexpr double kProp2PvMargin = 5.6180;
constexpr double kProp2ShiftA = 9.11844;
constexpr double kProp2PaymentOffset = 8.4218;  // payment = 2A - offset
constexpr double kProp3UtilityMargin = 1.3269;
constexpr double kProp3PvMargin = 5.5467;
constexpr double kMarginTolerance = 1e-3;
constexpr double kShiftTolerance = 1e-4;

const double kPropEpsilons[] = {0.001, 0.01, 0.05};

std::string format(const char* pattern, double a, double b = 0.0) {
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer), pattern, a, b);
  return buffer;
}

CheckResult timed(const std::string& name,
                  const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult result;
  result.name = name;
  auto [passed, detail] = body();
  result.passed = passed;
  result.detail = std::move(detail);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

OracleInput oracle_input(const RandomScenario& scenario, const BidProfile& bids) {
  OracleInput input;
  input.doc_counts = scenario.doc_counts;
  input.lambdas = scenario.lambdas;
  input.bids = bids.bids;
  return input;
}

CheckResult check_payment_identity(const VerifyOptions& options) {
  return timed("payment-identity", [&]() -> std::pair<bool, std::string> {
    SplitMix64 rng(options.seed);
    double worst = 0.0;
    int runs = 0;
    for (int s = 0; s < options.scenarios; ++s) {
      AuctionSetup setup = make_setup(draw_random_scenario(rng));
      BidProfile random_bids = draw_bid_profiles(setup, 1, rng).front();
      for (const BidProfile& bids : {setup.truthful_bids(), random_bids}) {
        AuctionOutcome outcome = run_auction(setup, bids);
        const int second = setup.index_of(outcome.second_id);
        const double winner_pv_at_payment = platform_value(
            setup.advertiser(outcome.winner_id).user_utility, outcome.payment);
        const double residual = std::abs(
            winner_pv_at_payment - outcome.platform_value[static_cast<size_t>(second)]);
        worst = std::max(worst, residual);
        ++runs;
      }
    }
    return {worst <= kIdentityTolerance,
            format("max |PV(winner at payment) - PV(second at bid)| = %.3g over %g runs",
                   worst, static_cast<double>(runs))};
  });
}

CheckResult check_vcg_surplus(const VerifyOptions& options) {
  return timed("vcg-surplus", [&]() -> std::pair<bool, std::string> {
    SplitMix64 rng(options.seed);
    double worst = 0.0;
    for (int s = 0; s < options.scenarios; ++s) {
      AuctionSetup setup = make_setup(draw_random_scenario(rng));
      draw_bid_profiles(setup, 1, rng);  // keep the stream aligned with check 1
      worst = std::max(worst, std::abs(vcg_surplus_identity(setup)));
    }
    return {worst <= kIdentityTolerance,
            format("max |U_winner - (SW_w - SW_2nd)| = %.3g over %g scenarios", worst,
                   static_cast<double>(options.scenarios))};
  });
}

CheckResult check_dominance(const VerifyOptions& options) {
  return timed("truthful-dominance", [&]() -> std::pair<bool, std::string> {
    SplitMix64 rng(options.seed + 1);
    double worst = -1.0;
    std::int64_t deviations = 0;
    for (int s = 0; s < options.dominance_scenarios; ++s) {
      AuctionSetup setup = make_setup(draw_random_scenario(rng));
      BidGrid grid = BidGrid::linear(setup, options.dominance_grid_points);
      std::vector<BidProfile> profiles =
          draw_bid_profiles(setup, options.dominance_profiles, rng);
      for (const Advertiser& adv : setup.advertisers()) {
        DominanceReport report =
            check_truthful_dominance(setup, adv.id, grid, profiles);
        worst = std::max(worst, report.max_violation);
        deviations += report.deviations_tested;
      }
    }
    return {worst <= kIdentityTolerance,
            format("max utility gain of any deviation = %.3g over %g deviations", worst,
                   static_cast<double>(deviations))};
  });
}

CheckResult check_prop2() {
  return timed("prop2-reproduction", [&]() -> std::pair<bool, std::string> {
    for (double eps : kPropEpsilons) {
      Prop2Report report = verify_prop2(eps);
      if (!report.value_inequality || !report.winner_is_2) {
        return {false, format("inequalities do not hold at epsilon = %g", eps)};
      }
    }
    CounterexampleScenario scenario = build_prop2_scenario(0.01);
    Prop2Report report = verify_prop2(0.01);
    const double shift_a = scenario.setup.ctx().shift_a;
    AuctionOutcome outcome = run_auction(scenario.setup, scenario.setup.truthful_bids());

    OracleInput input;
    input.doc_counts = {{0.99, 0.01}, {0.01, 0.99}, {0.5, 0.5}};
    input.lambdas = {0.01, 0.99};
    OracleOutcome oracle = oracle_winner_bruteforce(input);

    const bool margins_ok =
        std::abs(report.value_margin - kProp2ValueMargin) <= kMarginTolerance &&
        std::abs(report.pv_margin - kProp2PvMargin) <= kMarginTolerance &&
        std::abs(shift_a - kProp2ShiftA) <= kShiftTolerance &&
        std::abs(outcome.payment - (2.0 * shift_a - kProp2PaymentOffset)) <= kMarginTolerance;
    const bool oracle_ok =
        oracle.winner_index == scenario.setup.index_of(outcome.winner_id) &&
        std::abs(oracle.payment - outcome.payment) <= kIdentityTolerance &&
        std::abs(oracle.shift_a - shift_a) <= kIdentityTolerance;
    return {margins_ok && oracle_ok,
            format("eps = 0.01: v1 - v2 = %.6f, PV2 - PV1 = %.6f", report.value_margin,
                   report.pv_margin) +
                format(", A = %.6f, payment = %.6f (oracle-checked)", shift_a,
                       outcome.payment)};
  });
}

CheckResult check_prop3() {
  return timed("prop3-reproduction", [&]() -> std::pair<bool, std::string> {
    for (double eps : kPropEpsilons) {
      Prop3Report report = verify_prop3(eps);
      if (!report.utility_inequality || !report.winner_is_2) {
        return {false, format("inequalities do not hold at epsilon = %g", eps)};
      }
    }
    CounterexampleScenario scenario = build_prop3_scenario(0.01);
    Prop3Report report = verify_prop3(0.01);
    AuctionOutcome outcome = run_auction(scenario.setup, scenario.setup.truthful_bids());

    OracleInput input;
    input.doc_counts = {{0.99, 0.01}, {0.01, 0.99}, {0.5, 0.5}};
    input.lambdas = {0.99, 0.5};
    OracleOutcome oracle = oracle_winner_bruteforce(input);

    const bool margins_ok =
        std::abs(report.utility_margin - kProp3UtilityMargin) <= kMarginTolerance &&
        std::abs(report.pv_margin - kProp3PvMargin) <= kMarginTolerance;
    const bool oracle_ok =
        oracle.winner_index == scenario.setup.index_of(outcome.winner_id) &&
        std::abs(oracle.payment - outcome.payment) <= kIdentityTolerance;
    return {margins_ok && oracle_ok,
            format("eps = 0.01: U1 - U2 = %.6f, PV2 - PV1 = %.6f (oracle-checked)",
                   report.utility_margin, report.pv_margin)};
  });
}

CheckResult check_oracle_equivalence(const VerifyOptions& options) {
  return timed("oracle-equivalence", [&]() -> std::pair<bool, std::string> {
    SplitMix64 rng(options.seed + 2);
    double worst_payment_gap = 0.0;
    int winner_mismatches = 0;
    for (int s = 0; s < options.scenarios; ++s) {
      RandomScenario scenario = draw_random_scenario(rng);
      AuctionSetup setup = make_setup(scenario);
      // Alternate truthful and random bid profiles for coverage.
      BidProfile bids = (s % 2 == 0) ? setup.truthful_bids()
                                     : draw_bid_profiles(setup, 1, rng).front();
      AuctionOutcome outcome = run_auction(setup, bids);
      OracleOutcome oracle = oracle_winner_bruteforce(oracle_input(scenario, bids));
      if (oracle.winner_index != setup.index_of(outcome.winner_id)) ++winner_mismatches;
      worst_payment_gap =
          std::max(worst_payment_gap, std::abs(oracle.payment - outcome.payment));
    }
    return {winner_mismatches == 0 && worst_payment_gap <= kIdentityTolerance,
            format("winner mismatches = %g, max payment gap = %.3g",
                   static_cast<double>(winner_mismatches), worst_payment_gap)};
  });
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(check_payment_identity(options));
  results.push_back(check_dominance(options));
  results.push_back(check_vcg_surplus(options));
  results.push_back(check_prop2());
  results.push_back(check_prop3());
  results.push_back(check_oracle_equivalence(options));
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& result : results) {
    if (!result.passed) return false;
  }
  return true;
}

}  // namespace sqa
