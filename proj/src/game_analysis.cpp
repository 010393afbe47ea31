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

#include "sqa/game_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <thread>

namespace sqa {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace

BidGrid BidGrid::linear(const AuctionSetup& setup, int points) {
  require(points >= 1, "BidGrid: at least one point per advertiser required");
  if (points > 1 && points % 2 == 0) ++points;  // keep the midpoint on the value
  BidGrid grid;
  grid.grids_.reserve(static_cast<size_t>(setup.size()));
  for (const Advertiser& adv : setup.advertisers()) {
    std::vector<double> bids;
    bids.reserve(static_cast<size_t>(points));
    if (points == 1) {
      bids.push_back(adv.value);
    } else {
      const int mid = points / 2;
      for (int j = 0; j < points; ++j) {
        // j == mid gives exactly value; j == 2 * mid gives exactly 2 * value.
        bids.push_back(adv.value * (static_cast<double>(j) / mid));
      }
    }
    grid.grids_.push_back(std::move(bids));
  }
  return grid;
}

const std::vector<double>& BidGrid::for_advertiser(int index) const {
  require(index >= 0 && index < advertisers(), "BidGrid: advertiser index out of range");
  return grids_[static_cast<size_t>(index)];
}

DominanceReport check_truthful_dominance(const AuctionSetup& setup, int advertiser_id,
                                         const BidGrid& grid,
                                         std::span<const BidProfile> opponent_profiles) {
  require(grid.advertisers() == setup.size(),
          "check_truthful_dominance: grid does not match the setup");
  const int index = setup.index_of(advertiser_id);
  const double value = setup.advertiser_at(index).value;
  const auto& deviations = grid.for_advertiser(index);

  DominanceReport report;
  report.advertiser_id = advertiser_id;
  report.max_violation = -std::numeric_limits<double>::infinity();

  BidProfile work;
  for (const BidProfile& opponents : opponent_profiles) {
    require(opponents.bids.size() == static_cast<size_t>(setup.size()),
            "check_truthful_dominance: opponent profile size mismatch");
    work = opponents;
    work.bids[static_cast<size_t>(index)] = value;
    const double truthful_utility = advertiser_utility(setup, work, advertiser_id);
    for (double deviation : deviations) {
      work.bids[static_cast<size_t>(index)] = deviation;
      const double deviated_utility = advertiser_utility(setup, work, advertiser_id);
      report.max_violation =
          std::max(report.max_violation, deviated_utility - truthful_utility);
      ++report.deviations_tested;
    }
    ++report.profiles_tested;
  }
  if (report.deviations_tested == 0) report.max_violation = 0.0;
  report.passed = report.max_violation <= kIdentityTolerance;
  return report;
}

NashReport check_nash(const AuctionSetup& setup, const BidProfile& profile,
                      const BidGrid& grid) {
  require(grid.advertisers() == setup.size(), "check_nash: grid does not match the setup");
  require(profile.bids.size() == static_cast<size_t>(setup.size()),
          "check_nash: profile size mismatch");

  NashReport report;
  BidProfile work = profile;
  for (int i = 0; i < setup.size(); ++i) {
    const int id = setup.advertiser_at(i).id;
    const double base_utility = advertiser_utility(setup, profile, id);
    for (double candidate : grid.for_advertiser(i)) {
      work.bids[static_cast<size_t>(i)] = candidate;
      const double gain = advertiser_utility(setup, work, id) - base_utility;
      if (gain > kIdentityTolerance &&
          (!report.worst_deviation || gain > report.worst_deviation->gain)) {
        report.worst_deviation = NashDeviation{id, candidate, gain};
      }
    }
    work.bids[static_cast<size_t>(i)] = profile.bids[static_cast<size_t>(i)];
  }
  report.is_equilibrium = !report.worst_deviation.has_value();
  return report;
}

double profile_social_welfare(std::span<const double> utilities) {
  require(!utilities.empty(), "profile_social_welfare: empty profile");
  double sum = 0.0;
  for (double u : utilities) sum += u;
  return sum;
}

double vcg_surplus_identity(const AuctionSetup& setup) {
  AuctionOutcome outcome = run_auction(setup, setup.truthful_bids());
  const double winner_utility =
      outcome.utility[static_cast<size_t>(setup.index_of(outcome.winner_id))];
  return winner_utility -
         (outcome.social_welfare_winner - outcome.social_welfare_second);
}

namespace {

CounterexampleScenario build_counterexample(Prop which, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ValidationError("counterexample scenario: epsilon must lie in (0, 0.5)");
  }
  auto vocab = std::make_shared<Vocabulary>();
  vocab->add("a");
  vocab->add("b");
  Document organic(vocab, {1.0 - epsilon, epsilon});
  Document ad1(vocab, {epsilon, 1.0 - epsilon});
  Document ad2(vocab, {0.5, 0.5});

  const double lambda1 = which == Prop::kProp2 ? epsilon : 1.0 - epsilon;
  const double lambda2 = which == Prop::kProp2 ? 1.0 - epsilon : 0.5;
  std::vector<AdvertiserSpec> advertisers;
  advertisers.push_back({1, std::move(ad1), FusionWeight{lambda1}});
  advertisers.push_back({2, std::move(ad2), FusionWeight{lambda2}});

  Document question = organic;  // carried for reporting; never enters arithmetic
  return CounterexampleScenario{
      which, epsilon,
      AuctionSetup(std::move(question), std::move(organic), std::move(advertisers))};
}

}  // namespace

CounterexampleScenario build_prop2_scenario(double epsilon) {
  return build_counterexample(Prop::kProp2, epsilon);
}

CounterexampleScenario build_prop3_scenario(double epsilon) {
  return build_counterexample(Prop::kProp3, epsilon);
}

namespace {

SweepRow evaluate_row(const CounterexampleScenario& scenario) {
  const AuctionSetup& setup = scenario.setup;
  AuctionOutcome outcome = run_auction(setup, setup.truthful_bids());
  const int i1 = setup.index_of(1);
  const int i2 = setup.index_of(2);
  SweepRow row;
  row.epsilon = scenario.epsilon;
  row.value_gap = outcome.value[static_cast<size_t>(i1)] - outcome.value[static_cast<size_t>(i2)];
  row.utility_gap = outcome.user_utility[static_cast<size_t>(i1)] -
                    outcome.user_utility[static_cast<size_t>(i2)];
  row.pv_gap = outcome.platform_value[static_cast<size_t>(i2)] -
               outcome.platform_value[static_cast<size_t>(i1)];
  row.winner = outcome.winner_id;
  row.payment = outcome.payment;
  return row;
}

}  // namespace

Prop2Report verify_prop2(double epsilon) {
  SweepRow row = evaluate_row(build_prop2_scenario(epsilon));
  Prop2Report report;
  report.epsilon = epsilon;
  report.value_inequality = row.value_gap > 0.0;
  report.winner_is_2 = row.winner == 2;
  report.value_margin = row.value_gap;
  report.pv_margin = row.pv_gap;
  return report;
}

Prop3Report verify_prop3(double epsilon) {
  SweepRow row = evaluate_row(build_prop3_scenario(epsilon));
  Prop3Report report;
  report.epsilon = epsilon;
  report.utility_inequality = row.utility_gap > 0.0;
  report.winner_is_2 = row.winner == 2;
  report.utility_margin = row.utility_gap;
  report.pv_margin = row.pv_gap;
  return report;
}

SweepResult epsilon_sweep(Prop which, double eps_start, double eps_end, int steps,
                          int jobs) {
  if (!(eps_start > 0.0 && eps_start < eps_end && eps_end < 0.5)) {
    throw ValidationError("epsilon_sweep: need 0 < eps_start < eps_end < 0.5");
  }
  require(steps >= 2, "epsilon_sweep: at least two steps required");
  require(jobs >= 0, "epsilon_sweep: jobs must be nonnegative");

  SweepResult result;
  result.rows.resize(static_cast<size_t>(steps));
  auto epsilon_at = [&](int j) {
    return eps_start + static_cast<double>(j) * (eps_end - eps_start) / (steps - 1);
  };
  auto compute = [&](int j) {
    const double eps = epsilon_at(j);
    result.rows[static_cast<size_t>(j)] = evaluate_row(
        which == Prop::kProp2 ? build_prop2_scenario(eps) : build_prop3_scenario(eps));
  };

  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(steps));
  if (workers <= 1) {
    for (int j = 0; j < steps; ++j) compute(j);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int j = static_cast<int>(w); j < steps; j += static_cast<int>(workers)) {
          compute(j);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  const SweepRow& first = result.rows.front();
  for (const SweepRow& row : result.rows) {
    if (!result.value_gap_flip && (row.value_gap > 0.0) != (first.value_gap > 0.0)) {
      result.value_gap_flip = row.epsilon;
    }
    if (!result.utility_gap_flip && (row.utility_gap > 0.0) != (first.utility_gap > 0.0)) {
      result.utility_gap_flip = row.epsilon;
    }
    if (!result.pv_gap_flip && (row.pv_gap > 0.0) != (first.pv_gap > 0.0)) {
      result.pv_gap_flip = row.epsilon;
    }
    if (!result.winner_change && row.winner != first.winner) {
      result.winner_change = row.epsilon;
    }
  }
  return result;
}

RandomScenario draw_random_scenario(SplitMix64& rng) {
  const int vocab_size = 2 + static_cast<int>(rng.next_below(5));   // 2..6
  const int advertisers = 2 + static_cast<int>(rng.next_below(3));  // 2..4

  RandomScenario scenario;
  scenario.doc_counts.reserve(static_cast<size_t>(advertisers) + 1);
  for (int d = 0; d < advertisers + 1; ++d) {
    std::vector<double> counts(static_cast<size_t>(vocab_size));
    for (double& c : counts) {
      // Exponential draws normalize to a flat Dirichlet; the floor keeps all
      // probabilities comfortably positive so mu = 0 stays safe.
      c = 0.05 - std::log(1.0 - rng.next_unit());
    }
    scenario.doc_counts.push_back(std::move(counts));
  }
  scenario.lambdas.reserve(static_cast<size_t>(advertisers));
  for (int i = 0; i < advertisers; ++i) scenario.lambdas.push_back(rng.next_unit());
  return scenario;
}

AuctionSetup make_setup(const RandomScenario& scenario, SmoothingConfig smoothing) {
  require(scenario.doc_counts.size() >= 3,
          "make_setup: organic counts plus at least two ads required");
  require(scenario.lambdas.size() + 1 == scenario.doc_counts.size(),
          "make_setup: one lambda per advertiser required");
  auto vocab = std::make_shared<Vocabulary>();
  const size_t vocab_size = scenario.doc_counts.front().size();
  for (size_t t = 0; t < vocab_size; ++t) vocab->add("t" + std::to_string(t));

  Document organic(vocab, scenario.doc_counts.front());
  std::vector<AdvertiserSpec> advertisers;
  for (size_t i = 1; i < scenario.doc_counts.size(); ++i) {
    advertisers.push_back({static_cast<int>(i), Document(vocab, scenario.doc_counts[i]),
                           FusionWeight{scenario.lambdas[i - 1]}});
  }
  Document question = organic;
  return AuctionSetup(std::move(question), std::move(organic), std::move(advertisers),
                      smoothing);
}

std::vector<BidProfile> draw_bid_profiles(const AuctionSetup& setup, int count,
                                          SplitMix64& rng) {
  require(count >= 0, "draw_bid_profiles: count must be nonnegative");
  std::vector<BidProfile> profiles;
  profiles.reserve(static_cast<size_t>(count));
  for (int p = 0; p < count; ++p) {
    BidProfile profile;
    profile.bids.reserve(static_cast<size_t>(setup.size()));
    for (const Advertiser& adv : setup.advertisers()) {
      profile.bids.push_back(rng.next_unit() * 2.0 * adv.value);
    }
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

}  // namespace sqa
