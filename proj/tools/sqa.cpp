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

// sqa: sponsored question-answering auction simulator.
//
// Exit codes: 0 success, 1 property failure, 2 usage/validation error,
// 3 domain error (e.g. infinite cross entropy under mu = 0).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqa/game_analysis.hpp"
#include "sqa/scenario_io.hpp"
#include "sqa/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sqa::ValidationError("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sqa::ValidationError("cannot write file: " + path);
  out << content;
}

int cmd_run(const std::string& scenario_path, const std::string& report_path) {
  sqa::ScenarioFile scenario = sqa::parse_scenario_file(read_file(scenario_path));
  auto [setup, bids] = sqa::build_setup(scenario);
  sqa::AuctionOutcome outcome = sqa::run_auction(setup, bids);
  std::string report =
      sqa::write_report(sqa::make_report(scenario, setup, bids, outcome));
  if (report_path.empty()) {
    std::cout << report;
  } else {
    write_file(report_path, report);
  }
  return kExitOk;
}

int cmd_sweep(int prop, double eps_start, double eps_end, int steps,
              const std::string& out_path, int jobs) {
  const sqa::Prop which = prop == 2 ? sqa::Prop::kProp2 : sqa::Prop::kProp3;
  sqa::SweepResult result = sqa::epsilon_sweep(which, eps_start, eps_end, steps, jobs);
  write_file(out_path, sqa::write_sweep_csv(result.rows));

  auto print_flip = [](const char* name, const std::optional<double>& eps) {
    if (eps) {
      std::cout << name << " flips at eps = " << sqa::format_sig12(*eps) << "\n";
    } else {
      std::cout << name << " flip: none in range\n";
    }
  };
  std::cout << "sweep: prop " << prop << ", " << steps << " points in ["
            << sqa::format_sig12(eps_start) << ", " << sqa::format_sig12(eps_end)
            << "]\n";
  print_flip("value-gap (v1 > v2)", result.value_gap_flip);
  print_flip("utility-gap (U1 > U2)", result.utility_gap_flip);
  print_flip("pv-gap (PV2 > PV1)", result.pv_gap_flip);
  print_flip("winner-condition (winner = 2)", result.winner_change);
  return kExitOk;
}

int cmd_dominance(const std::string& scenario_path, std::optional<int> advertiser,
                  int grid_points, int profiles, std::uint64_t seed) {
  auto [setup, bids] = sqa::parse_scenario(read_file(scenario_path));
  (void)bids;  // dominance explores its own profiles
  std::vector<int> targets;
  if (advertiser) {
    setup.index_of(*advertiser);  // throws on an unknown id (usage error)
    targets.push_back(*advertiser);
  } else {
    for (const sqa::Advertiser& adv : setup.advertisers()) targets.push_back(adv.id);
  }

  sqa::SplitMix64 rng(seed);
  sqa::BidGrid grid = sqa::BidGrid::linear(setup, grid_points);
  std::vector<sqa::BidProfile> opponent_profiles =
      sqa::draw_bid_profiles(setup, profiles, rng);

  bool all_ok = true;
  for (int id : targets) {
    sqa::DominanceReport report =
        sqa::check_truthful_dominance(setup, id, grid, opponent_profiles);
    std::printf("advertiser %d: %s  profiles=%lld deviations=%lld max_violation=%.3g\n",
                report.advertiser_id, report.passed ? "dominant" : "VIOLATED",
                static_cast<long long>(report.profiles_tested),
                static_cast<long long>(report.deviations_tested), report.max_violation);
    all_ok = all_ok && report.passed;
  }
  return all_ok ? kExitOk : kExitPropertyFailure;
}

int cmd_verify(std::uint64_t seed, int scenarios) {
  sqa::VerifyOptions options;
  options.seed = seed;
  options.scenarios = scenarios;
  std::vector<sqa::CheckResult> results = sqa::run_verification(options);
  for (const sqa::CheckResult& result : results) {
    std::printf("%-22s %s  %s (%.2f s)\n", result.name.c_str(),
                result.passed ? "PASS" : "FAIL", result.detail.c_str(), result.seconds);
  }
  return sqa::all_passed(results) ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sponsored question-answering auction simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one auction from a scenario file");
  std::string scenario_path;
  std::string report_path;
  run->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
  run->add_option("--report", report_path, "write the report here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "exact epsilon sweep of a counterexample");
  int prop = 2;
  double eps_start = 0.01;
  double eps_end = 0.49;
  int steps = 97;
  int jobs = 0;
  std::string out_path;
  sweep->add_option("--prop", prop, "counterexample family")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  sweep->add_option("--eps-start", eps_start, "first epsilon (default 0.01)");
  sweep->add_option("--eps-end", eps_end, "last epsilon (default 0.49)");
  sweep->add_option("--steps", steps, "number of points (default 97)");
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--jobs", jobs, "worker threads, 0 = all cores");

  auto* dominance =
      app.add_subcommand("dominance", "search for profitable bid deviations");
  std::string dominance_scenario;
  int advertiser_flag = INT32_MIN;
  int grid_points = 101;
  int profiles = 50;
  std::uint64_t dominance_seed = 42;
  dominance->add_option("scenario", dominance_scenario, "scenario file (JSON)")->required();
  dominance->add_option("--advertiser", advertiser_flag,
                        "advertiser id to test (default: all)");
  dominance->add_option("--grid-points", grid_points, "bid grid size (default 101)")
      ->check(CLI::PositiveNumber);
  dominance->add_option("--profiles", profiles, "opponent profiles (default 50)")
      ->check(CLI::PositiveNumber);
  dominance->add_option("--seed", dominance_seed, "profile RNG seed")
      ->envname("SQA_SEED");

  auto* verify = app.add_subcommand("verify", "run the full self-check battery");
  std::uint64_t verify_seed = 42;
  int scenarios = 1000;
  verify->add_option("--seed", verify_seed, "scenario RNG seed")->envname("SQA_SEED");
  verify->add_option("--scenarios", scenarios, "random scenario count (default 1000)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_path, report_path);
    if (sweep->parsed()) return cmd_sweep(prop, eps_start, eps_end, steps, out_path, jobs);
    if (dominance->parsed()) {
      std::optional<int> advertiser;
      if (advertiser_flag != INT32_MIN) advertiser = advertiser_flag;
      return cmd_dominance(dominance_scenario, advertiser, grid_points, profiles,
                           dominance_seed);
    }
    if (verify->parsed()) return cmd_verify(verify_seed, scenarios);
  } catch (const sqa::ValidationError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const sqa::DomainError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
