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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqa/auction.hpp"
#include "sqa/game_analysis.hpp"

namespace sqa {

/// A document as it appears in a scenario file: raw text, or an explicit
/// token -> count map (counts may be fractional) in file order.
struct DocumentSource {
  bool is_counts = false;
  std::string text;
  std::vector<std::pair<std::string, double>> counts;
};

struct ScenarioAdvertiser {
  int id = 0;
  DocumentSource ad;
  double lambda = 0.5;
  /// Empty means truthful: the bid resolves to the derived value.
  std::optional<double> fixed_bid;
};

/// Parsed scenario file, prior to model induction.
struct ScenarioFile {
  DocumentSource question;
  DocumentSource organic_answer;
  std::vector<ScenarioAdvertiser> advertisers;
  double smoothing_mu = 0.0;
  AuctionOptions options{};
};

/// Parses and validates a scenario document. Every failure names the
/// offending field.
ScenarioFile parse_scenario_file(const std::string& source);

/// Canonical serialization; parse(write(s)) reproduces s field for field at
/// 12-significant-digit precision.
std::string write_scenario_file(const ScenarioFile& scenario);

/// Induces all models over the union vocabulary of the scenario's texts,
/// builds the setup and resolves truthful bids to values.
std::pair<AuctionSetup, BidProfile> build_setup(const ScenarioFile& scenario);

std::pair<AuctionSetup, BidProfile> parse_scenario(const std::string& source);

/// Both cross-entropy terms behind each advertiser's value and user utility.
struct AdvertiserBreakdown {
  int id = 0;
  double bid = 0.0;
  double ce_sponsored_ad = 0.0;
  double ce_ad_sponsored = 0.0;
  double ce_sponsored_organic = 0.0;
  double ce_organic_sponsored = 0.0;
};

struct ReportRecord {
  ScenarioFile scenario;
  double shift_a = 0.0;
  std::vector<int> advertiser_ids;  // order of the outcome's per-advertiser data
  AuctionOutcome outcome;
  std::vector<AdvertiserBreakdown> breakdown;
};

ReportRecord make_report(const ScenarioFile& scenario, const AuctionSetup& setup,
                         const BidProfile& bids, const AuctionOutcome& outcome);

/// Deterministic key order; all numbers carry 12 significant digits.
std::string write_report(const ReportRecord& record);

/// Header `epsilon,value_gap,utility_gap,pv_gap,winner,payment`, one row per
/// epsilon, LF endings, 12 significant digits.
std::string write_sweep_csv(std::span<const SweepRow> rows);

/// %.12g formatting; stable across platforms for golden files.
std::string format_sig12(double value);

}  // namespace sqa
