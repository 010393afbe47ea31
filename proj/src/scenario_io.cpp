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

#include "sqa/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <set>

#include "json.hpp"

namespace sqa {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError("scenario: " + path + ": " + message);
}

double number_at(const Json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  return value.get<double>();
}

DocumentSource parse_document(const Json& value, const std::string& path) {
  DocumentSource source;
  if (value.is_string()) {
    source.text = value.get<std::string>();
    if (source.text.find_first_not_of(" \t\r\n\v\f") == std::string::npos) {
      fail(path, "text must contain at least one token");
    }
    return source;
  }
  if (value.is_object()) {
    source.is_counts = true;
    double total = 0.0;
    for (const auto& [token, count] : value.items()) {
      const double c = number_at(count, path + "." + token);
      if (!(c >= 0.0) || !std::isfinite(c)) fail(path + "." + token, "count must be nonnegative");
      source.counts.emplace_back(token, c);
      total += c;
    }
    if (!(total > 0.0)) fail(path, "counts must include at least one positive entry");
    return source;
  }
  fail(path, "expected text or a token count map");
}

void check_keys(const Json& object, const std::set<std::string>& allowed,
                const std::string& path) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) fail(path + "." + item.key(), "unknown field");
  }
}

Json document_to_json(const DocumentSource& source) {
  if (!source.is_counts) return source.text;
  Json counts = Json::object();
  for (const auto& [token, count] : source.counts) {
    counts[token] = std::stod(format_sig12(count));
  }
  return counts;
}

double round_sig12(double value) { return std::stod(format_sig12(value)); }

}  // namespace

std::string format_sig12(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

ScenarioFile parse_scenario_file(const std::string& source) {
  Json root = Json::parse(source, nullptr, false);
  if (root.is_discarded()) throw ValidationError("scenario: not valid JSON");
  if (!root.is_object()) fail("$", "top level must be an object");
  check_keys(root, {"question", "organic_answer", "advertisers", "smoothing_mu", "options"},
             "$");

  ScenarioFile scenario;
  if (!root.contains("question")) fail("question", "missing");
  scenario.question = parse_document(root["question"], "question");
  if (!root.contains("organic_answer")) fail("organic_answer", "missing");
  scenario.organic_answer = parse_document(root["organic_answer"], "organic_answer");

  if (!root.contains("advertisers") || !root["advertisers"].is_array()) {
    fail("advertisers", "expected a list");
  }
  std::set<int> seen_ids;
  int index = 0;
  for (const Json& entry : root["advertisers"]) {
    const std::string path = "advertisers[" + std::to_string(index) + "]";
    if (!entry.is_object()) fail(path, "expected an object");
    check_keys(entry, {"id", "ad", "lambda", "bid"}, path);
    ScenarioAdvertiser advertiser;

    if (!entry.contains("id") || !entry["id"].is_number_integer()) {
      fail(path + ".id", "expected an integer");
    }
    advertiser.id = entry["id"].get<int>();
    if (!seen_ids.insert(advertiser.id).second) fail(path + ".id", "duplicate advertiser id");

    if (!entry.contains("ad")) fail(path + ".ad", "missing");
    advertiser.ad = parse_document(entry["ad"], path + ".ad");

    if (!entry.contains("lambda")) fail(path + ".lambda", "missing");
    advertiser.lambda = number_at(entry["lambda"], path + ".lambda");
    if (!(advertiser.lambda >= 0.0 && advertiser.lambda <= 1.0)) {
      fail(path + ".lambda", "must lie in [0, 1] (advertiser id " +
                                 std::to_string(advertiser.id) + ")");
    }

    if (!entry.contains("bid")) fail(path + ".bid", "missing");
    const Json& bid = entry["bid"];
    if (bid.is_string()) {
      if (bid.get<std::string>() != "truthful") {
        fail(path + ".bid", "expected \"truthful\" or a nonnegative number");
      }
    } else {
      const double fixed = number_at(bid, path + ".bid");
      if (!(fixed >= 0.0) || !std::isfinite(fixed)) {
        fail(path + ".bid", "fixed bids must be finite and nonnegative");
      }
      advertiser.fixed_bid = fixed;
    }
    scenario.advertisers.push_back(std::move(advertiser));
    ++index;
  }
  if (scenario.advertisers.size() < 2) fail("advertisers", "at least two advertisers required");

  if (root.contains("smoothing_mu")) {
    scenario.smoothing_mu = number_at(root["smoothing_mu"], "smoothing_mu");
    if (!(scenario.smoothing_mu >= 0.0 && scenario.smoothing_mu < 1.0)) {
      fail("smoothing_mu", "must lie in [0, 1)");
    }
  }
  if (root.contains("options")) {
    const Json& options = root["options"];
    if (!options.is_object()) fail("options", "expected an object");
    check_keys(options, {"clamp_payment_at_zero"}, "options");
    if (options.contains("clamp_payment_at_zero")) {
      if (!options["clamp_payment_at_zero"].is_boolean()) {
        fail("options.clamp_payment_at_zero", "expected a boolean");
      }
      scenario.options.clamp_payment_at_zero = options["clamp_payment_at_zero"].get<bool>();
    }
  }
  return scenario;
}

std::string write_scenario_file(const ScenarioFile& scenario) {
  Json root = Json::object();
  root["question"] = document_to_json(scenario.question);
  root["organic_answer"] = document_to_json(scenario.organic_answer);
  root["advertisers"] = Json::array();
  for (const ScenarioAdvertiser& advertiser : scenario.advertisers) {
    Json entry = Json::object();
    entry["id"] = advertiser.id;
    entry["ad"] = document_to_json(advertiser.ad);
    entry["lambda"] = round_sig12(advertiser.lambda);
    if (advertiser.fixed_bid) {
      entry["bid"] = round_sig12(*advertiser.fixed_bid);
    } else {
      entry["bid"] = "truthful";
    }
    root["advertisers"].push_back(std::move(entry));
  }
  root["smoothing_mu"] = round_sig12(scenario.smoothing_mu);
  root["options"] = Json{{"clamp_payment_at_zero", scenario.options.clamp_payment_at_zero}};
  return root.dump(2) + "\n";
}

namespace {

Document realize_document(const DocumentSource& source,
                          const std::shared_ptr<Vocabulary>& vocab,
                          const std::string& path) {
  if (!source.is_counts) return tokenize(source.text, vocab);
  std::vector<std::pair<int, double>> ids;
  ids.reserve(source.counts.size());
  for (const auto& [token, count] : source.counts) ids.emplace_back(vocab->add(token), count);
  std::vector<double> dense(static_cast<size_t>(vocab->size()), 0.0);
  for (const auto& [id, count] : ids) dense[static_cast<size_t>(id)] += count;
  try {
    return Document(vocab, std::move(dense));
  } catch (const ValidationError& error) {
    throw ValidationError("scenario: " + path + ": " + error.what());
  }
}

}  // namespace

std::pair<AuctionSetup, BidProfile> build_setup(const ScenarioFile& scenario) {
  // One shared vocabulary across every text, so all models live over the
  // same support universe.
  auto vocab = std::make_shared<Vocabulary>();
  Document question = realize_document(scenario.question, vocab, "question");
  Document organic = realize_document(scenario.organic_answer, vocab, "organic_answer");
  std::vector<std::pair<ScenarioAdvertiser, Document>> ads;
  for (size_t i = 0; i < scenario.advertisers.size(); ++i) {
    const ScenarioAdvertiser& advertiser = scenario.advertisers[i];
    ads.emplace_back(advertiser,
                     realize_document(advertiser.ad, vocab,
                                      "advertisers[" + std::to_string(i) + "].ad"));
  }

  std::vector<AdvertiserSpec> specs;
  specs.reserve(ads.size());
  for (auto& [advertiser, ad] : ads) {
    specs.push_back({advertiser.id, std::move(ad), FusionWeight{advertiser.lambda}});
  }
  AuctionSetup setup(std::move(question), std::move(organic), std::move(specs),
                     SmoothingConfig{scenario.smoothing_mu}, scenario.options);

  BidProfile bids;
  bids.bids.reserve(scenario.advertisers.size());
  for (size_t i = 0; i < scenario.advertisers.size(); ++i) {
    const ScenarioAdvertiser& advertiser = scenario.advertisers[i];
    bids.bids.push_back(advertiser.fixed_bid ? *advertiser.fixed_bid
                                             : setup.advertiser_at(static_cast<int>(i)).value);
  }
  return {std::move(setup), std::move(bids)};
}

std::pair<AuctionSetup, BidProfile> parse_scenario(const std::string& source) {
  return build_setup(parse_scenario_file(source));
}

ReportRecord make_report(const ScenarioFile& scenario, const AuctionSetup& setup,
                         const BidProfile& bids, const AuctionOutcome& outcome) {
  ReportRecord record;
  record.scenario = scenario;
  record.shift_a = setup.ctx().shift_a;
  record.outcome = outcome;
  for (int i = 0; i < setup.size(); ++i) {
    const Advertiser& adv = setup.advertiser_at(i);
    record.advertiser_ids.push_back(adv.id);
    AdvertiserBreakdown breakdown;
    breakdown.id = adv.id;
    breakdown.bid = bids.bids[static_cast<size_t>(i)];
    breakdown.ce_sponsored_ad = cross_entropy(adv.sponsored_model, adv.ad_model).nats();
    breakdown.ce_ad_sponsored = cross_entropy(adv.ad_model, adv.sponsored_model).nats();
    breakdown.ce_sponsored_organic =
        cross_entropy(adv.sponsored_model, setup.organic_model()).nats();
    breakdown.ce_organic_sponsored =
        cross_entropy(setup.organic_model(), adv.sponsored_model).nats();
    record.breakdown.push_back(breakdown);
  }
  return record;
}

std::string write_report(const ReportRecord& record) {
  Json root = Json::object();
  root["scenario"] = Json::parse(write_scenario_file(record.scenario));
  root["shift_a"] = round_sig12(record.shift_a);

  Json outcome = Json::object();
  outcome["winner_id"] = record.outcome.winner_id;
  outcome["second_id"] = record.outcome.second_id;
  outcome["payment"] = round_sig12(record.outcome.payment);
  outcome["negative_payment_flag"] = record.outcome.negative_payment_flag;
  outcome["social_welfare_winner"] = round_sig12(record.outcome.social_welfare_winner);
  outcome["social_welfare_second"] = round_sig12(record.outcome.social_welfare_second);
  outcome["social_welfare_gap"] = round_sig12(record.outcome.social_welfare_winner -
                                              record.outcome.social_welfare_second);
  root["outcome"] = std::move(outcome);

  Json advertisers = Json::array();
  for (size_t i = 0; i < record.advertiser_ids.size(); ++i) {
    const AdvertiserBreakdown& breakdown = record.breakdown[i];
    Json entry = Json::object();
    entry["id"] = record.advertiser_ids[i];
    entry["bid"] = round_sig12(breakdown.bid);
    entry["value"] = round_sig12(record.outcome.value[i]);
    entry["user_utility"] = round_sig12(record.outcome.user_utility[i]);
    entry["platform_value"] = round_sig12(record.outcome.platform_value[i]);
    entry["utility"] = round_sig12(record.outcome.utility[i]);
    entry["ce_sponsored_ad"] = round_sig12(breakdown.ce_sponsored_ad);
    entry["ce_ad_sponsored"] = round_sig12(breakdown.ce_ad_sponsored);
    entry["ce_sponsored_organic"] = round_sig12(breakdown.ce_sponsored_organic);
    entry["ce_organic_sponsored"] = round_sig12(breakdown.ce_organic_sponsored);
    advertisers.push_back(std::move(entry));
  }
  root["advertisers"] = std::move(advertisers);
  return root.dump(2) + "\n";
}

std::string write_sweep_csv(std::span<const SweepRow> rows) {
  if (rows.empty()) throw ValidationError("write_sweep_csv: no rows");
  std::string csv = "epsilon,value_gap,utility_gap,pv_gap,winner,payment\n";
  for (const SweepRow& row : rows) {
    csv += format_sig12(row.epsilon);
    csv += ',';
    csv += format_sig12(row.value_gap);
    csv += ',';
    csv += format_sig12(row.utility_gap);
    csv += ',';
    csv += format_sig12(row.pv_gap);
    csv += ',';
    csv += std::to_string(row.winner);
    csv += ',';
    csv += format_sig12(row.payment);
    csv += '\n';
  }
  return csv;
}

}  // namespace sqa
