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

#include <vector>

namespace sqa {

/// Raw inputs for the re-derivation path: plain count vectors, one lambda
/// per advertiser, optional bids (empty means truthful).
struct OracleInput {
  /// doc_counts[0] is the organic answer, doc_counts[1..n] the ads; all over
  /// the same implicit token ids.
  std::vector<std::vector<double>> doc_counts;
  std::vector<double> lambdas;
  std::vector<double> bids;
  double mu = 0.0;
};

struct OracleOutcome {
  int winner_index = -1;  // 0-based advertiser index
  int second_index = -1;
  double payment = 0.0;
  double shift_a = 0.0;
  std::vector<double> values;
  std::vector<double> user_utils;
  std::vector<double> platform_values;
};

/// Recomputes the whole auction from raw counts with straight loops and full
/// enumeration. Deliberately shares no code with the main pipeline so the
/// two can be tested against each other.
OracleOutcome oracle_winner_bruteforce(const OracleInput& input);

}  // namespace sqa
