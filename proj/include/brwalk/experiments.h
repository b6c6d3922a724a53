// Copyright 2026 The brwalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BRWALK_EXPERIMENTS_H_
#define BRWALK_EXPERIMENTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "brwalk/designs.h"
#include "brwalk/game.h"

namespace brwalk {

// What the per-round welfare is divided by.
//   kExact:      the exact optimum of the instance.
//   kUpperBound: sum_r v_r w_r(reach_r), an upper bound on the optimum that
//                needs no search. Normalized values are then approximate
//                (too low), and meant for instances too large for kExact.
enum class Normalizer { kExact, kUpperBound };

struct ExperimentConfig {
  int n_agents = 10;
  int n_targets = 15;
  double p_d = 0.5;
  int actions_per_agent = 2;
  int action_width = 2;
  int n_instances = 100;
  int rounds = 5;
  std::vector<DesignSpec> designs = {design::CommonInterest{},
                                     design::OneRoundBent{},
                                     design::AsymptoticBent{}};
  std::uint64_t master_seed = 1;
  Normalizer normalizer = Normalizer::kExact;
  // Largest joint-action space for which kExact is accepted.
  double exact_budget = 1e8;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// {"family": "common_interest" | "one_round_bent" | "asymptotic_bent" |
//  "pareto_setcov", "C", "b", "chi", "Q"}.
DesignSpec design_spec_from_json(const nlohmann::json& doc);
nlohmann::json design_spec_to_json(const DesignSpec& spec);

// Instance `index`: wta(p_d) targets with values drawn uniformly from [0, 1]
// and divided by their sum; each agent gets `actions_per_agent` windows of
// `action_width` consecutive targets (wrapping around) with distinct starts.
// The utility rules are common interest until a design is applied.
Game gen_wta(const ExperimentConfig& cfg, int index);

struct ExperimentRow {
  int instance = 0;
  std::string design;
  int round = 0;
  double welfare = 0.0;
  double normalized_welfare = 0.0;
};

struct SummaryRow {
  std::string design;
  int round = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<SummaryRow> summary;
};

// Quantile with linear interpolation between order statistics
// (position (n - 1) p).
double quantile(std::vector<double> values, double p);

// Per (design, round) statistics of normalized_welfare, in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows);

// Runs every instance under every design with incumbent-then-lex ties.
// Instances run on BRWALK_THREADS worker threads (default: hardware
// concurrency); the result does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class ExportFormat { kCsv, kJson };

// Writes welfare.{csv,json} and summary.{csv,json} into `dir`.
void export_result(const ExperimentResult& res, ExportFormat format,
                   const std::string& dir);
// Reads welfare.csv and summary.csv back.
ExperimentResult import_csv(const std::string& dir);

}  // namespace brwalk

#endif  // BRWALK_EXPERIMENTS_H_
