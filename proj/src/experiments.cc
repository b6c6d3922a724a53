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

#include "brwalk/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <mutex>
#include <sstream>
#include <thread>

#include "brwalk/dynamics.h"
#include "brwalk/errors.h"

namespace brwalk {
namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// mt19937_64 with explicit raw-bit conversions: 53-bit uniforms and
// rejection-sampled integers.
class InstanceRng {
 public:
  InstanceRng(std::uint64_t master_seed, int index) {
    std::uint64_t state = master_seed ^ (0xd1b54a32d192ed03ull *
                                         (static_cast<std::uint64_t>(index) + 1));
    engine_.seed(splitmix64(state));
  }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, n) by rejection.
  int below(int n) {
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int>(x % range);
  }

 private:
  std::mt19937_64 engine_;
};

int thread_count() {
  if (const char* env = std::getenv("BRWALK_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

double upper_bound(const Game& g) {
  double total = 0.0;
  for (int r = 0; r < g.num_resources(); ++r) {
    total += g.resource_welfare(r, g.reach(r));
  }
  return total;
}

std::vector<ExperimentRow> run_instance(const ExperimentConfig& cfg, int index) {
  const Game base = gen_wta(cfg, index);
  const double denominator = cfg.normalizer == Normalizer::kExact
                                 ? optimum(base).welfare
                                 : upper_bound(base);
  std::vector<ExperimentRow> rows;
  for (const DesignSpec& spec : cfg.designs) {
    const Game g = apply_design(base, spec);
    const Trajectory t = k_round_walk(g, cfg.rounds, tiebreak::IncumbentThenLex{});
    for (int round = 1; round <= cfg.rounds; ++round) {
      const double w = t.steps[round * g.num_players() - 1].welfare;
      rows.push_back(ExperimentRow{index, design_name(spec), round, w,
                                   denominator > 0.0 ? w / denominator : 1.0});
    }
  }
  return rows;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_agents < 1) throw ValidationError("n_agents must be >= 1");
  if (n_targets < 1) throw ValidationError("n_targets must be >= 1");
  if (!(p_d > 0.0 && p_d <= 1.0)) throw ValidationError("p_d must lie in (0, 1]");
  if (actions_per_agent < 1 || actions_per_agent > n_targets) {
    throw ValidationError("actions_per_agent must lie in [1, n_targets]");
  }
  if (action_width < 1 || action_width > n_targets) {
    throw ValidationError("action_width must lie in [1, n_targets]");
  }
  if (n_instances < 0) throw ValidationError("n_instances must be >= 0");
  if (rounds < 1) throw ValidationError("rounds must be >= 1");
  if (designs.empty()) throw ValidationError("no designs given");
  if (normalizer == Normalizer::kExact &&
      n_agents * std::log(actions_per_agent + 1.0) > std::log(exact_budget)) {
    std::ostringstream out;
    out << "exact optimum over " << actions_per_agent + 1 << "^" << n_agents
        << " joint actions exceeds the budget of " << exact_budget
        << "; reduce n_agents or use the upper_bound normalizer";
    throw BudgetError(out.str());
  }
}

DesignSpec design_spec_from_json(const json& doc) {
  const std::string fam = doc.at("family").get<std::string>();
  std::optional<double> C;
  if (doc.contains("C") && !doc.at("C").is_null()) C = doc.at("C").get<double>();
  if (fam == "common_interest") return design::CommonInterest{};
  if (fam == "one_round_bent" || fam == "one_round") return design::OneRoundBent{C};
  if (fam == "asymptotic_bent" || fam == "asymptotic") {
    return design::AsymptoticBent{doc.value("b", 1), C};
  }
  if (fam == "pareto_setcov" || fam == "pareto") {
    if (doc.contains("Q")) return design::ParetoSetcov::FromQ(doc.at("Q").get<double>());
    return design::ParetoSetcov{doc.value("chi", 1.0)};
  }
  throw ValidationError("unknown design family '" + fam + "'");
}

json design_spec_to_json(const DesignSpec& spec) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, design::CommonInterest>) {
          return json{{"family", "common_interest"}};
        } else if constexpr (std::is_same_v<T, design::OneRoundBent>) {
          json out{{"family", "one_round_bent"}};
          if (d.C) out["C"] = *d.C;
          return out;
        } else if constexpr (std::is_same_v<T, design::AsymptoticBent>) {
          json out{{"family", "asymptotic_bent"}, {"b", d.b}};
          if (d.C) out["C"] = *d.C;
          return out;
        } else {
          return json{{"family", "pareto_setcov"}, {"chi", d.chi}};
        }
      },
      spec);
}

ExperimentConfig config_from_json(const json& doc) {
  try {
    ExperimentConfig cfg;
    cfg.n_agents = doc.value("n_agents", cfg.n_agents);
    cfg.n_targets = doc.value("n_targets", cfg.n_targets);
    cfg.p_d = doc.value("p_d", cfg.p_d);
    cfg.actions_per_agent = doc.value("actions_per_agent", cfg.actions_per_agent);
    cfg.action_width = doc.value("action_width", cfg.action_width);
    cfg.n_instances = doc.value("n_instances", cfg.n_instances);
    cfg.rounds = doc.value("rounds", cfg.rounds);
    cfg.master_seed = doc.value("master_seed", cfg.master_seed);
    cfg.exact_budget = doc.value("exact_budget", cfg.exact_budget);
    if (doc.contains("designs")) {
      cfg.designs.clear();
      for (const json& d : doc.at("designs")) cfg.designs.push_back(design_spec_from_json(d));
    }
    const std::string norm = doc.value("normalizer", "exact");
    if (norm == "exact") {
      cfg.normalizer = Normalizer::kExact;
    } else if (norm == "upper_bound") {
      cfg.normalizer = Normalizer::kUpperBound;
    } else {
      throw ValidationError("normalizer must be \"exact\" or \"upper_bound\"");
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed experiment config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json designs = json::array();
  for (const DesignSpec& d : cfg.designs) designs.push_back(design_spec_to_json(d));
  return json{{"n_agents", cfg.n_agents},
              {"n_targets", cfg.n_targets},
              {"p_d", cfg.p_d},
              {"actions_per_agent", cfg.actions_per_agent},
              {"action_width", cfg.action_width},
              {"n_instances", cfg.n_instances},
              {"rounds", cfg.rounds},
              {"master_seed", cfg.master_seed},
              {"exact_budget", cfg.exact_budget},
              {"normalizer",
               cfg.normalizer == Normalizer::kExact ? "exact" : "upper_bound"},
              {"designs", std::move(designs)}};
}

Game gen_wta(const ExperimentConfig& cfg, int index) {
  cfg.validate();
  InstanceRng rng(cfg.master_seed, index);
  std::vector<double> values(cfg.n_targets);
  double total = 0.0;
  for (double& v : values) {
    v = rng.uniform01();
    total += v;
  }
  std::vector<Resource> resources;
  for (int t = 0; t < cfg.n_targets; ++t) {
    resources.push_back(Resource{"t" + std::to_string(t), 0, 0, values[t] / total});
  }
  std::vector<std::vector<Action>> sets(cfg.n_agents);
  std::vector<int> starts(cfg.n_targets);
  for (int i = 0; i < cfg.n_agents; ++i) {
    for (int t = 0; t < cfg.n_targets; ++t) starts[t] = t;
    for (int k = 0; k < cfg.actions_per_agent; ++k) {
      std::swap(starts[k], starts[k + rng.below(cfg.n_targets - k)]);
      Action window;
      for (int d = 0; d < cfg.action_width; ++d) {
        window.push_back((starts[k] + d) % cfg.n_targets);
      }
      sets[i].push_back(std::move(window));
    }
  }
  const WelfareRule w = make_welfare_rule(family::Wta{cfg.p_d}, cfg.n_agents);
  return Game({w}, {design_common_interest(w)}, std::move(resources), std::move(sets));
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (values.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows) {
  std::vector<std::pair<std::string, int>> keys;
  std::vector<std::vector<double>> samples;
  for (const ExperimentRow& r : rows) {
    const auto key = std::make_pair(r.design, r.round);
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      samples.emplace_back();
      it = keys.end() - 1;
    }
    samples[it - keys.begin()].push_back(r.normalized_welfare);
  }
  std::vector<SummaryRow> out;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto& s = samples[k];
    out.push_back(SummaryRow{keys[k].first, keys[k].second,
                             *std::min_element(s.begin(), s.end()),
                             quantile(s, 0.25), quantile(s, 0.5),
                             quantile(s, 0.75),
                             *std::max_element(s.begin(), s.end())});
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<ExperimentRow>> per_instance(cfg.n_instances);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < cfg.n_instances; i = next++) {
      try {
        per_instance[i] = run_instance(cfg, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::min(thread_count(), std::max(cfg.n_instances, 1));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ExperimentResult res;
  for (auto& rows : per_instance) {
    res.rows.insert(res.rows.end(), rows.begin(), rows.end());
  }
  res.summary = summarize(res.rows);
  return res;
}

void export_result(const ExperimentResult& res, ExportFormat format,
                   const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  if (format == ExportFormat::kCsv) {
    std::ofstream rows = open_out(dir + "/welfare.csv");
    rows << "instance,design,round,welfare,normalized_welfare\n";
    for (const ExperimentRow& r : res.rows) {
      rows << r.instance << ',' << r.design << ',' << r.round << ','
           << format_double(r.welfare) << ',' << format_double(r.normalized_welfare)
           << '\n';
    }
    std::ofstream summary = open_out(dir + "/summary.csv");
    summary << "design,round,min,q1,median,q3,max\n";
    for (const SummaryRow& s : res.summary) {
      summary << s.design << ',' << s.round << ',' << format_double(s.min) << ','
              << format_double(s.q1) << ',' << format_double(s.median) << ','
              << format_double(s.q3) << ',' << format_double(s.max) << '\n';
    }
    if (!rows || !summary) throw IoError("write failed in '" + dir + "'");
    return;
  }
  json rows = json::array();
  for (const ExperimentRow& r : res.rows) {
    rows.push_back(json{{"instance", r.instance},
                        {"design", r.design},
                        {"round", r.round},
                        {"welfare", r.welfare},
                        {"normalized_welfare", r.normalized_welfare}});
  }
  json summary = json::array();
  for (const SummaryRow& s : res.summary) {
    summary.push_back(json{{"design", s.design}, {"round", s.round},
                           {"min", s.min},       {"q1", s.q1},
                           {"median", s.median}, {"q3", s.q3},
                           {"max", s.max}});
  }
  std::ofstream rows_out = open_out(dir + "/welfare.json");
  rows_out << rows.dump(1) << '\n';
  std::ofstream summary_out = open_out(dir + "/summary.json");
  summary_out << summary.dump(1) << '\n';
  if (!rows_out || !summary_out) throw IoError("write failed in '" + dir + "'");
}

ExperimentResult import_csv(const std::string& dir) {
  ExperimentResult res;
  const auto read_lines = [](const std::string& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != header) {
      throw ValidationError("'" + path + "' does not start with " + header);
    }
    std::vector<std::vector<std::string>> cells;
    while (std::getline(in, line)) {
      if (!line.empty()) cells.push_back(split_csv(line));
    }
    return cells;
  };
  try {
    for (const auto& c : read_lines(dir + "/welfare.csv",
                                    "instance,design,round,welfare,normalized_welfare")) {
      if (c.size() != 5) throw ValidationError("welfare.csv row has wrong arity");
      res.rows.push_back(ExperimentRow{std::stoi(c[0]), c[1], std::stoi(c[2]),
                                       std::stod(c[3]), std::stod(c[4])});
    }
    for (const auto& c :
         read_lines(dir + "/summary.csv", "design,round,min,q1,median,q3,max")) {
      if (c.size() != 7) throw ValidationError("summary.csv row has wrong arity");
      res.summary.push_back(SummaryRow{c[0], std::stoi(c[1]), std::stod(c[2]),
                                       std::stod(c[3]), std::stod(c[4]),
                                       std::stod(c[5]), std::stod(c[6])});
    }
  } catch (const std::logic_error& e) {
    throw ValidationError(std::string("unparsable number in '") + dir + "': " + e.what());
  }
  return res;
}

}  // namespace brwalk
