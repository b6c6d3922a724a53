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

// Command-line front end: simulate, design, analyze, construct, experiment.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "brwalk/analytics.h"
#include "brwalk/constructions.h"
#include "brwalk/designs.h"
#include "brwalk/dynamics.h"
#include "brwalk/errors.h"
#include "brwalk/experiments.h"
#include "brwalk/game_io.h"
#include "brwalk/series.h"

namespace {

using brwalk::ValidationError;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

// "a:b:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  try {
    if (text.find(':') != std::string::npos) {
      std::stringstream in(text);
      std::string part;
      std::vector<double> p;
      while (std::getline(in, part, ':')) p.push_back(std::stod(part));
      if (p.size() != 3 || p[2] <= 0.0 || p[1] < p[0]) {
        throw ValidationError("grid must look like start:stop:step");
      }
      const int count = static_cast<int>(std::floor((p[1] - p[0]) / p[2] + 1e-9));
      for (int i = 0; i <= count; ++i) grid.push_back(std::min(p[0] + i * p[2], p[1]));
    } else {
      std::stringstream in(text);
      std::string part;
      while (std::getline(in, part, ',')) grid.push_back(std::stod(part));
    }
  } catch (const std::logic_error&) {
    throw ValidationError("cannot parse grid '" + text + "'");
  }
  if (grid.empty()) throw ValidationError("empty grid");
  return grid;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DesignFlags {
  std::string family = "one_round_bent";
  std::optional<double> C;
  int b = 1;
  std::optional<double> chi;
  std::optional<double> Q;

  void add(CLI::App* cmd, const std::string& default_family) {
    family = default_family;
    cmd->add_option("--design,--family", family,
                    "common_interest | one_round_bent | asymptotic_bent | "
                    "pareto_setcov")
        ->capture_default_str();
    cmd->add_option("--b", b, "bent parameter b")->capture_default_str();
    cmd->add_option("--chi", chi, "pareto parameter chi");
    cmd->add_option("--Q", Q, "pareto parameter Q = 1 / (1 + chi)");
  }

  brwalk::DesignSpec spec(std::optional<double> c) const {
    json doc{{"family", family}, {"b", b}};
    if (c) doc["C"] = *c;
    if (chi) doc["chi"] = *chi;
    if (Q) doc["Q"] = *Q;
    return brwalk::design_spec_from_json(doc);
  }
};

brwalk::TieBreak parse_tiebreak(const std::string& name, std::int64_t cap) {
  if (name == "incumbent_then_lex") return brwalk::tiebreak::IncumbentThenLex{};
  if (name == "lexicographic") return brwalk::tiebreak::Lexicographic{};
  if (name == "adversarial") return brwalk::tiebreak::Adversarial{cap};
  throw ValidationError("unknown tie break '" + name + "'");
}

brwalk::Scaling parse_scaling(const std::string& encoding, int bound) {
  if (encoding == "weighted") return {brwalk::BlockEncoding::kWeighted, bound};
  if (encoding == "replicated") return {brwalk::BlockEncoding::kReplicated, bound};
  throw ValidationError("encoding must be weighted or replicated");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw brwalk::IoError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-round best-response walks in resource allocation games"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a walk on a game");
  std::string game_path, k_text = "1", tb_name = "incumbent_then_lex",
                         schedule_text, sim_out;
  std::int64_t cap = 10'000'000;
  bool sim_apply_design = false;
  DesignFlags sim_design;
  std::optional<double> sim_C;
  simulate->add_option("--game", game_path, "game JSON")->required();
  simulate->add_option("--k", k_text, "rounds, or inf")->capture_default_str();
  simulate->add_option("--tiebreak", tb_name,
                       "incumbent_then_lex | lexicographic | adversarial")
      ->capture_default_str();
  simulate->add_option("--cap", cap, "adversarial state cap")->capture_default_str();
  simulate->add_option("--schedule", schedule_text,
                       "comma-separated 0-based turn order for one round");
  simulate->add_option("--out", sim_out, "trajectory JSONL (default stdout)");
  simulate->add_flag("--apply-design", sim_apply_design,
                     "replace the utilities by --design before walking");
  sim_design.add(simulate, "common_interest");
  simulate->add_option("--C", sim_C, "curvature for the design");

  // design
  auto* design_cmd = app.add_subcommand("design", "tabulate a utility rule");
  DesignFlags design_flags;
  design_flags.add(design_cmd, "one_round_bent");
  double design_C = 1.0;
  int jmax = 20;
  std::string welfare_name = "bent", design_format = "json", design_out;
  double p_d = 0.5;
  design_cmd->add_option("--C", design_C, "curvature")->capture_default_str();
  design_cmd->add_option("--jmax", jmax, "table length")->capture_default_str();
  design_cmd->add_option("--welfare", welfare_name,
                         "welfare family for common_interest: bent | "
                         "set_covering | wta | harmonic")
      ->capture_default_str();
  design_cmd->add_option("--p-d", p_d, "wta parameter")->capture_default_str();
  design_cmd->add_option("--format", design_format, "json | csv")->capture_default_str();
  design_cmd->add_option("--out", design_out, "output file (default stdout)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "efficiency bounds");
  std::string route = "closed-form", c_grid = "0:1:0.05", q_grid, k_kind = "1",
              bound_design = "optimal", analyze_out;
  int N = 8, jtrunc = 50;
  DesignFlags analyze_design;
  analyze_design.add(analyze, "one_round_bent");
  analyze->add_option("--route", route,
                      "closed-form | lp | one-round | frontier | bounds")
      ->capture_default_str();
  analyze->add_option("--C-grid", c_grid, "start:stop:step or list")->capture_default_str();
  analyze->add_option("--Q-grid", q_grid, "grid for the frontier route");
  analyze->add_option("--N", N, "agents for the LP route")->capture_default_str();
  analyze->add_option("--jtrunc", jtrunc, "index truncation")->capture_default_str();
  analyze->add_option("--k", k_kind, "bounds horizon: 1 | <k> | inf")->capture_default_str();
  analyze->add_option("--bound-design", bound_design,
                      "optimal | common_interest | asymptotic_at_one_round")
      ->capture_default_str();
  analyze->add_option("--out", analyze_out, "CSV file (default stdout)");

  // construct
  auto* construct = app.add_subcommand("construct", "worst-case game instances");
  std::string kind, construct_out, meta_out, encoding = "weighted";
  double eps = 0.1, construct_C = 1.0;
  int n = 3, base_size = 1, N1 = 3, N2 = 40, denominator_bound = 1000;
  DesignFlags construct_design;
  construct_design.add(construct, "one_round_bent");
  construct->add_option("--kind", kind,
                        "example3 | thm2 | ci_chain | stack_spread | matching")
      ->required();
  construct->add_option("--eps", eps, "example3 epsilon")->capture_default_str();
  construct->add_option("--C", construct_C, "curvature")->capture_default_str();
  construct->add_option("--n", n, "agents")->capture_default_str();
  construct->add_option("--base-size", base_size, "shared block size")->capture_default_str();
  construct->add_option("--N1", N1, "LP agents")->capture_default_str();
  construct->add_option("--N2", N2, "matching game agents")->capture_default_str();
  construct->add_option("--encoding", encoding, "weighted | replicated")->capture_default_str();
  construct->add_option("--denominator-bound", denominator_bound, "scaling bound")
      ->capture_default_str();
  construct->add_option("--out", construct_out, "game JSON")->required();
  construct->add_option("--meta", meta_out, "metadata JSON (default <out>.meta.json)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "random WTA experiment");
  std::string config_path, out_dir = ".", format = "csv";
  experiment->add_option("--config", config_path, "config JSON");
  experiment->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  experiment->add_option("--format", format, "csv | json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*simulate) {
      brwalk::Game g = brwalk::read_game(game_path);
      if (sim_apply_design) g = brwalk::apply_design(g, sim_design.spec(sim_C));
      const brwalk::TieBreak tb = parse_tiebreak(tb_name, cap);
      brwalk::Schedule schedule = brwalk::Schedule::RoundRobin(g.num_players());
      if (!schedule_text.empty()) {
        std::vector<int> order;
        for (double p : parse_grid(schedule_text)) order.push_back(static_cast<int>(p));
        schedule = brwalk::Schedule(std::move(order));
      }
      std::ostringstream jsonl;
      json summary;
      if (k_text == "inf") {
        if (std::holds_alternative<brwalk::tiebreak::Adversarial>(tb)) {
          const auto worst = brwalk::worst_reachable_equilibrium(g, schedule, cap);
          summary = {{"final", worst.state.choices()},
                     {"welfare", worst.welfare},
                     {"states_explored", worst.states_explored}};
        } else {
          const auto t = brwalk::walk_to_equilibrium(g, tb, schedule);
          brwalk::write_trajectory_jsonl(g, t, jsonl);
          summary = {{"final", t.final.choices()},
                     {"welfare", brwalk::welfare(g, t.final)},
                     {"steps", t.steps.size()}};
        }
      } else {
        int k = 0;
        try {
          k = std::stoi(k_text);
        } catch (const std::logic_error&) {
          throw ValidationError("--k must be a positive integer or inf");
        }
        const auto t = brwalk::k_round_walk(g, k, tb, schedule);
        brwalk::write_trajectory_jsonl(g, t, jsonl);
        summary = {{"final", t.final.choices()},
                   {"welfare", brwalk::welfare(g, t.final)},
                   {"steps", t.steps.size()}};
      }
      if (sim_out.empty()) {
        std::cout << jsonl.str();
        std::cerr << summary.dump() << '\n';
      } else {
        write_text(sim_out, jsonl.str());
        std::cout << summary.dump() << '\n';
      }
    } else if (*design_cmd) {
      brwalk::WelfareRule w = brwalk::make_welfare_rule(brwalk::family::Bent{design_flags.b, design_C}, jmax);
      if (welfare_name == "set_covering") {
        w = brwalk::make_welfare_rule(brwalk::family::SetCovering{}, jmax);
      } else if (welfare_name == "wta") {
        w = brwalk::make_welfare_rule(brwalk::family::Wta{p_d}, jmax);
      } else if (welfare_name == "harmonic") {
        w = brwalk::make_welfare_rule(brwalk::family::Harmonic{}, jmax);
      } else if (welfare_name != "bent") {
        throw ValidationError("unknown welfare family '" + welfare_name + "'");
      }
      const brwalk::UtilityRule f = brwalk::design_for(design_flags.spec(design_C), w);
      std::ostringstream text;
      if (design_format == "csv") {
        text << "j,f_j\n";
        for (int j = 1; j <= f.max_tabulated(); ++j) text << j << ',' << fmt(f(j)) << '\n';
      } else if (design_format == "json") {
        json values = json::array();
        for (int j = 1; j <= f.max_tabulated(); ++j) values.push_back(f(j));
        text << json{{"values", values}, {"tail_value", f.tail_value()}}.dump(2) << '\n';
      } else {
        throw ValidationError("--format must be json or csv");
      }
      write_text(design_out, text.str());
    } else if (*analyze) {
      std::ostringstream csv;
      csv << "parameter,value,truncation_flag\n";
      const auto row = [&](double p, double v, bool flag) {
        csv << fmt(p) << ',' << fmt(v) << ',' << (flag ? 1 : 0) << '\n';
      };
      if (route == "frontier") {
        const double top = 1.0 - 1.0 / brwalk::euler<double>();
        const std::vector<double> grid =
            q_grid.empty() ? parse_grid("0.5:" + fmt(top) + ":0.01") : parse_grid(q_grid);
        for (double q : grid) row(q, brwalk::frontier_setcov(q, jtrunc).one_round, false);
      } else {
        for (double C : parse_grid(c_grid)) {
          if (route == "bounds") {
            brwalk::HorizonKind hk = brwalk::horizon::One{};
            if (k_kind == "inf") {
              hk = brwalk::horizon::Infinity{};
            } else if (k_kind != "1") {
              hk = brwalk::horizon::Finite{std::stoi(k_kind)};
            }
            brwalk::BoundDesign bd = brwalk::BoundDesign::kOptimal;
            if (bound_design == "common_interest") {
              bd = brwalk::BoundDesign::kCommonInterest;
            } else if (bound_design == "asymptotic_at_one_round") {
              bd = brwalk::BoundDesign::kAsymptoticAtOneRound;
            } else if (bound_design != "optimal") {
              throw ValidationError("unknown --bound-design '" + bound_design + "'");
            }
            row(C, brwalk::theory_bounds(C, hk, bd), false);
            continue;
          }
          const int table = std::max(jtrunc, N) + 2;
          const brwalk::WelfareRule w =
              brwalk::make_welfare_rule(brwalk::family::Bent{1, C}, table);
          const brwalk::UtilityRule f = brwalk::design_for(analyze_design.spec(C), w);
          if (route == "closed-form") {
            const auto v = brwalk::poa_closed_form(w, f, brwalk::closed_form::Bent{jtrunc});
            row(C, v.value, v.truncated);
          } else if (route == "lp") {
            row(C, brwalk::poa_lp({w}, {f}, N), false);
          } else if (route == "one-round") {
            const auto v = brwalk::one_round_eff_bound(w, f, jtrunc);
            row(C, v.value, v.truncated);
          } else {
            throw ValidationError("unknown --route '" + route + "'");
          }
        }
      }
      write_text(analyze_out, csv.str());
    } else if (*construct) {
      const brwalk::Scaling scaling = parse_scaling(encoding, denominator_bound);
      std::optional<brwalk::Construction> c;
      if (kind == "example3") {
        c = brwalk::build_example3(eps);
      } else if (kind == "thm2") {
        const auto w = brwalk::make_welfare_rule(brwalk::family::Bent{1, construct_C}, 2);
        c = brwalk::build_thm2_game(construct_C,
                                    brwalk::design_for(construct_design.spec(construct_C), w),
                                    scaling);
      } else if (kind == "ci_chain") {
        c = brwalk::build_ci_chain(n, construct_C);
      } else if (kind == "stack_spread") {
        const auto w = brwalk::make_welfare_rule(brwalk::family::SetCovering{}, std::max(n, 2));
        c = brwalk::build_setcov_stack_spread(
            n, brwalk::design_for(construct_design.spec(1.0), w), base_size, scaling);
      } else if (kind == "matching") {
        const auto w = brwalk::make_welfare_rule(brwalk::family::SetCovering{}, 2 * N1 + 2);
        const auto f = brwalk::design_for(construct_design.spec(1.0), w);
        const auto lp = brwalk::build_poa_lp({w}, {f}, N1);
        const auto sol = brwalk::solve_poa_lp(lp);
        c = brwalk::build_poa_matching(lp, sol, {w}, {f}, N1, N2, scaling);
      } else {
        throw ValidationError("unknown --kind '" + kind + "'");
      }
      brwalk::write_game(c->game, construct_out);
      brwalk::write_json(brwalk::meta_to_json(c->meta),
                         meta_out.empty() ? construct_out + ".meta.json" : meta_out);
    } else if (*experiment) {
      brwalk::ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw brwalk::IoError("cannot open config '" + config_path + "'");
        json doc;
        try {
          in >> doc;
        } catch (const json::exception& e) {
          throw ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = brwalk::config_from_json(doc);
      }
      if (format != "csv" && format != "json") {
        throw ValidationError("--format must be csv or json");
      }
      const auto result = brwalk::run_experiment(cfg);
      brwalk::export_result(result,
                            format == "csv" ? brwalk::ExportFormat::kCsv
                                            : brwalk::ExportFormat::kJson,
                            out_dir);
    }
  } catch (const brwalk::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const brwalk::EnumerationCapError& e) {
    std::cerr << "enumeration cap: " << e.what() << " (final welfare in ["
              << e.lower_bound() << ", " << e.upper_bound() << "])\n";
    return kExitBudget;
  } catch (const brwalk::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
