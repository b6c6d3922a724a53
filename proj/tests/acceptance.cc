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

// Acceptance gate: one PASS/FAIL line per criterion.
//
//   brwalk_acceptance [--criterion N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "CLI11.hpp"

#include "brwalk/analytics.h"
#include "brwalk/constructions.h"
#include "brwalk/designs.h"
#include "brwalk/dynamics.h"
#include "brwalk/experiments.h"
#include "brwalk/game.h"
#include "random_games.h"

namespace brwalk {
namespace {

const double kE = std::exp(1.0);

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
  }
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double adversarial_efficiency(const Game& g, int k) {
  return efficiency(g, Horizon::Rounds(k), tiebreak::Adversarial{});
}

Outcome example_three() {
  Outcome out;
  const Game ci = build_example3(0.1).game;
  const Trajectory t = walk_to_equilibrium(ci, tiebreak::IncumbentThenLex{},
                                           Schedule::RoundRobin(2));
  const double w_ci = welfare(ci, t.final);
  out.check(std::abs(w_ci - 1.2) <= 1e-12, "common interest limit welfare " + num(w_ci));
  Eigen::VectorXd cumulative(2);
  cumulative << 1.0, 1.5;
  const Eigen::VectorXd f = convert_rule(Conversion::kToMarginal, cumulative);
  const Game g = build_example3(0.1, UtilityRule(f, f[1])).game;
  const Trajectory u = walk_to_equilibrium(g, tiebreak::IncumbentThenLex{},
                                           Schedule::RoundRobin(2));
  const double w_f = welfare(g, u.final);
  out.check(std::abs(w_f - 2.1) <= 1e-12, "w~=[1,1.5] limit welfare " + num(w_f));
  return out;
}

Outcome optimal_design_table() {
  Outcome out;
  for (double C : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Construction c = build_thm2_game(C, design_one_round_bent(C, 2));
    for (int k = 1; k <= 3; ++k) {
      const double eff = adversarial_efficiency(c.game, k);
      out.check(std::abs(eff - (1.0 - C / 2.0)) <= 1e-9,
                "C=" + num(C) + " k=" + std::to_string(k) + " case " + c.meta.case_label +
                    " efficiency " + num(eff) + " target " + num(1.0 - C / 2.0));
    }
  }
  return out;
}

Outcome common_interest_chain() {
  Outcome out;
  const int n = 200;
  for (double C : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Construction c = build_ci_chain(n, C);
    const double eff = adversarial_efficiency(c.game, 1);
    const double limit = 1.0 / (1.0 + C);
    const double formula = n / ((n - 1) * (1.0 + C) + C);
    out.check(std::abs(eff - limit) <= 0.01,
              "C=" + num(C) + " efficiency " + num(eff) + " vs 1/(1+C) " + num(limit));
    out.check(std::abs(eff - formula) <= 1e-9,
              "C=" + num(C) + " efficiency " + num(eff) + " vs n/((n-1)(1+C)+C) " +
                  num(formula));
  }
  return out;
}

Outcome asymptotic_poa() {
  Outcome out;
  const WelfareRule sc = make_welfare_rule(family::SetCovering{}, 60);
  const UtilityRule f_inf = design_asymptotic(1, 1.0, 60);
  const double v = poa_closed_form(sc, f_inf, closed_form::Setcov{50}).value;
  out.check(std::abs(v - (1.0 - 1.0 / kE)) <= 1e-6, "setcov(50) closed form " + num(v));
  const UtilityRule f_ci = design_common_interest(sc);
  for (int N = 2; N <= 8; ++N) {
    for (const auto& [name, f] : {std::pair{"asymptotic", f_inf}, std::pair{"common_interest", f_ci}}) {
      const double lp = poa_lp({sc}, {f}, N);
      const double cf = poa_closed_form(sc, f, closed_form::Setcov{N}).value;
      out.check(std::abs(lp - cf) <= 1e-6, std::string(name) + " N=" + std::to_string(N) +
                                               " lp " + num(lp) + " closed form " + num(cf));
    }
  }
  return out;
}

Outcome frontier_endpoints() {
  Outcome out;
  const double low = frontier_setcov(0.5, 1000).one_round;
  out.check(low == 0.5, "Q=1/2 value " + num(low));
  const double top = 1.0 - 1.0 / kE;
  double previous = 1.0;
  for (int J : {1000, 10000, 100000}) {
    const double v = frontier_setcov(top, J).one_round;
    out.check(v < previous, "Q=1-1/e J=" + std::to_string(J) + " value " + num(v));
    previous = v;
  }
  out.check(previous <= 0.15, "Q=1-1/e J=1e5 at most 0.15");
  return out;
}

Outcome one_round_bounds() {
  Outcome out;
  for (int k = 0; k <= 20; ++k) {
    const double C = 0.05 * k;
    const WelfareRule w = make_welfare_rule(family::Bent{1, C}, 60);
    const double asym = one_round_eff_bound(w, design_asymptotic(1, C, 60), 50).value;
    const double bound = 1.0 + (C - 3.0) * C / ((2.0 - C) * kE + C);
    out.check(asym <= bound + 1e-9,
              "C=" + num(C) + " asymptotic design " + num(asym) + " <= " + num(bound));
    const double one = one_round_eff_bound(w, design_one_round_bent(C, 60), 50).value;
    out.check(std::abs(one - (1.0 - C / 2.0)) <= 1e-9,
              "C=" + num(C) + " one-round design " + num(one));
  }
  return out;
}

Outcome design_constants() {
  Outcome out;
  const UtilityRule f = design_asymptotic(1, 1.0, 10000);
  out.check(std::abs(f(2) - (kE - 2.0) / (kE - 1.0)) <= 1e-12, "f(2) " + num(f(2)));
  out.check(std::abs(f(3) - (2.0 * kE - 5.0) / (kE - 1.0)) <= 1e-12, "f(3) " + num(f(3)));
  // Forward recursion f(j+1) = j f(j) - rho + 1 at full curvature, in
  // 50 digits.
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big e = boost::multiprecision::exp(Big(1));
  const Big rho = e / (e - 1);
  Big r = 1;
  double worst = 0.0;
  for (int j = 1; j < 15; ++j) {
    r = std::max(Big(Big(j) * r - rho + 1), Big(0));
    worst = std::max(worst, std::abs(r.convert_to<double>() - f(j + 1)));
  }
  const double tail = 10000.0 * f(10000);
  out.check(std::abs(tail - (kE / (kE - 1.0) - 1.0)) <= 1e-3, "j f(j) at 1e4 " + num(tail));
  return out;
}

double max_block_width(const LPInstance& lp, const LPSolution& sol) {
  int width = 0;
  for (std::size_t t = 0; t < lp.index.size(); ++t) {
    if (sol.theta[t] > 1e-12) {
      width = std::max(width, lp.index[t].a + lp.index[t].x + lp.index[t].b);
    }
  }
  return width;
}

Outcome mechanism_checks() {
  Outcome out;
  std::mt19937_64 rng(2026);
  int argmax_mismatch = 0, potential_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Game g = testing::random_game(rng);
    const Trajectory t = k_round_walk(g, 3, tiebreak::IncumbentThenLex{});
    JointAction state = t.initial;
    for (const Step& s : t.steps) {
      // Cumulative-form utility argmax for the mover.
      std::vector<double> value;
      double best = -1e300;
      for (int k = 0; k < static_cast<int>(g.actions(s.player).size()); ++k) {
        JointAction b = state;
        b[s.player] = k;
        const std::vector<int> counts = loads(g, b);
        double u = 0.0;
        for (int r = 0; r < g.num_resources(); ++r) {
          for (int j = 1; j <= counts[r]; ++j) u += g.resource_utility(r, j);
        }
        value.push_back(u);
        best = std::max(best, u);
      }
      std::vector<int> cumulative;
      for (int k = 0; k < static_cast<int>(value.size()); ++k) {
        if (value[k] >= best - kTieTolerance) cumulative.push_back(k);
      }
      if (cumulative != best_responses(g, state, s.player)) ++argmax_mismatch;
      JointAction next = state;
      next[s.player] = s.action;
      const double dphi = potential(g, next) - potential(g, state);
      const double du = utility_mc(g, next, s.player) - utility_mc(g, state, s.player);
      if (std::abs(dphi - du) > 1e-9) ++potential_mismatch;
      state = next;
    }
  }
  out.check(argmax_mismatch == 0, "argmax mismatches " + std::to_string(argmax_mismatch));
  out.check(potential_mismatch == 0,
            "potential identity failures " + std::to_string(potential_mismatch));

  const int N1 = 3, N2 = 40;
  const WelfareRule sc = make_welfare_rule(family::SetCovering{}, 2 * N1 + 2);
  const UtilityRule f = design_asymptotic(1, 1.0, 2 * N1 + 2);
  const LPInstance lp = build_poa_lp({sc}, {f}, N1);
  const LPSolution sol = solve_poa_lp(lp);
  const Construction c = build_poa_matching(lp, sol, {sc}, {f}, N1, N2);
  out.check(is_nash(c.game, *c.meta.ne), "matching game ne is Nash");
  out.check(reachable_in_one_round(c.game, *c.meta.ne, Schedule::RoundRobin(N2)),
            "ne reachable by a one-round walk");
  const double ratio = welfare(c.game, *c.meta.ne) / welfare(c.game, *c.meta.opt);
  const double poa = 1.0 / sol.Q;
  const double envelope = 5.0 * max_block_width(lp, sol) / N2;
  out.check(std::abs(ratio - poa) <= envelope, "W(ne)/W(opt) " + num(ratio) + " PoA " +
                                                   num(poa) + " envelope " + num(envelope));
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome experiment() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.n_agents = 10;
  cfg.n_targets = 15;
  cfg.p_d = 0.5;
  cfg.n_instances = 100;
  cfg.rounds = 5;
  cfg.master_seed = 1;
  const ExperimentResult res = run_experiment(cfg);

  std::map<int, std::vector<double>> ci;
  for (const ExperimentRow& row : res.rows) {
    if (row.design == "common_interest") ci[row.instance].push_back(row.welfare);
  }
  int decreases = 0;
  for (const auto& [index, series] : ci) {
    for (std::size_t r = 1; r < series.size(); ++r) {
      if (series[r] < series[r - 1] - 1e-12) ++decreases;
    }
  }
  out.check(decreases == 0, "common interest round-to-round decreases " +
                                std::to_string(decreases));

  std::map<std::string, double> round1;
  for (const SummaryRow& s : res.summary) {
    if (s.round == 1) round1[s.design] = s.min;
  }
  out.check(round1.at("one_round") >= round1.at("common_interest"),
            "round-1 min one_round " + num(round1.at("one_round")) + " >= common_interest " +
                num(round1.at("common_interest")));
  out.check(round1.at("one_round") >= round1.at("asymptotic"),
            "round-1 min one_round " + num(round1.at("one_round")) + " >= asymptotic " +
                num(round1.at("asymptotic")));

  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "brwalk_acceptance";
  fs::remove_all(base);
  fs::create_directories(base / "a");
  fs::create_directories(base / "b");
  export_result(res, ExportFormat::kCsv, (base / "a").string());
  export_result(run_experiment(cfg), ExportFormat::kCsv, (base / "b").string());
  const bool same = slurp(base / "a" / "welfare.csv") == slurp(base / "b" / "welfare.csv") &&
                    slurp(base / "a" / "summary.csv") == slurp(base / "b" / "summary.csv");
  out.check(same, "CSV byte-identical on re-run");
  fs::remove_all(base);
  return out;
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace brwalk

int main(int argc, char** argv) {
  using namespace brwalk;
  CLI::App app{"acceptance criteria"};
  int only = 0;
  bool verbose = false;
  app.add_option("--criterion", only, "run a single criterion (1-9)");
  app.add_flag("-v,--verbose", verbose, "print every individual check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "example 3 walk limits", 1.0, example_three},
      {2, "optimal one-round design on the two-agent game", 10.0, optimal_design_table},
      {3, "common interest chain", 10.0, common_interest_chain},
      {4, "asymptotic price of anarchy", 30.0, asymptotic_poa},
      {5, "set covering frontier endpoints", 30.0, frontier_endpoints},
      {6, "one-round bounds on bent rules", 10.0, one_round_bounds},
      {7, "asymptotic design constants", 10.0, design_constants},
      {8, "mechanism checks", 120.0, mechanism_checks},
      {9, "WTA experiment", 300.0, experiment},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.check(seconds < c.budget_seconds,
              "runtime " + num(seconds) + " s < " + num(c.budget_seconds) + " s");
    std::printf("criterion %d: %s  %s  (%.3f s)\n", c.id, out.pass ? "PASS" : "FAIL",
                c.name.c_str(), seconds);
    for (const std::string& note : out.notes) {
      if (verbose || !out.pass) std::printf("%s\n", note.c_str());
    }
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
