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

#include "brwalk/analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brwalk/designs.h"
#include "brwalk/errors.h"
#include "brwalk/series.h"

namespace brwalk {
namespace {

constexpr double kArgmaxTolerance = 1e-12;

void check_unit_nonincreasing(const UtilityRule& f) {
  if (!f.nonincreasing() || std::abs(f(1) - 1.0) > kRuleSlack) {
    throw ValidationError(
        "closed form needs a nonincreasing utility rule with f(1) = 1");
  }
}

const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration limit";
  }
  return "unknown";
}

}  // namespace

LPInstance build_poa_lp(const std::vector<WelfareRule>& ws,
                        const std::vector<UtilityRule>& fs, int N) {
  if (N < 1) throw ValidationError("N must be >= 1");
  if (ws.empty() || ws.size() != fs.size()) {
    throw ValidationError("welfare and utility rule lists must be aligned");
  }
  LPInstance inst;
  inst.N = N;
  for (int l = 0; l < static_cast<int>(ws.size()); ++l) {
    for (int a = 0; a <= N; ++a) {
      for (int x = 0; a + x <= N; ++x) {
        for (int b = 0; a + x + b <= N; ++b) {
          if (a + x + b >= 1) inst.index.push_back(LpIndex{a, x, b, l});
        }
      }
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(inst.index.size());
  LinearProgram<double>& lp = inst.program;
  lp.A.resize(2, n);
  lp.c.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto [a, x, b, l] = inst.index[k];
    const WelfareRule& w = ws[l];
    const UtilityRule& f = fs[l];
    const auto wv = [&](int j) { return j == 0 ? 0.0 : w(j); };
    const auto fv = [&](int j) { return j == 0 ? 0.0 : f(j); };
    lp.c[k] = wv(b + x);
    lp.A(0, k) = a * fv(a + x) - b * fv(a + x + 1);
    lp.A(1, k) = wv(a + x);
  }
  lp.rhs = Eigen::Vector2d(0.0, 1.0);
  lp.sense = {RowSense::kGreaterEqual, RowSense::kEqual};
  return inst;
}

LPSolution solve_poa_lp(const LPInstance& instance) {
  DenseSimplex<double> solver;
  LpResult<double> r = solver.solve(instance.program);
  LPSolution sol;
  sol.status = r.status;
  if (r.status != LpStatus::kOptimal) return sol;
  sol.Q = r.value;
  sol.theta = r.x;
  sol.duals = r.y;
  sol.residuals = lp_residuals(instance.program, r);
  const auto& res = sol.residuals;
  if (res.primal > kLpResidualTolerance || res.dual > kLpResidualTolerance ||
      res.gap > kLpResidualTolerance) {
    std::ostringstream out;
    out << "LP optimum failed certification: primal residual " << res.primal
        << ", dual residual " << res.dual << ", gap " << res.gap;
    throw SolverError(out.str());
  }
  return sol;
}

double poa_lp(const std::vector<WelfareRule>& ws,
              const std::vector<UtilityRule>& fs, int N) {
  const LPSolution sol = solve_poa_lp(build_poa_lp(ws, fs, N));
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("LP ended with status: ") + status_name(sol.status));
  }
  return 1.0 / sol.Q;
}

BoundedValue one_round_eff_bound(const WelfareRule& w, const UtilityRule& f,
                                 int y_max) {
  if (y_max < 1) throw ValidationError("Y_max must be >= 1");
  double best = -std::numeric_limits<double>::infinity();
  int best_y = 0, best_z = 0;
  double prefix = 0.0;
  double running_min = f(1);
  for (int y = 1; y <= y_max; ++y) {
    prefix += f(y);
    running_min = std::min(running_min, f(y + 1));
    for (int z = 0; z <= y_max; ++z) {
      const double wz = z == 0 ? 0.0 : w(z);
      const double ratio = (prefix - z * running_min + wz) / w(y);
      if (best_y == 0 || ratio > best + kArgmaxTolerance * std::max(1.0, std::abs(best))) {
        best = ratio;
        best_y = y;
        best_z = z;
      }
    }
  }
  return BoundedValue{1.0 / best, best_y == y_max || best_z == y_max};
}

double one_round_eff_setcov(const UtilityRule& f, int j_trunc) {
  if (j_trunc < 1) throw ValidationError("J_trunc must be >= 1");
  double sum = 0.0;
  double lowest = f(1);
  for (int i = 1; i <= j_trunc; ++i) {
    const double v = f(i);
    sum += v;
    lowest = std::min(lowest, v);
  }
  return 1.0 / (sum - lowest + 1.0);
}

BoundedValue poa_closed_form(const WelfareRule& w, const UtilityRule& f,
                             const ClosedFormFamily& family) {
  check_unit_nonincreasing(f);
  if (const auto* sc = std::get_if<closed_form::Setcov>(&family)) {
    if (!is_set_covering(w)) {
      throw ValidationError("set-covering closed form needs a set-covering rule");
    }
    if (sc->n < 1) throw ValidationError("n must be >= 1");
    double worst = (sc->n - 1) * f(sc->n);
    for (int j = 1; j <= sc->n - 1; ++j) {
      worst = std::max(worst, j * f(j) - f(j + 1));
    }
    return BoundedValue{1.0 / (1.0 + worst), false};
  }
  if (!as_bent(w)) {
    throw ValidationError("bent closed form needs a bent welfare rule");
  }
  const int j_trunc = std::get<closed_form::Bent>(family).j_trunc > 0
                          ? std::get<closed_form::Bent>(family).j_trunc
                          : f.max_tabulated();
  double best = -std::numeric_limits<double>::infinity();
  int best_j = 0;
  for (int j = 1; j <= j_trunc; ++j) {
    const double fj = f(j), fnext = f(j + 1), wj = w(j);
    for (int l = 1; l <= j; ++l) {
      const double ratio = (w(l) + j * fj - l * fnext) / wj;
      if (best_j == 0 || ratio > best + kArgmaxTolerance * std::max(1.0, std::abs(best))) {
        best = ratio;
        best_j = j;
      }
    }
  }
  return BoundedValue{1.0 / best, best_j == j_trunc};
}

FrontierPoint frontier_setcov(double Q, int j_trunc) {
  if (j_trunc < 1) throw ValidationError("J_trunc must be >= 1");
  const design::ParetoSetcov spec = design::ParetoSetcov::FromQ(Q);
  const UtilityRule f = design_pareto_setcov(spec.chi, j_trunc);
  double sum = 0.0;
  for (int i = 1; i <= j_trunc; ++i) sum += f(i);
  return FrontierPoint{Q, 1.0 / (sum + 1.0)};
}

double theory_bounds(double C, const HorizonKind& k, BoundDesign design) {
  if (!(C >= 0.0 && C <= 1.0)) throw ValidationError("C must lie in [0, 1]");
  const double e = euler<double>();
  switch (design) {
    case BoundDesign::kCommonInterest:
      return 1.0 / (1.0 + C);
    case BoundDesign::kAsymptoticAtOneRound:
      return 1.0 + (C - 3.0) * C / ((2.0 - C) * e + C);
    case BoundDesign::kOptimal:
      break;
  }
  if (std::holds_alternative<horizon::Infinity>(k)) return 1.0 - C / e;
  if (const auto* fin = std::get_if<horizon::Finite>(&k); fin && fin->k < 1) {
    throw ValidationError("k must be >= 1");
  }
  return 1.0 - C / 2.0;
}

}  // namespace brwalk
