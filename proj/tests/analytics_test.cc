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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "brwalk/designs.h"
#include "brwalk/errors.h"
#include "brwalk/lp.h"
#include "random_games.h"

namespace brwalk {
namespace {

const double kE = std::exp(1.0);

// Best basic feasible point of max c'x, A0 x >= 0, A1 x = 1, x >= 0, found by
// enumerating every support of size one or two.
double vertex_enumeration(const LinearProgram<double>& lp) {
  const Eigen::Index n = lp.c.size();
  double best = -1e300;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (lp.A(1, j) > 1e-14) {
      const double t = 1.0 / lp.A(1, j);
      if (lp.A(0, j) * t >= -1e-12) best = std::max(best, lp.c[j] * t);
    }
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double det = lp.A(0, j) * lp.A(1, k) - lp.A(0, k) * lp.A(1, j);
      if (std::abs(det) < 1e-14) continue;
      const double tj = -lp.A(0, k) / det;
      const double tk = lp.A(0, j) / det;
      if (tj < -1e-12 || tk < -1e-12) continue;
      best = std::max(best, lp.c[j] * tj + lp.c[k] * tk);
    }
  }
  return best;
}

// Dual value min over lambda >= lambda_min of max_j (c_j + lambda A0_j) / A1_j,
// by golden-section search on the convex one-dimensional dual. Columns with
// A1_j = 0 only contribute the lower limit lambda_min.
double dual_search(const LinearProgram<double>& lp) {
  double lambda_min = 0.0;
  for (Eigen::Index j = 0; j < lp.c.size(); ++j) {
    if (lp.A(1, j) <= 1e-14 && lp.c[j] > 0.0) {
      lambda_min = std::max(lambda_min, lp.c[j] / -lp.A(0, j));
    }
  }
  const auto g = [&](double lambda) {
    double worst = -1e300;
    for (Eigen::Index j = 0; j < lp.c.size(); ++j) {
      if (lp.A(1, j) > 1e-14) {
        worst = std::max(worst, (lp.c[j] + lambda * lp.A(0, j)) / lp.A(1, j));
      }
    }
    return worst;
  };
  double lo = lambda_min, hi = lambda_min + 50.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 300; ++it) {
    const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    if (g(m1) <= g(m2)) hi = m2; else lo = m1;
  }
  return g(0.5 * (lo + hi));
}

TEST(SimplexTest, SmallProgram) {
  LinearProgram<double> lp;
  lp.A.resize(2, 2);
  lp.A << 1, 1, 1, 3;
  lp.rhs = Eigen::Vector2d(4, 6);
  lp.c = Eigen::Vector2d(3, 2);
  lp.sense = {RowSense::kLessEqual, RowSense::kLessEqual};
  const LpResult<double> r = DenseSimplex<double>().solve(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 12.0, 1e-12);
  const LpResiduals<double> res = lp_residuals(lp, r);
  EXPECT_LE(res.gap, 1e-10);
  EXPECT_LE(res.dual, 1e-10);
}

TEST(SimplexTest, InfeasibleAndUnbounded) {
  LinearProgram<double> lp;
  lp.A.resize(1, 1);
  lp.A << 1;
  lp.rhs = Eigen::VectorXd::Constant(1, -1.0);
  lp.c = Eigen::VectorXd::Constant(1, 1.0);
  lp.sense = {RowSense::kLessEqual};
  EXPECT_EQ(DenseSimplex<double>().solve(lp).status, LpStatus::kInfeasible);
  lp.rhs[0] = 1.0;
  lp.sense = {RowSense::kGreaterEqual};
  EXPECT_EQ(DenseSimplex<double>().solve(lp).status, LpStatus::kUnbounded);
}

TEST(PoaLpTest, SetCoveringCommonInterest) {
  const WelfareRule w = make_welfare_rule(family::SetCovering{}, 10);
  EXPECT_NEAR(poa_lp({w}, {design_common_interest(w)}, 8), 0.5, 1e-6);
}

TEST(PoaLpTest, SingleAgentIsOptimal) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const WelfareRule w = testing::random_welfare(rng, 3);
    const UtilityRule f = testing::random_utility(rng, 3);
    EXPECT_NEAR(poa_lp({w}, {f}, 1), 1.0, 1e-9);
  }
}

TEST(PoaLpTest, MatchesBentClosedFormForCommonInterest) {
  const WelfareRule w = make_welfare_rule(family::Bent{1, 0.5}, 12);
  const UtilityRule f = design_common_interest(w);
  EXPECT_NEAR(poa_lp({w}, {f}, 8), poa_closed_form(w, f, closed_form::Bent{8}).value, 1e-6);
}

TEST(PoaLpTest, AgreesWithVertexEnumerationAndDual) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const int N = 2 + trial % 5;
    std::vector<WelfareRule> ws{testing::random_welfare(rng, N + 1)};
    std::vector<UtilityRule> fs{testing::random_utility(rng, N + 1)};
    if (trial % 2) {
      ws.push_back(testing::random_welfare(rng, N + 1));
      fs.push_back(testing::random_utility(rng, N + 1));
    }
    const LPInstance inst = build_poa_lp(ws, fs, N);
    const LPSolution sol = solve_poa_lp(inst);
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    EXPECT_NEAR(sol.Q, vertex_enumeration(inst.program), 1e-8 * sol.Q);
    EXPECT_NEAR(sol.Q, dual_search(inst.program), 1e-6 * sol.Q);
    EXPECT_LE(sol.residuals.primal, kLpResidualTolerance);
    EXPECT_GE(sol.theta.minCoeff(), -1e-12);
  }
}

TEST(OneRoundBoundTest, Examples) {
  const WelfareRule b5 = make_welfare_rule(family::Bent{1, 0.5}, 60);
  EXPECT_NEAR(one_round_eff_bound(b5, design_one_round_bent(0.5, 60), 50).value, 0.75, 1e-9);
  const WelfareRule sc = make_welfare_rule(family::SetCovering{}, 60);
  EXPECT_NEAR(one_round_eff_bound(sc, design_common_interest(sc), 50).value, 0.5, 1e-9);
  const WelfareRule lin = make_welfare_rule(family::Bent{1, 0.0}, 60);
  EXPECT_NEAR(one_round_eff_bound(lin, design_common_interest(lin), 50).value, 1.0, 1e-9);
}

TEST(OneRoundSetcovTest, Examples) {
  const WelfareRule sc = make_welfare_rule(family::SetCovering{}, 10);
  EXPECT_NEAR(one_round_eff_setcov(design_common_interest(sc), 10), 0.5, 1e-15);
  EXPECT_LE(one_round_eff_setcov(design_asymptotic(1, 1.0, 100000), 100000), 0.15);
  const UtilityRule ones(Eigen::VectorXd::Ones(1000), 1.0);
  EXPECT_NEAR(one_round_eff_setcov(ones, 100), 0.01, 1e-15);
  EXPECT_LT(one_round_eff_setcov(ones, 1000), one_round_eff_setcov(ones, 100));
}

TEST(ClosedFormTest, Examples) {
  const WelfareRule sc = make_welfare_rule(family::SetCovering{}, 60);
  EXPECT_NEAR(poa_closed_form(sc, design_common_interest(sc), closed_form::Setcov{50}).value,
              0.5, 1e-12);
  EXPECT_NEAR(poa_closed_form(sc, design_asymptotic(1, 1.0, 60), closed_form::Setcov{50}).value,
              1.0 - 1.0 / kE, 1e-6);
  const WelfareRule b5 = make_welfare_rule(family::Bent{1, 0.5}, 60);
  EXPECT_NEAR(poa_closed_form(b5, design_one_round_bent(0.5, 60), closed_form::Bent{}).value,
              0.75, 1e-12);
  EXPECT_THROW(poa_closed_form(b5, design_common_interest(b5), closed_form::Setcov{5}),
               ValidationError);
}

TEST(ClosedFormTest, SetcovMatchesLp) {
  const WelfareRule w = make_welfare_rule(family::SetCovering{}, 12);
  for (const UtilityRule& f : {design_asymptotic(1, 1.0, 12), design_common_interest(w),
                               design_pareto_setcov(0.8, 12)}) {
    for (int N = 2; N <= 8; ++N) {
      EXPECT_NEAR(poa_lp({w}, {f}, N), poa_closed_form(w, f, closed_form::Setcov{N}).value,
                  1e-6) << "N=" << N;
    }
  }
}

TEST(ClosedFormTest, AsymptoticBentMatchesTheory) {
  for (int k = 0; k <= 20; ++k) {
    const double C = 0.05 * k;
    const WelfareRule w = make_welfare_rule(family::Bent{1, C}, 80);
    const BoundedValue v = poa_closed_form(w, design_asymptotic(1, C, 80), closed_form::Bent{60});
    EXPECT_NEAR(v.value, 1.0 - C / kE, 1e-6) << "C=" << C;
  }
}

TEST(FrontierTest, Endpoints) {
  EXPECT_EQ(frontier_setcov(0.5, 100).one_round, 0.5);
  EXPECT_EQ(frontier_setcov(0.5, 100).one_round,
            one_round_eff_setcov(design_pareto_setcov(1.0, 100), 100));
  const double top = 1.0 - 1.0 / kE;
  const double a = frontier_setcov(top, 1000).one_round;
  const double b = frontier_setcov(top, 10000).one_round;
  EXPECT_LT(b, a);
  EXPECT_THROW(frontier_setcov(0.4, 10), ValidationError);
}

TEST(FrontierTest, MonotoneInQ) {
  double previous = 1.0;
  for (int k = 0; k <= 13; ++k) {
    const double q = std::min(0.5 + 0.01 * k, 1.0 - 1.0 / kE);
    const double v = frontier_setcov(q, 2000).one_round;
    EXPECT_LE(v, previous + 1e-15) << "Q=" << q;
    EXPECT_LE(v, 0.5);
    previous = v;
  }
}

TEST(TheoryBoundsTest, TableValues) {
  EXPECT_DOUBLE_EQ(theory_bounds(1.0, horizon::One{}, BoundDesign::kOptimal), 0.5);
  EXPECT_NEAR(theory_bounds(1.0, horizon::Infinity{}, BoundDesign::kOptimal), 1.0 - 1.0 / kE,
              1e-15);
  EXPECT_NEAR(theory_bounds(1.0, horizon::One{}, BoundDesign::kAsymptoticAtOneRound),
              1.0 - 2.0 / (kE + 1.0), 1e-15);
  EXPECT_DOUBLE_EQ(theory_bounds(0.5, horizon::Finite{3}, BoundDesign::kCommonInterest),
                   1.0 / 1.5);
  EXPECT_THROW(theory_bounds(1.5, horizon::One{}, BoundDesign::kOptimal), ValidationError);
}

}  // namespace
}  // namespace brwalk
