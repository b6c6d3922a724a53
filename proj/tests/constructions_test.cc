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

#include "brwalk/constructions.h"

#include <gtest/gtest.h>

#include "brwalk/analytics.h"
#include "brwalk/designs.h"
#include "brwalk/dynamics.h"
#include "brwalk/errors.h"

namespace brwalk {
namespace {

double adversarial_efficiency(const Game& g, int k) {
  return efficiency(g, Horizon::Rounds(k), tiebreak::Adversarial{});
}

void expect_prenormalized(const Game& g) {
  const Game h = normalize(g);
  for (int r = 0; r < g.num_resources(); ++r) {
    EXPECT_EQ(h.resources()[r].value, g.resources()[r].value);
  }
}

TEST(Example3Test, Values) {
  const Construction c = build_example3(0.1);
  EXPECT_NEAR(optimum(c.game).welfare, 2.1, 1e-12);
  EXPECT_NEAR(welfare(c.game, *c.meta.ne), 1.2, 1e-12);
  EXPECT_NEAR(*c.meta.target_ratio, 1.2 / 2.1, 1e-15);
  expect_prenormalized(c.game);
  const Construction zero = build_example3(0.0);
  EXPECT_EQ(zero.game.resources()[2].value, 0.0);
}

TEST(Thm2Test, CaseA) {
  const Construction c = build_thm2_game(1.0, design_one_round_bent(1.0, 2));
  EXPECT_EQ(c.meta.case_label, "a");
  EXPECT_NEAR(adversarial_efficiency(c.game, 1), 0.5, 1e-12);
  expect_prenormalized(c.game);
}

TEST(Thm2Test, CaseBIsStableAcrossRounds) {
  const Construction c = build_thm2_game(0.5, design_one_round_bent(0.5, 2));
  EXPECT_EQ(c.meta.case_label, "b");
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(adversarial_efficiency(c.game, k), 0.75, 1e-12);
}

TEST(Thm2Test, CaseCWithIncreasingRule) {
  Eigen::VectorXd f(2);
  f << 1.0, 1.2;
  const Construction c = build_thm2_game(0.5, UtilityRule::Unrestricted(f, 1.2));
  EXPECT_EQ(c.meta.case_label, "c");
  EXPECT_NEAR(adversarial_efficiency(c.game, 1), 1.5 / 2.2, 1e-12);
  EXPECT_NEAR(*c.meta.target_ratio, 1.5 / 2.2, 1e-12);
}

TEST(Thm2Test, ReplicatedEncodingMatchesWeighted) {
  for (double C : {0.0, 0.5, 1.0}) {
    const UtilityRule f = design_one_round_bent(C, 2);
    const Construction weighted = build_thm2_game(C, f);
    const Construction replicated =
        build_thm2_game(C, f, Scaling{BlockEncoding::kReplicated, 1000});
    EXPECT_GE(replicated.game.num_resources(), 2);
    EXPECT_NEAR(adversarial_efficiency(replicated.game, 1),
                adversarial_efficiency(weighted.game, 1), 1e-12) << "C=" << C;
  }
  EXPECT_THROW(build_thm2_game(0.3, design_one_round_bent(0.3, 2),
                               Scaling{BlockEncoding::kReplicated, 3}),
               BudgetError);
}

// Chain optimum from an exhaustive search, compared with the walk.
TEST(CiChainTest, SmallInstances) {
  EXPECT_NEAR(adversarial_efficiency(build_ci_chain(3, 1.0).game, 1), 0.6, 1e-12);
  EXPECT_NEAR(adversarial_efficiency(build_ci_chain(2, 0.0).game, 1), 1.0, 1e-12);
  for (double C : {0.5, 0.75, 1.0}) {
    const Construction c = build_ci_chain(8, C);
    EXPECT_NEAR(optimum(c.game).welfare, optimum_brute_force(c.game).welfare, 1e-12);
    EXPECT_NEAR(adversarial_efficiency(c.game, 1), *c.meta.target_ratio, 1e-12) << C;
  }
}

TEST(CiChainTest, LowCurvatureOptimum) {
  // The optimum exceeds the designated opt profile when C < 1/2.
  for (double C : {0.0, 0.25}) {
    const int n = 8;
    const Construction c = build_ci_chain(n, C);
    const double best = optimum_brute_force(c.game).welfare;
    EXPECT_NEAR(best, (n - 1) * (1 + C) + C + std::max(0.0, 1 - 2 * C), 1e-12);
    EXPECT_GE(best, welfare(c.game, *c.meta.opt) - 1e-12);
  }
}

TEST(CiChainTest, LargeChainMatchesFormula) {
  const Construction c = build_ci_chain(200, 1.0);
  EXPECT_NEAR(adversarial_efficiency(c.game, 1), 200.0 / 399.0, 1e-9);
}

TEST(StackSpreadTest, Values) {
  const WelfareRule sc = make_welfare_rule(family::SetCovering{}, 5);
  const Construction ci = build_setcov_stack_spread(2, design_common_interest(sc), 1);
  EXPECT_NEAR(adversarial_efficiency(ci.game, 1), 0.5, 1e-12);
  const UtilityRule ones(Eigen::VectorXd::Ones(5), 1.0);
  const Construction flat = build_setcov_stack_spread(5, ones, 1);
  EXPECT_NEAR(adversarial_efficiency(flat.game, 1), 0.2, 1e-12);
  const Construction single = build_setcov_stack_spread(1, ones, 1);
  EXPECT_NEAR(adversarial_efficiency(single.game, 1), 1.0, 1e-12);
  const UtilityRule asym = design_asymptotic(1, 1.0, 5);
  const Construction a = build_setcov_stack_spread(5, asym, 3);
  EXPECT_NEAR(adversarial_efficiency(a.game, 1), one_round_eff_setcov(asym, 5), 1e-9);
}

TEST(MatchingTest, CommonInterestSetCovering) {
  const int N1 = 3, N2 = 20;
  const WelfareRule w = make_welfare_rule(family::SetCovering{}, 2 * N1 + 2);
  const UtilityRule f = design_common_interest(w);
  const LPInstance lp = build_poa_lp({w}, {f}, N1);
  const LPSolution sol = solve_poa_lp(lp);
  const Construction c = build_poa_matching(lp, sol, {w}, {f}, N1, N2);
  EXPECT_TRUE(is_nash(c.game, *c.meta.ne));
  const double ratio = welfare(c.game, *c.meta.ne) / welfare(c.game, *c.meta.opt);
  EXPECT_NEAR(ratio, 1.0 / sol.Q, 5.0 * (2 * N1 + 1) / N2);
  EXPECT_THROW(build_poa_matching(lp, sol, {w}, {f}, N1, 2), ValidationError);
}

}  // namespace
}  // namespace brwalk
