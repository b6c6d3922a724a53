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

#ifndef BRWALK_CONSTRUCTIONS_H_
#define BRWALK_CONSTRUCTIONS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brwalk/analytics.h"
#include "brwalk/game.h"
#include "brwalk/rules.h"

namespace brwalk {

// How a block of identical resources becomes game resources.
//   kWeighted:   one resource whose value is the block size. Welfare and
//                utility scale linearly in the value, so this is exact.
//   kReplicated: the block is expanded into unit-value copies after scaling
//                every size by the smallest integer q <= denominator_bound
//                that makes all sizes integral (BudgetError otherwise).
enum class BlockEncoding { kWeighted, kReplicated };

struct Scaling {
  BlockEncoding encoding = BlockEncoding::kWeighted;
  int denominator_bound = 1000;
};

struct ConstructionMeta {
  std::string kind;
  std::string case_label;
  // Welfare ratio the construction is built to realize, if it has one.
  std::optional<double> target_ratio;
  // Tie break under which the target is reached.
  std::string recommended_tiebreak = "adversarial";
  std::optional<JointAction> ne;
  std::optional<JointAction> opt;
  // Integer factor applied to block sizes (1 for the weighted encoding).
  int scale = 1;
  std::vector<std::pair<std::string, double>> parameters;
};

struct Construction {
  Game game;
  ConstructionMeta meta;
};

// Two agents, set-covering resources r1, r2, r3 with values 1, 1 + eps, eps.
// A_1 = {r1}, {r2}; A_2 = {r2}, {r3}. `f` defaults to the common-interest rule.
Construction build_example3(double eps,
                            const std::optional<UtilityRule>& f = std::nullopt);

// Two-agent game on bent(1, C) with blocks R1, R2, R3, |R1| = |R2| = x and
// |R3| = f(2) x. Action sets follow the case of f(2):
//   (a) f(2) <= 1 - C and (b) f(2) <= 1:  A_1 = {R1, R2}, A_2 = {R3, R1}
//   (c) f(2) > 1:                         A_1 = {R1, R2}, A_2 = {R1, R3}
// `f` must be tabulated to at least 2.
Construction build_thm2_game(double C, const UtilityRule& f,
                             const Scaling& scaling = {});

// Chain of n agents on bent(1, C) with common-interest utilities. Agent j has
// br_j = {both_j} (or {r^n} for j = n) and opt_j = {opt_j, both_{j-1}}; the
// opt resources carry value C.
Construction build_ci_chain(int n, double C);

// n agents share a block R_0 of base_size set-covering resources (stack) or
// take a private block R_i of f(i) base_size resources (spread).
Construction build_setcov_stack_spread(int n, const UtilityRule& f,
                                       int base_size,
                                       const Scaling& scaling = {});

// N2-agent matching game realizing the LP optimum `lp` (solved at N1) as a
// Nash equilibrium ne against the allocation opt. Each variable (a, x, b, l)
// with theta > 0 contributes blocks k = 1..N2+a+x-1 of size theta / N2; agent
// i covers k in [i, i+a+x-1] in ne_i and, when i >= a+x+b, k in [i-b, i+x-1]
// in opt_i. Action index 1 is ne_i and 2 is opt_i when opt_i is nonempty.
Construction build_poa_matching(const LPInstance& lp, const LPSolution& theta,
                                const std::vector<WelfareRule>& ws,
                                const std::vector<UtilityRule>& fs, int N1,
                                int N2, const Scaling& scaling = {});

}  // namespace brwalk

#endif  // BRWALK_CONSTRUCTIONS_H_
