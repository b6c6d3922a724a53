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

#ifndef BRWALK_DESIGNS_H_
#define BRWALK_DESIGNS_H_

#include <optional>
#include <string>
#include <variant>

#include "brwalk/game.h"
#include "brwalk/rules.h"

namespace brwalk {

namespace design {
struct CommonInterest {};
// Leaving C unset takes it from the curvature of each welfare rule.
struct OneRoundBent {
  std::optional<double> C;
};
struct AsymptoticBent {
  int b = 1;
  std::optional<double> C;
};
struct ParetoSetcov {
  double chi = 1.0;
  static ParetoSetcov FromQ(double q);
};
}  // namespace design

using DesignSpec = std::variant<design::CommonInterest, design::OneRoundBent,
                                design::AsymptoticBent, design::ParetoSetcov>;

// Short identifier used in experiment output: common_interest, one_round,
// asymptotic, pareto.
std::string design_name(const DesignSpec& spec);

// Smallest admissible chi, 1 / (e - 1).
double pareto_chi_threshold();

// f(j) = w(j) - w(j-1), continued with the welfare tail slope.
UtilityRule design_common_interest(const WelfareRule& w);

// f(1) = 1 and f(j) = (2 - 2C) / (2 - C) for every j >= 2.
UtilityRule design_one_round_bent(double C, int j_max);

// Asymptotically optimal rule for bent(b, C), supported for b = 1 with any C
// and for any b with C = 1.
//
// The recursion f(j+1) = max{j f(j) - rho w(j) + 1, 1 - C} loses a factor j of
// accuracy per step, so every entry is evaluated in closed form as a
// convergent factorial-tail series:
//   b = 1:  f(j) = sum_{m >= 0} (rho w(j+m) - 1) / (j (j+1) ... (j+m)),
//           rho = e / (e - C), clamped at 1 - C.
//   C = 1:  f(j+1) = (j / b)(f(j) - rho_b) + 1 for j < b, and for j > b
//           f(j) = (rho_b - 1) sum_{m >= 0} b^{m+1} / (j ... (j+m)),
//           rho_b = 1 / (1 - b^b e^{-b} / b!).
UtilityRule design_asymptotic(int b, double C, int j_max);

// Set-covering rule with f(1) = 1 and f(j+1) = max{j f(j) - chi, 0},
// evaluated as max{(j-1)! (1 - chi (e-1)) + chi sum_{m>=0} 1/(j...(j+m)), 0}.
UtilityRule design_pareto_setcov(double chi, int j_max);

// Design for a single welfare rule. Rules with w(1) != 1 get the design of the
// normalized rule scaled by w(1).
UtilityRule design_for(const DesignSpec& spec, const WelfareRule& w);

// Replaces every utility rule of `g` by the design for its resource's welfare
// rule.
Game apply_design(const Game& g, const DesignSpec& spec);

}  // namespace brwalk

#endif  // BRWALK_DESIGNS_H_
