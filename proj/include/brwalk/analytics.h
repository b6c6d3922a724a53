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

#ifndef BRWALK_ANALYTICS_H_
#define BRWALK_ANALYTICS_H_

#include <array>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "brwalk/lp.h"
#include "brwalk/rules.h"

namespace brwalk {

// A maximum over a truncated index range. `truncated` is set when the first
// maximizer sits on the truncation boundary, so the untruncated value may be
// larger.
struct BoundedValue {
  double value = 0.0;
  bool truncated = false;
};

// Index (a, x, b, l) of one LP variable.
struct LpIndex {
  int a = 0;
  int x = 0;
  int b = 0;
  int rule = 0;
};

// maximize sum w_l(b+x) theta  s.t.  sum (a f_l(a+x) - b f_l(a+x+1)) theta >= 0,
// sum w_l(a+x) theta = 1, theta >= 0, over 1 <= a+x+b <= N.
struct LPInstance {
  int N = 0;
  std::vector<LpIndex> index;
  LinearProgram<double> program;
};

struct LPSolution {
  LpStatus status = LpStatus::kIterationLimit;
  double Q = 0.0;
  Eigen::VectorXd theta;
  Eigen::VectorXd duals;
  LpResiduals<double> residuals;
};

inline constexpr double kLpResidualTolerance = 1e-8;

LPInstance build_poa_lp(const std::vector<WelfareRule>& ws,
                        const std::vector<UtilityRule>& fs, int N);

// Solves the program. A non-optimal status is returned as is; an optimum whose
// residuals exceed kLpResidualTolerance throws SolverError.
LPSolution solve_poa_lp(const LPInstance& instance);

// Price of anarchy for N agents, 1 / Q.
double poa_lp(const std::vector<WelfareRule>& ws,
              const std::vector<UtilityRule>& fs, int N);

// 1 / max_{1<=y<=Y, 0<=z<=Y} (sum_{i<=y} f(i) - z min_{i<=y+1} f(i) + w(z)) / w(y).
BoundedValue one_round_eff_bound(const WelfareRule& w, const UtilityRule& f,
                                 int y_max);

// 1 / (sum_{i<=J} f(i) - min_{i<=J} f(i) + 1) for set-covering welfare.
double one_round_eff_setcov(const UtilityRule& f, int j_trunc);

namespace closed_form {
struct Setcov {
  int n = 2;
};
// Maximum over 1 <= l <= j <= j_trunc; 0 means the tabulated length of f.
struct Bent {
  int j_trunc = 0;
};
}  // namespace closed_form
using ClosedFormFamily = std::variant<closed_form::Setcov, closed_form::Bent>;

// Setcov(n): 1/PoA = 1 + max_{1<=j<=n-1}{j f(j) - f(j+1), (n-1) f(n)}.
// Bent:      1/PoA = max_{1<=l<=j} (w(l) + j f(j) - l f(j+1)) / w(j).
// Throws ValidationError when the welfare rule is not of the named family or
// f is not a nonincreasing rule with f(1) = 1.
BoundedValue poa_closed_form(const WelfareRule& w, const UtilityRule& f,
                             const ClosedFormFamily& family);

struct FrontierPoint {
  double Q = 0.5;
  double one_round = 0.5;
};

// Best one-round efficiency among set-covering rules whose price of anarchy
// is Q: 1 / (sum_{j=0}^{J-1} max{j! (1 - chi sum_{tau=1}^j 1/tau!), 0} + 1),
// chi = (1 - Q) / Q.
FrontierPoint frontier_setcov(double Q, int j_trunc);

namespace horizon {
struct One {};
struct Finite {
  int k = 1;
};
struct Infinity {};
}  // namespace horizon
using HorizonKind = std::variant<horizon::One, horizon::Finite, horizon::Infinity>;

enum class BoundDesign { kOptimal, kCommonInterest, kAsymptoticAtOneRound };

// Efficiency guarantees over all welfare rules of curvature C:
//   optimal, finite k:  1 - C/2;   optimal, infinity:  1 - C/e;
//   common interest:    1 / (1 + C);
//   asymptotic design after one round:  1 + (C - 3) C / ((2 - C) e + C).
double theory_bounds(double C, const HorizonKind& k, BoundDesign design);

}  // namespace brwalk

#endif  // BRWALK_ANALYTICS_H_
