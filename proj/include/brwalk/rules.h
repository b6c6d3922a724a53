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

#ifndef BRWALK_RULES_H_
#define BRWALK_RULES_H_

#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace brwalk {

// Absolute slack used when checking monotonicity and concavity of rules.
inline constexpr double kRuleSlack = 1e-9;

// Welfare rule families. Parameters are validated by make_welfare_rule.
namespace family {
struct Bent {
  int b = 1;
  double C = 0.0;
};
struct SetCovering {};
struct Wta {
  double p_d = 1.0;
};
struct Harmonic {};
struct Explicit {
  Eigen::VectorXd values;
  double tail_slope = 0.0;
};
}  // namespace family

using WelfareFamily = std::variant<family::Bent, family::SetCovering,
                                   family::Wta, family::Harmonic,
                                   family::Explicit>;

// Nondecreasing concave welfare w(j) tabulated for j = 1..J_max. Beyond the
// table the rule continues linearly with `tail_slope`; w(0) = 0 is implicit.
class WelfareRule {
 public:
  // Throws ValidationError unless the values are positive, nondecreasing and
  // concave (with w(0) = 0), and 0 <= tail_slope <= last increment.
  WelfareRule(Eigen::VectorXd values, double tail_slope,
              std::string label = "explicit");

  double operator()(int j) const;

  int max_tabulated() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& values() const { return values_; }
  double tail_slope() const { return tail_slope_; }
  const std::string& label() const { return label_; }

  WelfareRule scaled(double factor) const;

  friend bool operator==(const WelfareRule& a, const WelfareRule& b) {
    return a.tail_slope_ == b.tail_slope_ && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
  double tail_slope_;
  std::string label_;
};

// Marginal utility rule f(j), j = 1..J_max, constant `tail_value` beyond.
class UtilityRule {
 public:
  // Throws ValidationError unless values are nonnegative and nonincreasing
  // and 0 <= tail_value <= f(J_max).
  UtilityRule(Eigen::VectorXd values, double tail_value);

  // Admits increasing rules (only nonnegativity is checked). Needed by the
  // f(2) > 1 branch of the two-agent worst-case construction.
  static UtilityRule Unrestricted(Eigen::VectorXd values, double tail_value);

  double operator()(int j) const;

  int max_tabulated() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& values() const { return values_; }
  double tail_value() const { return tail_value_; }
  bool nonincreasing() const { return nonincreasing_; }

  UtilityRule scaled(double factor) const;

  friend bool operator==(const UtilityRule& a, const UtilityRule& b) {
    return a.tail_value_ == b.tail_value_ && a.values_ == b.values_;
  }

 private:
  UtilityRule(Eigen::VectorXd values, double tail_value, bool nonincreasing);

  Eigen::VectorXd values_;
  double tail_value_;
  bool nonincreasing_;
};

// Tabulates a rule of the given family up to j = max(J_max, b) for bent
// rules and up to J_max otherwise.
//   bent(b, C):    w(j) = (1 - C) j + C min(j, b)
//   set covering:  w(j) = 1
//   wta(p_d):      w(j) = 1 - (1 - p_d)^j
//   harmonic:      w(j) = sum_{i <= j} 1 / i
WelfareRule make_welfare_rule(const WelfareFamily& family, int j_max);

// 1 - tail_slope / w(1).
double curvature(const WelfareRule& w);

// Recovers (b, C) when the rule has the bent shape: unit increments up to b,
// then constant increments 1 - C, with w(1) = 1.
std::optional<family::Bent> as_bent(const WelfareRule& w);
bool is_set_covering(const WelfareRule& w);

enum class Conversion { kToMarginal, kToCumulative };

// to_marginal: f(j) = w~(j) - w~(j-1); to_cumulative: w~(j) = sum_{i<=j} f(i).
// Throws ValidationError if the input or output breaks the rule invariants.
Eigen::VectorXd convert_rule(Conversion direction, const Eigen::VectorXd& rule);

}  // namespace brwalk

#endif  // BRWALK_RULES_H_
