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

#include "brwalk/rules.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "brwalk/errors.h"

namespace brwalk {
namespace {

std::string describe(const char* what, int j, double lhs, double rhs) {
  std::ostringstream out;
  out << what << " at j=" << j << " (" << lhs << " vs " << rhs << ")";
  return out.str();
}

// Checks the welfare invariants on the increments of w with w(0) = 0.
void check_welfare(const Eigen::VectorXd& values, double tail_slope) {
  if (values.size() == 0) throw ValidationError("welfare rule is empty");
  double previous_increment = values[0];
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j]) || values[j] <= 0.0) {
      throw ValidationError(
          describe("welfare value not strictly positive", j + 1, values[j], 0));
    }
    const double increment = j == 0 ? values[0] : values[j] - values[j - 1];
    if (increment < -kRuleSlack) {
      throw ValidationError(describe("welfare rule decreases", j + 1,
                                     values[j], values[j - 1]));
    }
    if (increment > previous_increment + kRuleSlack) {
      throw ValidationError(describe("welfare rule not concave", j + 1,
                                     increment, previous_increment));
    }
    previous_increment = increment;
  }
  if (!std::isfinite(tail_slope) || tail_slope < -kRuleSlack) {
    throw ValidationError("welfare tail slope must be nonnegative");
  }
  if (tail_slope > previous_increment + kRuleSlack) {
    throw ValidationError(describe("welfare tail slope breaks concavity",
                                   static_cast<int>(values.size()) + 1,
                                   tail_slope, previous_increment));
  }
}

void check_utility(const Eigen::VectorXd& values, double tail_value,
                   bool require_nonincreasing) {
  if (values.size() == 0) throw ValidationError("utility rule is empty");
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j]) || values[j] < -kRuleSlack) {
      throw ValidationError(
          describe("utility value negative", j + 1, values[j], 0));
    }
    if (require_nonincreasing && j > 0 &&
        values[j] > values[j - 1] + kRuleSlack) {
      throw ValidationError(describe("utility rule increases", j + 1,
                                     values[j], values[j - 1]));
    }
  }
  if (!std::isfinite(tail_value) || tail_value < -kRuleSlack) {
    throw ValidationError("utility tail value must be nonnegative");
  }
  if (require_nonincreasing &&
      tail_value > values[values.size() - 1] + kRuleSlack) {
    throw ValidationError("utility tail value exceeds f(J_max)");
  }
}

bool is_nonincreasing(const Eigen::VectorXd& values, double tail_value) {
  for (Eigen::Index j = 1; j < values.size(); ++j) {
    if (values[j] > values[j - 1] + kRuleSlack) return false;
  }
  return tail_value <= values[values.size() - 1] + kRuleSlack;
}

}  // namespace

WelfareRule::WelfareRule(Eigen::VectorXd values, double tail_slope,
                         std::string label)
    : values_(std::move(values)),
      tail_slope_(tail_slope),
      label_(std::move(label)) {
  check_welfare(values_, tail_slope_);
  tail_slope_ = std::max(tail_slope_, 0.0);
}

double WelfareRule::operator()(int j) const {
  if (j <= 0) return 0.0;
  const int j_max = max_tabulated();
  if (j <= j_max) return values_[j - 1];
  return values_[j_max - 1] + tail_slope_ * (j - j_max);
}

WelfareRule WelfareRule::scaled(double factor) const {
  return WelfareRule(values_ * factor, tail_slope_ * factor, label_);
}

UtilityRule::UtilityRule(Eigen::VectorXd values, double tail_value)
    : UtilityRule(std::move(values), tail_value, true) {}

UtilityRule::UtilityRule(Eigen::VectorXd values, double tail_value,
                         bool nonincreasing)
    : values_(std::move(values)), tail_value_(tail_value) {
  check_utility(values_, tail_value_, nonincreasing);
  values_ = values_.cwiseMax(0.0);
  tail_value_ = std::max(tail_value_, 0.0);
  nonincreasing_ = is_nonincreasing(values_, tail_value_);
}

UtilityRule UtilityRule::Unrestricted(Eigen::VectorXd values,
                                      double tail_value) {
  return UtilityRule(std::move(values), tail_value, false);
}

double UtilityRule::operator()(int j) const {
  if (j <= 0) return 0.0;
  if (j <= max_tabulated()) return values_[j - 1];
  return tail_value_;
}

UtilityRule UtilityRule::scaled(double factor) const {
  return UtilityRule(values_ * factor, tail_value_ * factor, nonincreasing_);
}

WelfareRule make_welfare_rule(const WelfareFamily& family, int j_max) {
  if (j_max < 1) throw ValidationError("J_max must be positive");
  return std::visit(
      [j_max](const auto& f) -> WelfareRule {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Bent>) {
          if (f.b < 1) throw ValidationError("bent rule needs b >= 1");
          if (!(f.C >= 0.0 && f.C <= 1.0)) {
            throw ValidationError("bent rule needs C in [0, 1]");
          }
          const int size = std::max(j_max, f.b);
          Eigen::VectorXd values(size);
          for (int j = 1; j <= size; ++j) {
            values[j - 1] = (1.0 - f.C) * j + f.C * std::min(j, f.b);
          }
          std::ostringstream label;
          label << "bent(" << f.b << "," << f.C << ")";
          return WelfareRule(std::move(values), 1.0 - f.C, label.str());
        } else if constexpr (std::is_same_v<T, family::SetCovering>) {
          return WelfareRule(Eigen::VectorXd::Ones(j_max), 0.0, "set_covering");
        } else if constexpr (std::is_same_v<T, family::Wta>) {
          if (!(f.p_d > 0.0 && f.p_d <= 1.0)) {
            throw ValidationError("wta rule needs p_d in (0, 1]");
          }
          Eigen::VectorXd values(j_max);
          for (int j = 1; j <= j_max; ++j) {
            values[j - 1] = 1.0 - std::pow(1.0 - f.p_d, j);
          }
          const double next = 1.0 - std::pow(1.0 - f.p_d, j_max + 1);
          std::ostringstream label;
          label << "wta(" << f.p_d << ")";
          return WelfareRule(values, std::max(next - values[j_max - 1], 0.0),
                             label.str());
        } else if constexpr (std::is_same_v<T, family::Harmonic>) {
          Eigen::VectorXd values(j_max);
          double sum = 0.0;
          for (int j = 1; j <= j_max; ++j) {
            sum += 1.0 / j;
            values[j - 1] = sum;
          }
          return WelfareRule(std::move(values), 1.0 / (j_max + 1), "harmonic");
        } else {
          return WelfareRule(f.values, f.tail_slope, "explicit");
        }
      },
      family);
}

double curvature(const WelfareRule& w) { return 1.0 - w.tail_slope() / w(1); }

std::optional<family::Bent> as_bent(const WelfareRule& w) {
  const Eigen::VectorXd& v = w.values();
  if (std::abs(v[0] - 1.0) > kRuleSlack) return std::nullopt;
  int b = 1;
  while (b < v.size() && std::abs(v[b] - v[b - 1] - 1.0) <= kRuleSlack) ++b;
  const double slope = w.tail_slope();
  for (Eigen::Index j = b; j < v.size(); ++j) {
    if (std::abs(v[j] - v[j - 1] - slope) > kRuleSlack) return std::nullopt;
  }
  // A rule with unit slope everywhere is linear: report it as bent(1, 0).
  if (b == v.size() && std::abs(slope - 1.0) <= kRuleSlack) {
    return family::Bent{1, 0.0};
  }
  return family::Bent{b, 1.0 - slope};
}

bool is_set_covering(const WelfareRule& w) {
  return w.tail_slope() <= kRuleSlack &&
         (w.values().array() - 1.0).abs().maxCoeff() <= kRuleSlack;
}

Eigen::VectorXd convert_rule(Conversion direction, const Eigen::VectorXd& rule) {
  const Eigen::Index n = rule.size();
  if (n == 0) throw ValidationError("cannot convert an empty rule");
  Eigen::VectorXd out(n);
  if (direction == Conversion::kToMarginal) {
    out[0] = rule[0];
    for (Eigen::Index j = 1; j < n; ++j) out[j] = rule[j] - rule[j - 1];
    check_utility(out, out[n - 1], true);
  } else {
    check_utility(rule, rule[n - 1], true);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      sum += rule[j];
      out[j] = sum;
    }
  }
  return out;
}

}  // namespace brwalk
