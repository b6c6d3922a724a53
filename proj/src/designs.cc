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

#include "brwalk/designs.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "brwalk/errors.h"
#include "brwalk/series.h"

namespace brwalk {
namespace {

void check_curvature(double C) {
  if (!(C >= 0.0 && C <= 1.0)) {
    throw ValidationError("curvature C must lie in [0, 1]");
  }
}

void check_j_max(int j_max) {
  if (j_max < 1) throw ValidationError("J_max must be positive");
}

// Clamps f from below by `floor` and replaces it by its running minimum.
void make_monotone(Eigen::VectorXd& f, double floor) {
  for (Eigen::Index j = 1; j < f.size(); ++j) {
    f[j] = std::min(f[j - 1], std::max(f[j], floor));
  }
}

UtilityRule asymptotic_b1(double C, int j_max) {
  const double e = euler<double>();
  const double rho = e / (e - C);
  const double floor = 1.0 - C;
  Eigen::VectorXd f(j_max);
  f[0] = 1.0;
  for (int j = 2; j <= j_max; ++j) {
    f[j - 1] = weighted_factorial_tail<double>(
        j, [&](int i) { return rho * ((1.0 - C) * i + C) - 1.0; });
  }
  make_monotone(f, floor);
  return UtilityRule(std::move(f), std::min(f[j_max - 1], rho * floor));
}

UtilityRule asymptotic_c1(int b, int j_max) {
  double ratio = 1.0;  // b^b / b!
  for (int i = 1; i <= b; ++i) ratio *= static_cast<double>(b) / i;
  const double rho_b = 1.0 / (1.0 - ratio / exp_series<double>(b));
  Eigen::VectorXd f(j_max);
  f[0] = 1.0;
  for (int j = 1; j < std::min(b, j_max); ++j) {
    f[j] = (static_cast<double>(j) / b) * (f[j - 1] - rho_b) + 1.0;
  }
  for (int j = b + 1; j <= j_max; ++j) {
    f[j - 1] = (rho_b - 1.0) * factorial_tail<double>(j, static_cast<double>(b));
  }
  make_monotone(f, 0.0);
  return UtilityRule(std::move(f), 0.0);
}

}  // namespace

design::ParetoSetcov design::ParetoSetcov::FromQ(double q) {
  const double e = euler<double>();
  if (!(q >= 0.5 - 1e-12 && q <= 1.0 - 1.0 / e + 1e-12)) {
    throw ValidationError("Q must lie in [1/2, 1 - 1/e]");
  }
  return ParetoSetcov{(1.0 - q) / q};
}

std::string design_name(const DesignSpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, design::CommonInterest>) {
          return "common_interest";
        } else if constexpr (std::is_same_v<T, design::OneRoundBent>) {
          return "one_round";
        } else if constexpr (std::is_same_v<T, design::AsymptoticBent>) {
          return "asymptotic";
        } else {
          return "pareto";
        }
      },
      spec);
}

double pareto_chi_threshold() { return 1.0 / (euler<double>() - 1.0); }

UtilityRule design_common_interest(const WelfareRule& w) {
  const Eigen::Index n = w.values().size();
  Eigen::VectorXd f(n);
  f[0] = w.values()[0];
  for (Eigen::Index j = 1; j < n; ++j) {
    f[j] = w.values()[j] - w.values()[j - 1];
  }
  return UtilityRule(std::move(f), std::min(w.tail_slope(), f[n - 1]));
}

UtilityRule design_one_round_bent(double C, int j_max) {
  check_curvature(C);
  check_j_max(j_max);
  const double tail = (2.0 - 2.0 * C) / (2.0 - C);
  Eigen::VectorXd f = Eigen::VectorXd::Constant(j_max, tail);
  f[0] = 1.0;
  return UtilityRule(std::move(f), j_max == 1 ? std::min(1.0, tail) : tail);
}

UtilityRule design_asymptotic(int b, double C, int j_max) {
  check_curvature(C);
  check_j_max(j_max);
  if (b < 1) throw ValidationError("bent parameter b must be >= 1");
  if (b > 1 && C != 1.0) {
    std::ostringstream out;
    out << "asymptotic design is available for b = 1 or C = 1, not (b=" << b
        << ", C=" << C << ")";
    throw ValidationError(out.str());
  }
  if (C == 1.0 && b > 1) return asymptotic_c1(b, j_max);
  return asymptotic_b1(C, j_max);
}

UtilityRule design_pareto_setcov(double chi, int j_max) {
  check_j_max(j_max);
  const double e = euler<double>();
  const double threshold = 1.0 / (e - 1.0);
  if (!(chi >= threshold * (1.0 - 1e-12))) {
    std::ostringstream out;
    out << "chi=" << chi << " is below the achievable threshold 1/(e-1)";
    throw ValidationError(out.str());
  }
  const double eps = std::numeric_limits<double>::epsilon();
  double delta = 1.0 - chi * (e - 1.0);
  if (std::abs(delta) < 64.0 * eps) delta = 0.0;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(j_max);
  f[0] = 1.0;
  double factorial = 1.0;  // (j-1)!
  for (int j = 2; j <= j_max; ++j) {
    factorial *= (j - 1);
    const double head = delta == 0.0 ? 0.0 : factorial * delta;
    const double tail = chi * factorial_tail<double>(j, 1.0);
    double value = head + tail;
    if (value <= 8.0 * eps * (std::abs(head) + tail)) break;
    f[j - 1] = value;
  }
  make_monotone(f, 0.0);
  return UtilityRule(std::move(f), 0.0);
}

UtilityRule design_for(const DesignSpec& spec, const WelfareRule& w) {
  const double w1 = w(1);
  const int j_max = w.max_tabulated();
  const double C = curvature(w);
  const UtilityRule unit = std::visit(
      [&](const auto& d) -> UtilityRule {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, design::CommonInterest>) {
          return design_common_interest(w.scaled(1.0 / w1));
        } else if constexpr (std::is_same_v<T, design::OneRoundBent>) {
          return design_one_round_bent(d.C.value_or(C), j_max);
        } else if constexpr (std::is_same_v<T, design::AsymptoticBent>) {
          return design_asymptotic(d.b, d.C.value_or(C), j_max);
        } else {
          return design_pareto_setcov(d.chi, j_max);
        }
      },
      spec);
  return w1 == 1.0 ? unit : unit.scaled(w1);
}

Game apply_design(const Game& g, const DesignSpec& spec) {
  std::vector<UtilityRule> rules;
  rules.reserve(g.welfare_rules().size());
  for (const WelfareRule& w : g.welfare_rules()) rules.push_back(design_for(spec, w));
  std::vector<Resource> resources = g.resources();
  for (Resource& r : resources) r.utility = r.welfare;
  std::vector<std::vector<Action>> sets;
  for (int i = 0; i < g.num_players(); ++i) {
    sets.emplace_back(g.actions(i).begin() + 1, g.actions(i).end());
  }
  return Game(g.welfare_rules(), std::move(rules), std::move(resources),
              std::move(sets));
}

}  // namespace brwalk
