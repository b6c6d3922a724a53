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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "brwalk/designs.h"
#include "brwalk/errors.h"

namespace brwalk {
namespace {

constexpr double kIntegralTolerance = 1e-9;
constexpr double kZeroTheta = 1e-12;

int smallest_scale(const std::vector<double>& sizes, int bound) {
  if (bound < 1) throw ValidationError("denominator bound must be >= 1");
  for (int q = 1; q <= bound; ++q) {
    bool integral = true;
    for (double s : sizes) {
      const double scaled = s * q;
      if (std::abs(scaled - std::round(scaled)) >
          kIntegralTolerance * std::max(1.0, scaled)) {
        integral = false;
        break;
      }
    }
    if (integral) return q;
  }
  std::ostringstream out;
  out << "block sizes are not integral at any scale up to the denominator "
         "bound "
      << bound;
  throw BudgetError(out.str());
}

// Collects resources block by block under the chosen encoding.
class BlockBuilder {
 public:
  BlockBuilder(BlockEncoding encoding, int scale)
      : encoding_(encoding), scale_(scale) {}

  std::vector<int> add(const std::string& id, double size, int welfare,
                       int utility) {
    std::vector<int> members;
    if (encoding_ == BlockEncoding::kWeighted) {
      members.push_back(push(id, size, welfare, utility));
      return members;
    }
    const long copies = std::lround(size * scale_);
    for (long c = 0; c < copies; ++c) {
      members.push_back(push(id + "#" + std::to_string(c), 1.0, welfare, utility));
    }
    return members;
  }

  std::vector<Resource> take() { return std::move(resources_); }

 private:
  int push(std::string id, double value, int welfare, int utility) {
    resources_.push_back(Resource{std::move(id), welfare, utility, value});
    return static_cast<int>(resources_.size()) - 1;
  }

  BlockEncoding encoding_;
  int scale_;
  std::vector<Resource> resources_;
};

int scale_for(const Scaling& scaling, const std::vector<double>& sizes) {
  return scaling.encoding == BlockEncoding::kWeighted
             ? 1
             : smallest_scale(sizes, scaling.denominator_bound);
}

// Same rule, tabulated to at least `n` entries.
UtilityRule extended(const UtilityRule& f, int n) {
  if (f.max_tabulated() >= n) return f;
  Eigen::VectorXd values(n);
  for (int j = 1; j <= n; ++j) values[j - 1] = f(j);
  return f.nonincreasing() ? UtilityRule(values, f.tail_value())
                           : UtilityRule::Unrestricted(values, f.tail_value());
}

void append(Action& into, const std::vector<int>& members) {
  into.insert(into.end(), members.begin(), members.end());
}

}  // namespace

Construction build_example3(double eps, const std::optional<UtilityRule>& f) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in [0, 1)");
  const WelfareRule w = make_welfare_rule(family::SetCovering{}, 2);
  const UtilityRule u = f ? extended(*f, 2) : design_common_interest(w);
  std::vector<Resource> resources{
      {"r1", 0, 0, 1.0}, {"r2", 0, 0, 1.0 + eps}, {"r3", 0, 0, eps}};
  Game g({w}, {u}, std::move(resources), {{{0}, {1}}, {{1}, {2}}});
  ConstructionMeta meta;
  meta.kind = "example3";
  meta.parameters = {{"eps", eps}};
  meta.opt = JointAction({1, 1});
  if (!f || *f == design_common_interest(w)) {
    meta.case_label = "common_interest";
    meta.target_ratio = (1.0 + 2.0 * eps) / (2.0 + eps);
    meta.ne = JointAction({2, 2});
    meta.recommended_tiebreak = "incumbent_then_lex";
  } else {
    meta.case_label = "custom";
  }
  return Construction{std::move(g), std::move(meta)};
}

Construction build_thm2_game(double C, const UtilityRule& f,
                             const Scaling& scaling) {
  if (!(C >= 0.0 && C <= 1.0)) throw ValidationError("C must lie in [0, 1]");
  const WelfareRule w = make_welfare_rule(family::Bent{1, C}, 2);
  const UtilityRule u = extended(f, 2);
  const double f2 = u(2);
  const int scale = scale_for(scaling, {1.0, f2});
  BlockBuilder blocks(scaling.encoding, scale);
  const auto r1 = blocks.add("R1", 1.0, 0, 0);
  const auto r2 = blocks.add("R2", 1.0, 0, 0);
  const auto r3 = blocks.add("R3", f2, 0, 0);

  ConstructionMeta meta;
  meta.kind = "thm2_two_agent";
  meta.scale = scale;
  meta.parameters = {{"C", C}, {"f2", f2}};
  const double x = 1.0;
  const double z = scaling.encoding == BlockEncoding::kWeighted
                       ? f2
                       : static_cast<double>(r3.size()) / scale;
  std::vector<std::vector<Action>> sets(2);
  sets[0] = {r1, r2};
  if (f2 <= 1.0 + kRuleSlack) {
    sets[1] = {r3, r1};
    meta.opt = JointAction({2, 2});
    if (f2 <= 1.0 - C + kRuleSlack) {
      meta.case_label = "a";
      meta.ne = JointAction({1, 1});
      meta.target_ratio = (x + z) / (2.0 * x);
    } else {
      meta.case_label = "b";
      meta.ne = JointAction({1, 2});
      meta.target_ratio = (2.0 - C) * x / (2.0 * x);
    }
  } else {
    sets[1] = {r1, r3};
    meta.case_label = "c";
    meta.ne = JointAction({1, 1});
    meta.opt = JointAction({2, 2});
    meta.target_ratio = (2.0 - C) * x / (x + z);
  }
  Game g({w}, {u}, blocks.take(), std::move(sets));
  return Construction{std::move(g), std::move(meta)};
}

Construction build_ci_chain(int n, double C) {
  if (n < 2) throw ValidationError("chain needs n >= 2 agents");
  if (!(C >= 0.0 && C <= 1.0)) throw ValidationError("C must lie in [0, 1]");
  const WelfareRule w = make_welfare_rule(family::Bent{1, C}, 2);
  const UtilityRule u = design_common_interest(w);
  std::vector<Resource> resources;
  for (int j = 1; j <= n; ++j) {
    resources.push_back({"opt_" + std::to_string(j), 0, 0, C});
  }
  for (int j = 1; j <= n - 1; ++j) {
    resources.push_back({"both_" + std::to_string(j), 0, 0, 1.0});
  }
  resources.push_back({"r_n", 0, 0, 1.0});
  const auto opt_of = [](int j) { return j - 1; };
  const auto both_of = [n](int j) { return n + j - 1; };
  std::vector<std::vector<Action>> sets(n);
  for (int j = 1; j <= n; ++j) {
    const Action br{j < n ? both_of(j) : 2 * n - 1};
    Action opt{opt_of(j)};
    if (j >= 2) opt.push_back(both_of(j - 1));
    sets[j - 1] = {br, opt};
  }
  ConstructionMeta meta;
  meta.kind = "ci_chain";
  meta.case_label = "common_interest";
  meta.parameters = {{"n", n}, {"C", C}};
  meta.target_ratio = n / ((n - 1) * (1.0 + C) + C);
  meta.ne = JointAction(std::vector<int>(n, 1));
  meta.opt = JointAction(std::vector<int>(n, 2));
  Game g({w}, {u}, std::move(resources), std::move(sets));
  return Construction{std::move(g), std::move(meta)};
}

Construction build_setcov_stack_spread(int n, const UtilityRule& f,
                                       int base_size, const Scaling& scaling) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (base_size < 1) throw ValidationError("base_size must be >= 1");
  const WelfareRule w = make_welfare_rule(family::SetCovering{}, n);
  const UtilityRule u = extended(f, n);
  std::vector<double> sizes{static_cast<double>(base_size)};
  for (int i = 1; i <= n; ++i) sizes.push_back(u(i) * base_size);
  const int scale = scale_for(scaling, sizes);
  BlockBuilder blocks(scaling.encoding, scale);
  const auto shared = blocks.add("R0", base_size, 0, 0);
  std::vector<std::vector<Action>> sets(n);
  std::vector<double> realized(n);
  for (int i = 1; i <= n; ++i) {
    const auto own = blocks.add("R" + std::to_string(i), sizes[i], 0, 0);
    realized[i - 1] = scaling.encoding == BlockEncoding::kWeighted
                          ? sizes[i]
                          : static_cast<double>(own.size()) / scale;
    sets[i - 1] = {shared, own};
  }
  const int stacker = static_cast<int>(
      std::min_element(realized.begin(), realized.end()) - realized.begin());
  double spread_total = 0.0;
  for (double r : realized) spread_total += r;
  std::vector<int> opt(n, 2);
  opt[stacker] = 1;

  ConstructionMeta meta;
  meta.kind = "setcov_stack_spread";
  meta.case_label = "stack";
  meta.scale = scale;
  meta.parameters = {{"n", n}, {"base_size", base_size}};
  meta.target_ratio =
      base_size / (base_size + spread_total - realized[stacker]);
  meta.ne = JointAction(std::vector<int>(n, 1));
  meta.opt = JointAction(std::move(opt));
  Game g({w}, {u}, blocks.take(), std::move(sets));
  return Construction{std::move(g), std::move(meta)};
}

Construction build_poa_matching(const LPInstance& lp, const LPSolution& theta,
                                const std::vector<WelfareRule>& ws,
                                const std::vector<UtilityRule>& fs, int N1,
                                int N2, const Scaling& scaling) {
  if (theta.status != LpStatus::kOptimal) {
    throw ValidationError("matching game needs an optimal LP solution");
  }
  if (lp.N != N1) throw ValidationError("LP was not solved at N1");
  if (N2 <= N1) throw ValidationError("N2 must exceed N1");
  if (ws.size() != fs.size()) throw ValidationError("rule lists must be aligned");
  if (theta.theta.size() != static_cast<Eigen::Index>(lp.index.size())) {
    throw ValidationError("LP solution does not match the instance");
  }

  std::vector<int> types;
  std::vector<double> sizes;
  for (std::size_t t = 0; t < lp.index.size(); ++t) {
    if (theta.theta[t] > kZeroTheta) {
      types.push_back(static_cast<int>(t));
      sizes.push_back(theta.theta[t] / N2);
    }
  }
  const int scale = scale_for(scaling, sizes);
  BlockBuilder blocks(scaling.encoding, scale);
  std::vector<Action> ne(N2), opt(N2);
  for (std::size_t s = 0; s < types.size(); ++s) {
    const auto [a, x, b, l] = lp.index[types[s]];
    const int D = N2 + a + x - 1;
    std::vector<std::vector<int>> block(D + 1);
    for (int k = 1; k <= D; ++k) {
      std::ostringstream id;
      id << "R" << k << "_" << a << "_" << x << "_" << b << "_" << l;
      block[k] = blocks.add(id.str(), sizes[s], l, l);
    }
    for (int i = 1; i <= N2; ++i) {
      for (int k = i; k <= i + a + x - 1; ++k) append(ne[i - 1], block[k]);
      if (i >= a + b + x) {
        for (int k = std::max(1, i - b); k <= std::min(D, x + i - 1); ++k) {
          append(opt[i - 1], block[k]);
        }
      }
    }
  }
  std::vector<std::vector<Action>> sets(N2);
  std::vector<int> ne_index(N2, 1), opt_index(N2, 0);
  for (int i = 0; i < N2; ++i) {
    sets[i].push_back(ne[i]);
    if (!opt[i].empty()) {
      sets[i].push_back(opt[i]);
      opt_index[i] = 2;
    }
  }
  ConstructionMeta meta;
  meta.kind = "poa_matching";
  meta.case_label = "lp";
  meta.scale = scale;
  meta.parameters = {{"N1", N1}, {"N2", N2}, {"Q", theta.Q}};
  meta.target_ratio = 1.0 / theta.Q;
  meta.ne = JointAction(std::move(ne_index));
  meta.opt = JointAction(std::move(opt_index));
  Game g(ws, fs, blocks.take(), std::move(sets));
  return Construction{std::move(g), std::move(meta)};
}

}  // namespace brwalk
