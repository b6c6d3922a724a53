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

#include "brwalk/game.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "brwalk/errors.h"

namespace brwalk {

std::size_t JointActionHash::operator()(const JointAction& a) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (int c : a.choices()) {
    h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

Game::Game(std::vector<WelfareRule> welfare_rules,
           std::vector<UtilityRule> utility_rules,
           std::vector<Resource> resources,
           std::vector<std::vector<Action>> action_sets)
    : welfare_rules_(std::move(welfare_rules)),
      utility_rules_(std::move(utility_rules)),
      resources_(std::move(resources)) {
  const int num_welfare = static_cast<int>(welfare_rules_.size());
  const int num_utility = static_cast<int>(utility_rules_.size());
  for (const Resource& r : resources_) {
    if (r.welfare < 0 || r.welfare >= num_welfare || r.utility < 0 ||
        r.utility >= num_utility) {
      throw ValidationError("resource '" + r.id + "' references a missing rule");
    }
    if (!std::isfinite(r.value) || r.value < 0.0) {
      throw ValidationError("resource '" + r.id + "' has a negative value");
    }
    const double w1 = welfare_rules_[r.welfare](1);
    const double f1 = utility_rules_[r.utility](1);
    if (std::abs(w1 - f1) > kRuleSlack * std::max(1.0, w1)) {
      std::ostringstream out;
      out << "resource '" << r.id << "': utility f(1)=" << f1
          << " differs from welfare w(1)=" << w1;
      throw ValidationError(out.str());
    }
  }

  action_sets_.reserve(action_sets.size());
  for (auto& set : action_sets) {
    std::vector<Action> actions;
    actions.reserve(set.size() + 1);
    actions.emplace_back();
    for (Action& action : set) {
      std::sort(action.begin(), action.end());
      action.erase(std::unique(action.begin(), action.end()), action.end());
      for (int r : action) {
        if (r < 0 || r >= num_resources()) {
          throw ValidationError("action references an unknown resource");
        }
      }
      actions.push_back(std::move(action));
    }
    action_sets_.push_back(std::move(actions));
  }

  reach_.assign(resources_.size(), 0);
  std::vector<int> seen(resources_.size(), -1);
  for (int i = 0; i < num_players(); ++i) {
    for (const Action& action : action_sets_[i]) {
      for (int r : action) {
        if (seen[r] != i) {
          seen[r] = i;
          ++reach_[r];
        }
      }
    }
  }
  for (int r = 0; r < num_resources(); ++r) {
    const Resource& res = resources_[r];
    const int needed = reach_[r];
    if (welfare_rules_[res.welfare].max_tabulated() < needed ||
        utility_rules_[res.utility].max_tabulated() < needed) {
      std::ostringstream out;
      out << "resource '" << res.id << "' can be selected by " << needed
          << " players but its rules are tabulated only to "
          << std::min(welfare_rules_[res.welfare].max_tabulated(),
                      utility_rules_[res.utility].max_tabulated());
      throw ValidationError(out.str());
    }
  }
}

Game Game::with_utility_rules(std::vector<UtilityRule> rules) const {
  if (rules.size() != utility_rules_.size()) {
    throw ValidationError("utility rule list does not match the game");
  }
  std::vector<std::vector<Action>> sets;
  sets.reserve(action_sets_.size());
  for (const auto& actions : action_sets_) {
    sets.emplace_back(actions.begin() + 1, actions.end());
  }
  return Game(welfare_rules_, std::move(rules), resources_, std::move(sets));
}

void Game::validate(const JointAction& a) const {
  if (a.size() != num_players()) {
    throw ValidationError("joint action has the wrong number of players");
  }
  for (int i = 0; i < num_players(); ++i) {
    if (a[i] < 0 || a[i] >= static_cast<int>(action_sets_[i].size())) {
      throw ValidationError("joint action index out of range");
    }
  }
}

std::vector<int> loads(const Game& g, const JointAction& a) {
  std::vector<int> counts(g.num_resources(), 0);
  for (int i = 0; i < g.num_players(); ++i) {
    for (int r : g.action(i, a[i])) ++counts[r];
  }
  return counts;
}

double welfare_from_loads(const Game& g, std::span<const int> counts) {
  double total = 0.0;
  for (int r = 0; r < g.num_resources(); ++r) {
    if (counts[r] > 0) total += g.resource_welfare(r, counts[r]);
  }
  return total;
}

double welfare(const Game& g, const JointAction& a) {
  const std::vector<int> counts = loads(g, a);
  return welfare_from_loads(g, counts);
}

double utility_mc(const Game& g, const JointAction& a, int player) {
  const std::vector<int> counts = loads(g, a);
  double total = 0.0;
  for (int r : g.action(player, a[player])) {
    total += g.resource_utility(r, counts[r]);
  }
  return total;
}

double deviation_utility(const Game& g, const JointAction& a, int player,
                         int action_index, std::span<const int> counts) {
  const Action& current = g.action(player, a[player]);
  double total = 0.0;
  for (int r : g.action(player, action_index)) {
    const bool held = std::binary_search(current.begin(), current.end(), r);
    total += g.resource_utility(r, counts[r] + (held ? 0 : 1));
  }
  return total;
}

double potential(const Game& g, const JointAction& a) {
  const std::vector<int> counts = loads(g, a);
  double total = 0.0;
  for (int r = 0; r < g.num_resources(); ++r) {
    for (int j = 1; j <= counts[r]; ++j) total += g.resource_utility(r, j);
  }
  return total;
}

Game normalize(const Game& g) {
  std::vector<WelfareRule> welfare_rules;
  std::vector<double> welfare_scale;
  for (const WelfareRule& w : g.welfare_rules()) {
    const double s = w(1);
    welfare_scale.push_back(s);
    welfare_rules.push_back(s == 1.0 ? w : w.scaled(1.0 / s));
  }
  std::vector<UtilityRule> utility_rules;
  for (const UtilityRule& f : g.utility_rules()) {
    const double s = f(1);
    utility_rules.push_back(s == 1.0 || s == 0.0 ? f : f.scaled(1.0 / s));
  }
  std::vector<Resource> resources = g.resources();
  for (Resource& r : resources) r.value *= welfare_scale[r.welfare];

  std::vector<std::vector<Action>> sets;
  for (int i = 0; i < g.num_players(); ++i) {
    const auto& actions = g.actions(i);
    sets.emplace_back(actions.begin() + 1, actions.end());
  }
  return Game(std::move(welfare_rules), std::move(utility_rules),
              std::move(resources), std::move(sets));
}

}  // namespace brwalk
