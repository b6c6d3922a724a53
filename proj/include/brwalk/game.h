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

#ifndef BRWALK_GAME_H_
#define BRWALK_GAME_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "brwalk/rules.h"

namespace brwalk {

// Sorted, duplicate-free list of resource indices.
using Action = std::vector<int>;

struct Resource {
  std::string id;
  int welfare = 0;  // index into Game::welfare_rules()
  int utility = 0;  // index into Game::utility_rules()
  double value = 1.0;
};

// Per-player index into that player's action set. Index 0 is always the
// empty action, so the default-constructed profile of a game is the null
// start of a walk.
class JointAction {
 public:
  JointAction() = default;
  explicit JointAction(std::vector<int> choices) : choices_(std::move(choices)) {}
  static JointAction Empty(int num_players) {
    return JointAction(std::vector<int>(num_players, 0));
  }

  int operator[](int player) const { return choices_[player]; }
  int& operator[](int player) { return choices_[player]; }
  int size() const { return static_cast<int>(choices_.size()); }
  const std::vector<int>& choices() const { return choices_; }

  friend bool operator==(const JointAction&, const JointAction&) = default;

 private:
  std::vector<int> choices_;
};

struct JointActionHash {
  std::size_t operator()(const JointAction& a) const;
};

// A resource allocation game: per-resource welfare and utility rules scaled
// by the resource value, and per-player action sets.
//
// Immutable after construction. The constructor validates every invariant:
// resource references, f(1) = w(1) on every resource, and that each rule is
// tabulated at least as far as the number of players that can reach the
// resource.
class Game {
 public:
  // `action_sets[i]` lists player i's actions as resource indices. The empty
  // action is inserted at index 0, so caller index k becomes k + 1. Resource
  // lists inside an action are sorted and deduplicated.
  Game(std::vector<WelfareRule> welfare_rules,
       std::vector<UtilityRule> utility_rules, std::vector<Resource> resources,
       std::vector<std::vector<Action>> action_sets);

  int num_players() const { return static_cast<int>(action_sets_.size()); }
  int num_resources() const { return static_cast<int>(resources_.size()); }
  const std::vector<WelfareRule>& welfare_rules() const { return welfare_rules_; }
  const std::vector<UtilityRule>& utility_rules() const { return utility_rules_; }
  const std::vector<Resource>& resources() const { return resources_; }
  const std::vector<Action>& actions(int player) const {
    return action_sets_[player];
  }
  const Action& action(int player, int index) const {
    return action_sets_[player][index];
  }

  // v_r * w_r(j) and v_r * f_r(j).
  double resource_welfare(int r, int count) const {
    const Resource& res = resources_[r];
    return res.value * welfare_rules_[res.welfare](count);
  }
  double resource_utility(int r, int count) const {
    const Resource& res = resources_[r];
    return res.value * utility_rules_[res.utility](count);
  }

  // Number of players that have at least one action containing r.
  int reach(int r) const { return reach_[r]; }

  // Copy of this game with the utility rules replaced. `rules` must be aligned
  // with utility_rules().
  Game with_utility_rules(std::vector<UtilityRule> rules) const;

  void validate(const JointAction& a) const;

 private:
  std::vector<WelfareRule> welfare_rules_;
  std::vector<UtilityRule> utility_rules_;
  std::vector<Resource> resources_;
  std::vector<std::vector<Action>> action_sets_;
  std::vector<int> reach_;
};

// |a|_r for every resource.
std::vector<int> loads(const Game& g, const JointAction& a);

// W(a) = sum_r v_r w_r(|a|_r).
double welfare(const Game& g, const JointAction& a);
double welfare_from_loads(const Game& g, std::span<const int> loads);

// U^mc_i(a) = sum_{r in a_i} v_r f_r(|a|_r).
double utility_mc(const Game& g, const JointAction& a, int player);

// Utility player i would collect by playing `action_index` against a_{-i}.
double deviation_utility(const Game& g, const JointAction& a, int player,
                         int action_index, std::span<const int> loads);

// Phi(a) = sum_r v_r sum_{j <= |a|_r} f_r(j).
double potential(const Game& g, const JointAction& a);

// Rescales every resource so that w_r(1) = 1, moving the factor into v_r.
// Welfare and utility of every joint action are unchanged.
Game normalize(const Game& g);

}  // namespace brwalk

#endif  // BRWALK_GAME_H_
