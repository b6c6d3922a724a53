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

#include "brwalk/dynamics.h"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "brwalk/errors.h"

namespace brwalk {
namespace {

struct StepKey {
  int step;
  JointAction state;
  friend bool operator==(const StepKey&, const StepKey&) = default;
};

struct StepKeyHash {
  std::size_t operator()(const StepKey& k) const {
    return JointActionHash{}(k.state) * 1000003u ^ static_cast<std::size_t>(k.step);
  }
};

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    return JointActionHash{}(JointAction(v));
  }
};

int choose(const Game& g, const JointAction& a, int player, const TieBreak& tb) {
  const std::vector<int> best = best_responses(g, a, player);
  if (std::holds_alternative<tiebreak::IncumbentThenLex>(tb) &&
      std::binary_search(best.begin(), best.end(), a[player])) {
    return a[player];
  }
  return best.front();
}

Step make_step(const Game& g, const JointAction& state, int tau, int player) {
  return Step{tau, player, state[player], welfare(g, state), potential(g, state)};
}

// Memoized depth-first search over the tie tree. A state at step s is keyed
// by the actions of players that move again and the loads on resources a
// future mover can still touch; welfare of every other resource is already
// final and is banked along the path.
class AdversarialSearch {
 public:
  AdversarialSearch(const Game& g, std::vector<int> movers, std::int64_t cap)
      : g_(g), movers_(std::move(movers)), cap_(cap) {
    const int total = static_cast<int>(movers_.size());
    std::vector<int> last_touch(g_.num_resources(), -1);
    std::vector<int> last_move(g_.num_players(), -1);
    for (int s = 0; s < total; ++s) {
      const int p = movers_[s];
      last_move[p] = s;
      for (const Action& action : g_.actions(p)) {
        for (int r : action) last_touch[r] = s;
      }
    }
    live_players_.resize(total + 1);
    live_resources_.resize(total + 1);
    finalized_.resize(total);
    for (int s = 0; s <= total; ++s) {
      for (int p = 0; p < g_.num_players(); ++p) {
        if (last_move[p] >= s) live_players_[s].push_back(p);
      }
      for (int r = 0; r < g_.num_resources(); ++r) {
        if (last_touch[r] >= s) live_resources_[s].push_back(r);
        if (s < total && last_touch[r] == s) finalized_[s].push_back(r);
      }
    }
  }

  Trajectory run() {
    const int total = static_cast<int>(movers_.size());
    const JointAction root = JointAction::Empty(g_.num_players());
    Trajectory t;
    t.initial = root;
    t.final = root;
    if (total == 0) return t;
    search(root);
    JointAction state = root;
    std::vector<int> counts(g_.num_resources(), 0);
    for (int s = 0; s < total; ++s) {
      const int p = movers_[s];
      const int choice = memo_.at(key(s, state, counts)).best_choice;
      move(state, counts, p, choice);
      t.steps.push_back(make_step(g_, state, s + 1, p));
    }
    t.final = state;
    return t;
  }

 private:
  struct Entry {
    double value;
    int best_choice;
  };
  struct Frame {
    int step;
    JointAction state;
    std::vector<int> counts;
    std::vector<int> key;
    double banked;   // welfare finalized before this state
    double gain_in;  // part of `banked` finalized by the move into this state
    std::vector<int> options;
    std::size_t next = 0;
    double best = std::numeric_limits<double>::infinity();
    int best_choice = -1;
  };

  std::vector<int> key(int step, const JointAction& a,
                       const std::vector<int>& counts) const {
    std::vector<int> k;
    k.reserve(1 + live_players_[step].size() + live_resources_[step].size());
    k.push_back(step);
    for (int p : live_players_[step]) k.push_back(a[p]);
    for (int r : live_resources_[step]) k.push_back(counts[r]);
    return k;
  }

  void move(JointAction& a, std::vector<int>& counts, int p, int choice) const {
    for (int r : g_.action(p, a[p])) --counts[r];
    a[p] = choice;
    for (int r : g_.action(p, a[p])) ++counts[r];
  }

  Frame open(int step, JointAction state, std::vector<int> counts,
             std::vector<int> k, double banked, double gain_in) const {
    Frame f{step,   std::move(state), std::move(counts), std::move(k),
            banked, gain_in,          {}};
    f.options = best_responses(g_, f.state, movers_[step]);
    return f;
  }

  void search(const JointAction& root) {
    const int total = static_cast<int>(movers_.size());
    std::vector<int> zero(g_.num_resources(), 0);
    std::vector<Frame> stack;
    stack.push_back(open(0, root, zero, key(0, root, zero), 0.0, 0.0));
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == top.options.size()) {
        const Entry entry{top.best, top.best_choice};
        const double through = top.gain_in + top.best;
        memo_.emplace(std::move(top.key), entry);
        stack.pop_back();
        if (!stack.empty()) settle(stack.back(), through);
        continue;
      }
      const int s = top.step;
      JointAction child = top.state;
      std::vector<int> counts = top.counts;
      move(child, counts, movers_[s], top.options[top.next]);
      double gained = 0.0;
      for (int r : finalized_[s]) {
        if (counts[r] > 0) gained += g_.resource_welfare(r, counts[r]);
      }
      if (s + 1 == total) {
        best_leaf_ = std::min(best_leaf_, top.banked + gained);
        settle(top, gained);
        continue;
      }
      std::vector<int> k = key(s + 1, child, counts);
      if (auto it = memo_.find(k); it != memo_.end()) {
        best_leaf_ = std::min(best_leaf_, top.banked + gained + it->second.value);
        settle(top, gained + it->second.value);
        continue;
      }
      if (static_cast<std::int64_t>(memo_.size() + stack.size()) >= cap_) {
        std::ostringstream out;
        out << "adversarial enumeration exceeded its cap of " << cap_
            << " states";
        throw EnumerationCapError(out.str(), 0.0, best_leaf_);
      }
      stack.push_back(open(s + 1, std::move(child), std::move(counts),
                           std::move(k), top.banked + gained, gained));
    }
  }

  // Records the value of the current option: welfare finalized by the move
  // plus the best continuation.
  void settle(Frame& f, double value) {
    if (value < f.best) {
      f.best = value;
      f.best_choice = f.options[f.next];
    }
    ++f.next;
  }

  const Game& g_;
  std::vector<int> movers_;
  std::int64_t cap_;
  std::vector<std::vector<int>> live_players_;
  std::vector<std::vector<int>> live_resources_;
  std::vector<std::vector<int>> finalized_;
  std::unordered_map<std::vector<int>, Entry, VectorHash> memo_;
  double best_leaf_ = std::numeric_limits<double>::infinity();
};

std::vector<int> movers_for(const Schedule& schedule, int k) {
  std::vector<int> movers;
  movers.reserve(schedule.order().size() * static_cast<std::size_t>(k));
  for (int round = 0; round < k; ++round) {
    movers.insert(movers.end(), schedule.order().begin(), schedule.order().end());
  }
  return movers;
}

}  // namespace

Schedule Schedule::RoundRobin(int num_players) {
  std::vector<int> order(num_players);
  for (int i = 0; i < num_players; ++i) order[i] = i;
  return Schedule(std::move(order));
}

void Schedule::validate(const Game& g) const {
  if (order_.empty()) throw ValidationError("schedule is empty");
  for (int p : order_) {
    if (p < 0 || p >= g.num_players()) {
      throw ValidationError("schedule names a player outside the game");
    }
  }
}

Horizon Horizon::Rounds(int k) {
  if (k < 1) throw ValidationError("number of rounds must be positive");
  return Horizon(k);
}

JointAction Trajectory::state_after(int count) const {
  JointAction state = initial;
  for (int s = 0; s < count && s < static_cast<int>(steps.size()); ++s) {
    state[steps[s].player] = steps[s].action;
  }
  return state;
}

std::vector<int> best_responses(const Game& g, const JointAction& a, int player) {
  const std::vector<int> counts = loads(g, a);
  const int num_actions = static_cast<int>(g.actions(player).size());
  std::vector<double> value(num_actions);
  double best = -std::numeric_limits<double>::infinity();
  for (int o = 0; o < num_actions; ++o) {
    value[o] = deviation_utility(g, a, player, o, counts);
    best = std::max(best, value[o]);
  }
  std::vector<int> argmax;
  for (int o = 0; o < num_actions; ++o) {
    if (value[o] >= best - kTieTolerance) argmax.push_back(o);
  }
  return argmax;
}

bool is_nash(const Game& g, const JointAction& a) {
  g.validate(a);
  for (int i = 0; i < g.num_players(); ++i) {
    const std::vector<int> best = best_responses(g, a, i);
    if (!std::binary_search(best.begin(), best.end(), a[i])) return false;
  }
  return true;
}

Trajectory k_round_walk(const Game& g, int k, const TieBreak& tb,
                        const Schedule& schedule) {
  if (k < 1) throw ValidationError("number of rounds must be positive");
  schedule.validate(g);
  const std::vector<int> movers = movers_for(schedule, k);
  if (const auto* adv = std::get_if<tiebreak::Adversarial>(&tb)) {
    if (adv->cap < 1) throw ValidationError("enumeration cap must be >= 1");
    return AdversarialSearch(g, movers, adv->cap).run();
  }
  Trajectory t;
  t.initial = JointAction::Empty(g.num_players());
  JointAction state = t.initial;
  t.steps.reserve(movers.size());
  for (std::size_t s = 0; s < movers.size(); ++s) {
    const int p = movers[s];
    state[p] = choose(g, state, p, tb);
    t.steps.push_back(make_step(g, state, static_cast<int>(s) + 1, p));
  }
  t.final = state;
  return t;
}

Trajectory k_round_walk(const Game& g, int k, const TieBreak& tb) {
  return k_round_walk(g, k, tb, Schedule::RoundRobin(g.num_players()));
}

Trajectory k_round_walk(const Game& g, int k, const tiebreak::Adversarial& tb,
                        const std::vector<Schedule>& schedules) {
  if (schedules.empty()) throw ValidationError("no schedules given");
  std::optional<Trajectory> worst;
  double worst_welfare = std::numeric_limits<double>::infinity();
  for (const Schedule& s : schedules) {
    Trajectory t = k_round_walk(g, k, TieBreak(tb), s);
    const double w = welfare(g, t.final);
    if (w < worst_welfare) {
      worst_welfare = w;
      worst = std::move(t);
    }
  }
  return *worst;
}

Trajectory walk_to_equilibrium(const Game& g, const TieBreak& tb,
                               const Schedule& schedule, std::int64_t max_steps) {
  if (std::holds_alternative<tiebreak::Adversarial>(tb)) {
    throw ValidationError(
        "walk_to_equilibrium needs a deterministic tie break; use "
        "worst_reachable_equilibrium for adversarial ties");
  }
  schedule.validate(g);
  Trajectory t;
  t.initial = JointAction::Empty(g.num_players());
  JointAction state = t.initial;
  int tau = 0;
  while (true) {
    bool changed = false;
    for (int p : schedule.order()) {
      if (tau >= max_steps) {
        throw BudgetError("walk did not settle within the step ceiling");
      }
      const int choice = choose(g, state, p, tb);
      changed = changed || choice != state[p];
      state[p] = choice;
      t.steps.push_back(make_step(g, state, ++tau, p));
    }
    if (!changed) break;
  }
  t.final = state;
  return t;
}

ReachableEquilibrium worst_reachable_equilibrium(const Game& g,
                                                 const Schedule& schedule,
                                                 std::int64_t cap) {
  schedule.validate(g);
  const int period = static_cast<int>(schedule.order().size());
  std::unordered_set<StepKey, StepKeyHash> seen;
  std::vector<StepKey> frontier{StepKey{0, JointAction::Empty(g.num_players())}};
  seen.insert(frontier.front());
  ReachableEquilibrium worst;
  worst.welfare = std::numeric_limits<double>::infinity();
  std::unordered_set<JointAction, JointActionHash> checked;
  while (!frontier.empty()) {
    StepKey key = std::move(frontier.back());
    frontier.pop_back();
    if (checked.insert(key.state).second && is_nash(g, key.state)) {
      const double w = welfare(g, key.state);
      if (w < worst.welfare) {
        worst.welfare = w;
        worst.state = key.state;
      }
    }
    const int mover = schedule.order()[key.step];
    for (int o : best_responses(g, key.state, mover)) {
      StepKey next{(key.step + 1) % period, key.state};
      next.state[mover] = o;
      if (seen.insert(next).second) {
        if (static_cast<std::int64_t>(seen.size()) > cap) {
          throw EnumerationCapError("reachable-state search exceeded its cap",
                                    0.0, worst.welfare);
        }
        frontier.push_back(std::move(next));
      }
    }
  }
  worst.states_explored = static_cast<std::int64_t>(seen.size());
  return worst;
}

bool reachable_in_one_round(const Game& g, const JointAction& target,
                            const Schedule& schedule) {
  g.validate(target);
  schedule.validate(g);
  JointAction state = JointAction::Empty(g.num_players());
  for (int p : schedule.order()) {
    const std::vector<int> best = best_responses(g, state, p);
    if (!std::binary_search(best.begin(), best.end(), target[p])) return false;
    state[p] = target[p];
  }
  return state == target;
}

Optimum optimum(const Game& g, std::int64_t budget) {
  const int n = g.num_players();
  const int m = g.num_resources();
  std::vector<int> first(m, n), last(m, -1);
  for (int i = 0; i < n; ++i) {
    for (const Action& action : g.actions(i)) {
      for (int r : action) {
        first[r] = std::min(first[r], i);
        last[r] = std::max(last[r], i);
      }
    }
  }

  struct Node {
    double value;
    int parent;
    int action;
  };
  std::vector<std::vector<Node>> layers(n + 1);
  layers[0].push_back(Node{0.0, -1, 0});
  std::vector<std::vector<int>> layer_keys{{}};  // keys of the current layer
  std::vector<int> active;                       // resources carried in keys
  std::vector<int> scratch(m, 0);
  std::int64_t transitions = 0;

  for (int i = 0; i < n; ++i) {
    std::vector<int> next_active;
    std::vector<int> finishing;
    for (int r = 0; r < m; ++r) {
      if (first[r] <= i && i < last[r]) next_active.push_back(r);
      if (last[r] == i) finishing.push_back(r);
    }
    std::unordered_map<std::vector<int>, int, VectorHash> index;
    std::vector<std::vector<int>> next_keys;
    std::vector<Node>& out = layers[i + 1];
    const auto& actions = g.actions(i);
    for (std::size_t s = 0; s < layer_keys.size(); ++s) {
      transitions += static_cast<std::int64_t>(actions.size());
      if (transitions > budget) {
        std::ostringstream msg;
        msg << "exact optimum exceeded its budget of " << budget
            << " transitions; reduce the instance";
        throw BudgetError(msg.str());
      }
      for (std::size_t o = 0; o < actions.size(); ++o) {
        for (std::size_t t = 0; t < active.size(); ++t) {
          scratch[active[t]] = layer_keys[s][t];
        }
        for (int r : actions[o]) ++scratch[r];
        double value = layers[i][s].value;
        for (int r : finishing) {
          if (scratch[r] > 0) value += g.resource_welfare(r, scratch[r]);
        }
        std::vector<int> key(next_active.size());
        for (std::size_t t = 0; t < next_active.size(); ++t) {
          key[t] = scratch[next_active[t]];
        }
        for (int r : actions[o]) scratch[r] = 0;
        for (int r : active) scratch[r] = 0;
        auto [it, inserted] =
            index.emplace(std::move(key), static_cast<int>(out.size()));
        if (inserted) {
          out.push_back(Node{value, static_cast<int>(s), static_cast<int>(o)});
          next_keys.push_back(it->first);
        } else if (value > out[it->second].value) {
          out[it->second] = Node{value, static_cast<int>(s), static_cast<int>(o)};
        }
      }
    }
    layer_keys = std::move(next_keys);
    active = std::move(next_active);
  }

  Optimum best;
  best.action = JointAction::Empty(n);
  int node = 0;
  best.welfare = layers[n].empty() ? 0.0 : layers[n][0].value;
  for (int i = n; i > 0; --i) {
    best.action[i - 1] = layers[i][node].action;
    node = layers[i][node].parent;
  }
  // Recompute from scratch so the reported value matches welfare() exactly.
  best.welfare = welfare(g, best.action);
  return best;
}

Optimum optimum_brute_force(const Game& g, std::int64_t budget) {
  const int n = g.num_players();
  double size = 1.0;
  for (int i = 0; i < n; ++i) size *= static_cast<double>(g.actions(i).size());
  if (size > static_cast<double>(budget)) {
    throw BudgetError("brute-force optimum exceeds the enumeration budget");
  }
  JointAction a = JointAction::Empty(n);
  std::vector<int> counts(g.num_resources(), 0);
  double current = 0.0;
  auto apply = [&](int player, int sign) {
    for (int r : g.action(player, a[player])) {
      const int before = counts[r];
      counts[r] += sign;
      current += g.resource_welfare(r, counts[r]) - g.resource_welfare(r, before);
    }
  };
  Optimum best{a, 0.0};
  while (true) {
    if (current > best.welfare) best = Optimum{a, current};
    int i = 0;
    for (; i < n; ++i) {
      apply(i, -1);
      if (++a[i] < static_cast<int>(g.actions(i).size())) {
        apply(i, +1);
        break;
      }
      a[i] = 0;
    }
    if (i == n) break;
  }
  best.welfare = welfare(g, best.action);
  return best;
}

double efficiency(const Game& g, const Horizon& horizon, const TieBreak& tb,
                  double optimal_welfare) {
  const Schedule schedule = Schedule::RoundRobin(g.num_players());
  double reached = 0.0;
  if (horizon.unbounded()) {
    if (const auto* adv = std::get_if<tiebreak::Adversarial>(&tb)) {
      reached = worst_reachable_equilibrium(g, schedule, adv->cap).welfare;
    } else {
      reached = welfare(g, walk_to_equilibrium(g, tb, schedule).final);
    }
  } else {
    reached = welfare(g, k_round_walk(g, horizon.rounds(), tb, schedule).final);
  }
  if (optimal_welfare <= 0.0) return 1.0;
  return reached / optimal_welfare;
}

double efficiency(const Game& g, const Horizon& horizon, const TieBreak& tb) {
  return efficiency(g, horizon, tb, optimum(g).welfare);
}

}  // namespace brwalk
