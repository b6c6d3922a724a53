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

#ifndef BRWALK_DYNAMICS_H_
#define BRWALK_DYNAMICS_H_

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "brwalk/game.h"

namespace brwalk {

// Absolute tolerance for membership in an argmax set.
inline constexpr double kTieTolerance = 1e-9;

namespace tiebreak {
// Keep the current action if it is a best response, else the lowest index.
struct IncumbentThenLex {};
// Always the lowest-index best response.
struct Lexicographic {};
// Explore every tie resolution and keep the worst final welfare. `cap` bounds
// the number of distinct (step, joint action) states visited.
struct Adversarial {
  std::int64_t cap = 10'000'000;
};
}  // namespace tiebreak

using TieBreak = std::variant<tiebreak::IncumbentThenLex, tiebreak::Lexicographic,
                              tiebreak::Adversarial>;

// Order in which players move within one round; the walk repeats it k times.
class Schedule {
 public:
  explicit Schedule(std::vector<int> order) : order_(std::move(order)) {}
  static Schedule RoundRobin(int num_players);

  const std::vector<int>& order() const { return order_; }
  void validate(const Game& g) const;

 private:
  std::vector<int> order_;
};

// Number of rounds: a positive count, or run until a full round changes nothing.
class Horizon {
 public:
  static Horizon Rounds(int k);
  static Horizon Unbounded() { return Horizon(0); }

  bool unbounded() const { return rounds_ == 0; }
  int rounds() const { return rounds_; }

 private:
  explicit Horizon(int rounds) : rounds_(rounds) {}
  int rounds_;
};

struct Step {
  int tau = 0;  // 1-based step index
  int player = 0;
  int action = 0;
  double welfare = 0.0;
  double potential = 0.0;
};

struct Trajectory {
  JointAction initial;
  std::vector<Step> steps;
  JointAction final;

  // Joint action after `count` steps.
  JointAction state_after(int count) const;
};

// Full argmax set of player i's utility against a_{-i}, ascending.
std::vector<int> best_responses(const Game& g, const JointAction& a, int player);

bool is_nash(const Game& g, const JointAction& a);

// Runs k rounds of best responses from the empty joint action. Under
// tiebreak::Adversarial the returned trajectory attains the minimum final
// welfare over all tie resolutions (throws EnumerationCapError on overflow).
Trajectory k_round_walk(const Game& g, int k, const TieBreak& tb,
                        const Schedule& schedule);
Trajectory k_round_walk(const Game& g, int k, const TieBreak& tb);

// Adversarial minimum over several turn orders.
Trajectory k_round_walk(const Game& g, int k, const tiebreak::Adversarial& tb,
                        const std::vector<Schedule>& schedules);

// Walks until a full round leaves the joint action unchanged (a Nash
// equilibrium). Throws BudgetError after `max_steps` steps. Deterministic tie
// breaks only.
Trajectory walk_to_equilibrium(const Game& g, const TieBreak& tb,
                               const Schedule& schedule,
                               std::int64_t max_steps = 1'000'000);

// Minimum welfare over the Nash equilibria reachable from the empty joint
// action by best-response play with any tie resolution.
struct ReachableEquilibrium {
  JointAction state;
  double welfare = 0.0;
  std::int64_t states_explored = 0;
};
ReachableEquilibrium worst_reachable_equilibrium(const Game& g,
                                                 const Schedule& schedule,
                                                 std::int64_t cap = 10'000'000);

// True if `target` can be the state after one pass of `schedule` from the
// empty joint action with each mover jumping straight to its target action,
// i.e. every target action is a best response at the time it is played.
bool reachable_in_one_round(const Game& g, const JointAction& target,
                            const Schedule& schedule);

struct Optimum {
  JointAction action;
  double welfare = 0.0;
};

// Exact maximizer of W. Dynamic programming over players in index order; the
// state is the load vector on resources shared with players not yet placed.
// `budget` bounds the number of state transitions.
Optimum optimum(const Game& g, std::int64_t budget = 100'000'000);

// Plain enumeration of the product of action sets; `budget` bounds its size.
Optimum optimum_brute_force(const Game& g, std::int64_t budget = 100'000'000);

// W(a(kn)) / W(a_opt); the unbounded horizon uses walk_to_equilibrium or, for
// adversarial ties, worst_reachable_equilibrium.
double efficiency(const Game& g, const Horizon& horizon, const TieBreak& tb);
double efficiency(const Game& g, const Horizon& horizon, const TieBreak& tb,
                  double optimal_welfare);

}  // namespace brwalk

#endif  // BRWALK_DYNAMICS_H_
