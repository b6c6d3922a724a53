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

#ifndef BRWALK_GAME_IO_H_
#define BRWALK_GAME_IO_H_

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "brwalk/constructions.h"
#include "brwalk/dynamics.h"
#include "brwalk/game.h"

namespace brwalk {

// Game document:
//   {"resources": [{"id": "r1",
//                   "welfare": {"family": "bent", "params": {"b": 1, "C": 0.5}}
//                           or {"values": [...], "tail_slope": 0.5},
//                   "utility": {"values": [...], "tail_value": 0.5},
//                   "value": 1.0}],
//    "players": [{"actions": [["r1"], ["r1", "r2"]]}]}
//
// Family params may carry "j_max"; without it a family rule is tabulated to
// the number of players. A missing "utility" selects the common-interest
// rule and a missing "value" means 1. The empty action is implicit, so the
// k-th listed action has index k (1-based) in the game.
Game game_from_json(const nlohmann::json& doc);
nlohmann::json game_to_json(const Game& g);

Game read_game(const std::string& path);
void write_game(const Game& g, const std::string& path);

// One JSON object per line: {"tau", "player", "action", "welfare",
// "potential"} with the action as a list of resource ids.
void write_trajectory_jsonl(const Game& g, const Trajectory& t, std::ostream& out);

nlohmann::json meta_to_json(const ConstructionMeta& meta);
void write_json(const nlohmann::json& doc, const std::string& path);

}  // namespace brwalk

#endif  // BRWALK_GAME_IO_H_
