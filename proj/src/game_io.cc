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

#include "brwalk/game_io.h"

#include <fstream>
#include <map>
#include <ostream>

#include "brwalk/designs.h"
#include "brwalk/errors.h"

namespace brwalk {
namespace {

using nlohmann::json;

Eigen::VectorXd to_vector(const json& array) {
  if (!array.is_array() || array.empty()) {
    throw ValidationError("expected a nonempty array of numbers");
  }
  Eigen::VectorXd v(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) v[i] = array[i].get<double>();
  return v;
}

json from_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

WelfareRule welfare_from_json(const json& spec, int default_j_max) {
  const std::string fam = spec.value("family", "explicit");
  const json params = spec.value("params", json::object());
  const int j_max = params.value("j_max", default_j_max);
  if (fam == "explicit") {
    if (!spec.contains("values")) {
      throw ValidationError("explicit welfare rule needs \"values\"");
    }
    Eigen::VectorXd values = to_vector(spec.at("values"));
    const double tail = spec.value("tail_slope", 0.0);
    return WelfareRule(std::move(values), tail, spec.value("label", "explicit"));
  }
  if (fam == "bent") {
    return make_welfare_rule(
        family::Bent{params.value("b", 1), params.value("C", 0.0)}, j_max);
  }
  if (fam == "set_covering") {
    return make_welfare_rule(family::SetCovering{}, j_max);
  }
  if (fam == "wta") {
    return make_welfare_rule(family::Wta{params.value("p_d", 1.0)}, j_max);
  }
  if (fam == "harmonic") return make_welfare_rule(family::Harmonic{}, j_max);
  throw ValidationError("unknown welfare family '" + fam + "'");
}

UtilityRule utility_from_json(const json& spec) {
  Eigen::VectorXd values = to_vector(spec.at("values"));
  const double tail = spec.value("tail_value", values[values.size() - 1]);
  if (spec.value("unrestricted", false)) {
    return UtilityRule::Unrestricted(std::move(values), tail);
  }
  return UtilityRule(std::move(values), tail);
}

json welfare_to_json(const WelfareRule& w) {
  return json{{"family", "explicit"},
              {"label", w.label()},
              {"values", from_vector(w.values())},
              {"tail_slope", w.tail_slope()}};
}

json utility_to_json(const UtilityRule& f) {
  json out{{"values", from_vector(f.values())}, {"tail_value", f.tail_value()}};
  if (!f.nonincreasing()) out["unrestricted"] = true;
  return out;
}

}  // namespace

Game game_from_json(const json& doc) {
  try {
    const json& resources = doc.at("resources");
    const json& players = doc.at("players");
    const int num_players = static_cast<int>(players.size());

    std::vector<WelfareRule> welfare_rules;
    std::vector<UtilityRule> utility_rules;
    std::map<std::string, int> welfare_index, utility_index, resource_index;
    std::vector<Resource> list;
    for (const json& r : resources) {
      Resource res;
      res.id = r.at("id").is_string() ? r.at("id").get<std::string>()
                                      : r.at("id").dump();
      if (resource_index.count(res.id)) {
        throw ValidationError("duplicate resource id '" + res.id + "'");
      }
      const std::string wkey = r.at("welfare").dump();
      auto wit = welfare_index.find(wkey);
      if (wit == welfare_index.end()) {
        welfare_rules.push_back(
            welfare_from_json(r.at("welfare"), std::max(num_players, 1)));
        wit = welfare_index.emplace(wkey, static_cast<int>(welfare_rules.size()) - 1)
                  .first;
      }
      res.welfare = wit->second;
      const std::string ukey =
          r.contains("utility") ? r.at("utility").dump() : "ci:" + wkey;
      auto uit = utility_index.find(ukey);
      if (uit == utility_index.end()) {
        utility_rules.push_back(
            r.contains("utility")
                ? utility_from_json(r.at("utility"))
                : design_common_interest(welfare_rules[res.welfare]));
        uit = utility_index.emplace(ukey, static_cast<int>(utility_rules.size()) - 1)
                  .first;
      }
      res.utility = uit->second;
      res.value = r.value("value", 1.0);
      resource_index.emplace(res.id, static_cast<int>(list.size()));
      list.push_back(std::move(res));
    }

    std::vector<std::vector<Action>> sets;
    for (const json& p : players) {
      std::vector<Action> actions;
      for (const json& action : p.at("actions")) {
        Action a;
        for (const json& id : action) {
          const std::string key = id.is_string() ? id.get<std::string>() : id.dump();
          auto it = resource_index.find(key);
          if (it == resource_index.end()) {
            throw ValidationError("action names unknown resource '" + key + "'");
          }
          a.push_back(it->second);
        }
        actions.push_back(std::move(a));
      }
      sets.push_back(std::move(actions));
    }
    return Game(std::move(welfare_rules), std::move(utility_rules),
                std::move(list), std::move(sets));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed game document: ") + e.what());
  }
}

json game_to_json(const Game& g) {
  json resources = json::array();
  for (const Resource& r : g.resources()) {
    resources.push_back(json{{"id", r.id},
                             {"welfare", welfare_to_json(g.welfare_rules()[r.welfare])},
                             {"utility", utility_to_json(g.utility_rules()[r.utility])},
                             {"value", r.value}});
  }
  json players = json::array();
  for (int i = 0; i < g.num_players(); ++i) {
    json actions = json::array();
    for (std::size_t k = 1; k < g.actions(i).size(); ++k) {
      json ids = json::array();
      for (int r : g.actions(i)[k]) ids.push_back(g.resources()[r].id);
      actions.push_back(std::move(ids));
    }
    players.push_back(json{{"actions", std::move(actions)}});
  }
  return json{{"resources", std::move(resources)}, {"players", std::move(players)}};
}

Game read_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open game file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
  return game_from_json(doc);
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_game(const Game& g, const std::string& path) {
  write_json(game_to_json(g), path);
}

void write_trajectory_jsonl(const Game& g, const Trajectory& t, std::ostream& out) {
  for (const Step& s : t.steps) {
    json ids = json::array();
    for (int r : g.action(s.player, s.action)) ids.push_back(g.resources()[r].id);
    out << json{{"tau", s.tau},
                {"player", s.player},
                {"action", std::move(ids)},
                {"welfare", s.welfare},
                {"potential", s.potential}}
               .dump()
        << '\n';
  }
}

json meta_to_json(const ConstructionMeta& meta) {
  json out{{"kind", meta.kind},
           {"case", meta.case_label},
           {"recommended_tiebreak", meta.recommended_tiebreak},
           {"scale", meta.scale}};
  out["target_ratio"] = meta.target_ratio ? json(*meta.target_ratio) : json(nullptr);
  json params = json::object();
  for (const auto& [name, value] : meta.parameters) params[name] = value;
  out["parameters"] = std::move(params);
  if (meta.ne) out["ne"] = meta.ne->choices();
  if (meta.opt) out["opt"] = meta.opt->choices();
  return out;
}

}  // namespace brwalk
