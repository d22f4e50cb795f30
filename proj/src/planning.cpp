// Copyright 2026 The planqubo Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "planqubo/planning.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "planqubo/errors.hpp"

namespace planqubo {

namespace {

bool intersects(const std::vector<StateVarId>& a, const std::vector<StateVarId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

void sort_unique(std::vector<StateVarId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool conflicts_one_way(const Action& a, const Action& b) {
  return intersects(a.pre_pos, b.eff_neg) || intersects(a.eff_neg, b.eff_neg) ||
         intersects(a.pre_neg, b.eff_pos) || intersects(a.eff_pos, b.eff_pos) ||
         intersects(a.eff_pos, b.eff_neg);
}

}  // namespace

void PlanningProblem::normalize() {
  for (auto& a : actions) {
    sort_unique(a.pre_pos);
    sort_unique(a.pre_neg);
    sort_unique(a.eff_pos);
    sort_unique(a.eff_neg);
  }
  sort_unique(goals_pos);
  sort_unique(goals_neg);
}

void PlanningProblem::check() const {
  const std::size_t n = num_state_vars();
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) throw InputError("duplicate state variable name: " + name);
  }
  if (initial.size() != n) throw InputError("initial state must assign every state variable");
  auto in_range = [n](const std::vector<StateVarId>& ids, const std::string& what) {
    for (auto id : ids) {
      if (id >= n) throw InputError(what + " references unknown state variable " + std::to_string(id));
    }
    if (!std::is_sorted(ids.begin(), ids.end()) ||
        std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw InputError(what + " must be sorted and duplicate-free");
    }
  };
  for (const auto& a : actions) {
    in_range(a.pre_pos, "action " + a.name + " pre_pos");
    in_range(a.pre_neg, "action " + a.name + " pre_neg");
    in_range(a.eff_pos, "action " + a.name + " eff_pos");
    in_range(a.eff_neg, "action " + a.name + " eff_neg");
    if (intersects(a.pre_pos, a.pre_neg)) throw InputError("action " + a.name + " has contradictory preconditions");
    if (intersects(a.eff_pos, a.eff_neg)) throw InputError("action " + a.name + " has contradictory effects");
  }
  in_range(goals_pos, "goals_pos");
  in_range(goals_neg, "goals_neg");
  if (intersects(goals_pos, goals_neg)) throw InputError("contradictory goals");
}

bool holds_preconditions(const Action& action, const State& state) {
  for (auto i : action.pre_pos) {
    if (!state[i]) return false;
  }
  for (auto i : action.pre_neg) {
    if (state[i]) return false;
  }
  return true;
}

State apply_action(const PlanningProblem& problem, const State& state, ActionId id) {
  if (id >= problem.num_actions()) throw InputError("unknown action id " + std::to_string(id));
  const Action& a = problem.actions[id];
  for (auto i : a.pre_pos) {
    if (!state[i]) throw SemanticError("precondition " + problem.names[i] + "=T of " + a.name + " violated");
  }
  for (auto i : a.pre_neg) {
    if (state[i]) throw SemanticError("precondition " + problem.names[i] + "=F of " + a.name + " violated");
  }
  State next = state;
  for (auto i : a.eff_pos) next[i] = true;
  for (auto i : a.eff_neg) next[i] = false;
  return next;
}

bool actions_conflict(const Action& a, const Action& b) {
  return conflicts_one_way(a, b) || conflicts_one_way(b, a);
}

bool satisfies_goals(const PlanningProblem& problem, const State& state) {
  for (auto i : problem.goals_pos) {
    if (!state[i]) return false;
  }
  for (auto i : problem.goals_neg) {
    if (state[i]) return false;
  }
  return true;
}

bool contributes_to_goals(const PlanningProblem& problem, const Action& action) {
  return intersects(action.eff_pos, problem.goals_pos) || intersects(action.eff_neg, problem.goals_neg);
}

bool conflicts_with_goals(const PlanningProblem& problem, const Action& action) {
  return intersects(action.eff_neg, problem.goals_pos) || intersects(action.eff_pos, problem.goals_neg);
}

ValidationResult validate_plan(const PlanningProblem& problem, const Plan& plan) {
  for (const auto& step : plan.steps) {
    for (auto id : step) {
      if (id >= problem.num_actions()) throw InputError("plan references unknown action id " + std::to_string(id));
    }
  }
  State state = problem.initial;
  for (std::size_t t = 0; t < plan.steps.size(); ++t) {
    std::vector<ActionId> step = plan.steps[t];
    std::sort(step.begin(), step.end());
    step.erase(std::unique(step.begin(), step.end()), step.end());
    const std::size_t step_no = t + 1;
    for (std::size_t x = 0; x < step.size(); ++x) {
      for (std::size_t y = x + 1; y < step.size(); ++y) {
        if (actions_conflict(problem.actions[step[x]], problem.actions[step[y]])) {
          return {false, step_no,
                  "actions " + problem.actions[step[x]].name + " and " + problem.actions[step[y]].name +
                      " conflict"};
        }
      }
    }
    for (auto id : step) {
      const Action& a = problem.actions[id];
      for (auto i : a.pre_pos) {
        if (!state[i]) return {false, step_no, "failed precondition " + problem.names[i] + "=T of " + a.name};
      }
      for (auto i : a.pre_neg) {
        if (state[i]) return {false, step_no, "failed precondition " + problem.names[i] + "=F of " + a.name};
      }
    }
    State next = state;
    for (auto id : step) {
      for (auto i : problem.actions[id].eff_pos) next[i] = true;
      for (auto i : problem.actions[id].eff_neg) next[i] = false;
    }
    state = std::move(next);
  }
  for (auto i : problem.goals_pos) {
    if (!state[i]) return {false, 0, "goal " + problem.names[i] + "=T not reached"};
  }
  for (auto i : problem.goals_neg) {
    if (state[i]) return {false, 0, "goal " + problem.names[i] + "=F not reached"};
  }
  return {};
}

std::optional<State> simulate(const PlanningProblem& problem, const Plan& plan) {
  State state = problem.initial;
  for (const auto& step : plan.steps) {
    for (std::size_t x = 0; x < step.size(); ++x) {
      for (std::size_t y = x + 1; y < step.size(); ++y) {
        if (step[x] == step[y] || actions_conflict(problem.actions[step[x]], problem.actions[step[y]])) {
          return std::nullopt;
        }
      }
    }
    // Parallel actions all read the pre-step state.
    State next = state;
    for (auto id : step) {
      State single;
      try {
        single = apply_action(problem, state, id);
      } catch (const SemanticError&) {
        return std::nullopt;
      }
      for (std::size_t i = 0; i < state.size(); ++i) {
        if (single[i] != state[i]) next[i] = single[i];
      }
    }
    state = std::move(next);
  }
  return state;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

std::vector<StateVarId> ids_from(const json& j, const char* key) {
  std::vector<StateVarId> out;
  if (j.contains(key)) {
    for (const auto& v : j.at(key)) out.push_back(v.get<StateVarId>());
  }
  return out;
}

}  // namespace

std::string problem_to_json(const PlanningProblem& problem, int indent) {
  json j;
  j["num_state_vars"] = problem.num_state_vars();
  j["names"] = problem.names;
  json actions = json::array();
  for (const auto& a : problem.actions) {
    actions.push_back({{"name", a.name},
                       {"pre_pos", a.pre_pos},
                       {"pre_neg", a.pre_neg},
                       {"eff_pos", a.eff_pos},
                       {"eff_neg", a.eff_neg}});
  }
  j["actions"] = std::move(actions);
  std::vector<int> initial(problem.initial.begin(), problem.initial.end());
  j["initial"] = initial;
  j["goals_pos"] = problem.goals_pos;
  j["goals_neg"] = problem.goals_neg;
  if (problem.plan_length_hint) {
    j["plan_length_hint"] = *problem.plan_length_hint;
  } else {
    j["plan_length_hint"] = nullptr;
  }
  return j.dump(indent);
}

PlanningProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("problem JSON: ") + e.what());
  }
  PlanningProblem p;
  try {
    const auto n = j.at("num_state_vars").get<std::size_t>();
    if (j.contains("names")) {
      p.names = j.at("names").get<std::vector<std::string>>();
    } else {
      for (std::size_t i = 0; i < n; ++i) p.names.push_back("x" + std::to_string(i));
    }
    if (p.names.size() != n) throw InputError("names[] length differs from num_state_vars");
    for (const auto& ja : j.at("actions")) {
      Action a;
      a.name = ja.value("name", "a" + std::to_string(p.actions.size()));
      a.pre_pos = ids_from(ja, "pre_pos");
      a.pre_neg = ids_from(ja, "pre_neg");
      a.eff_pos = ids_from(ja, "eff_pos");
      a.eff_neg = ids_from(ja, "eff_neg");
      p.actions.push_back(std::move(a));
    }
    for (const auto& v : j.at("initial")) {
      p.initial.push_back(v.is_boolean() ? v.get<bool>() : v.get<int>() != 0);
    }
    p.goals_pos = ids_from(j, "goals_pos");
    p.goals_neg = ids_from(j, "goals_neg");
    if (j.contains("plan_length_hint") && !j.at("plan_length_hint").is_null()) {
      p.plan_length_hint = j.at("plan_length_hint").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("problem JSON: ") + e.what());
  }
  p.normalize();
  p.check();
  return p;
}

PlanningProblem read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return problem_from_json(ss.str());
}

void write_problem_file(const PlanningProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << problem_to_json(problem) << '\n';
}

std::string plan_to_json(const Plan& plan) {
  json j = json::array();
  for (const auto& s : plan.steps) j.push_back(s);
  return j.dump();
}

// ---------------------------------------------------------------------------
// PDDL

namespace {

std::string pddl_symbol(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    out += ok ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : '_';
  }
  if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "p" + out;
  return out;
}

}  // namespace

PddlText to_pddl(const PlanningProblem& problem, const std::string& name) {
  bool negative = !problem.goals_neg.empty();
  for (const auto& a : problem.actions) negative = negative || !a.pre_neg.empty();

  auto lit = [&](StateVarId i, bool positive) {
    const std::string atom = "(" + pddl_symbol(problem.names[i]) + ")";
    return positive ? atom : "(not " + atom + ")";
  };

  std::ostringstream d;
  d << "(define (domain " << pddl_symbol(name) << ")\n";
  d << "  (:requirements :strips" << (negative ? " :negative-preconditions" : "") << ")\n";
  d << "  (:predicates";
  for (const auto& n : problem.names) d << "\n    (" << pddl_symbol(n) << ")";
  d << ")\n";
  for (const auto& a : problem.actions) {
    d << "  (:action " << pddl_symbol(a.name) << "\n    :parameters ()\n    :precondition (and";
    for (auto i : a.pre_pos) d << ' ' << lit(i, true);
    for (auto i : a.pre_neg) d << ' ' << lit(i, false);
    d << ")\n    :effect (and";
    for (auto i : a.eff_pos) d << ' ' << lit(i, true);
    for (auto i : a.eff_neg) d << ' ' << lit(i, false);
    d << "))\n";
  }
  d << ")\n";

  std::ostringstream p;
  p << "(define (problem " << pddl_symbol(name) << "-problem)\n";
  p << "  (:domain " << pddl_symbol(name) << ")\n  (:init";
  for (std::size_t i = 0; i < problem.num_state_vars(); ++i) {
    if (problem.initial[i]) p << ' ' << lit(static_cast<StateVarId>(i), true);
  }
  p << ")\n  (:goal (and";
  for (auto i : problem.goals_pos) p << ' ' << lit(i, true);
  for (auto i : problem.goals_neg) p << ' ' << lit(i, false);
  p << ")))\n";
  return {d.str(), p.str()};
}

}  // namespace planqubo
