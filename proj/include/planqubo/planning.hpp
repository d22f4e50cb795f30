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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace planqubo {

using StateVarId = std::uint32_t;
using ActionId = std::uint32_t;

/// Truth assignment over all state variables.
using State = std::vector<bool>;

/// STRIPS action. All four lists are kept sorted and duplicate-free.
struct Action {
  std::string name;
  std::vector<StateVarId> pre_pos;
  std::vector<StateVarId> pre_neg;
  std::vector<StateVarId> eff_pos;
  std::vector<StateVarId> eff_neg;

  bool operator==(const Action&) const = default;
};

struct PlanningProblem {
  std::vector<std::string> names;  // one per state variable; unique
  std::vector<Action> actions;
  State initial;
  std::vector<StateVarId> goals_pos;
  std::vector<StateVarId> goals_neg;
  std::optional<std::size_t> plan_length_hint;

  std::size_t num_state_vars() const { return names.size(); }
  std::size_t num_actions() const { return actions.size(); }

  /// Throws InputError when an invariant is broken (id range, overlapping
  /// signed sets, incomplete initial state, duplicate names).
  void check() const;

  /// Sorts and deduplicates every id list in place.
  void normalize();

  bool operator==(const PlanningProblem&) const = default;
};

/// Each step is a set of actions executed in parallel.
struct Plan {
  std::vector<std::vector<ActionId>> steps;

  std::size_t length() const { return steps.size(); }
  bool operator==(const Plan&) const = default;
  auto operator<=>(const Plan&) const = default;
};

struct ValidationResult {
  bool valid = true;
  std::size_t failing_step = 0;  // 1-based; 0 when the goal check fails or valid
  std::string reason;

  explicit operator bool() const { return valid; }
};

bool holds_preconditions(const Action& action, const State& state);

/// Progression: positive effects set, negative effects cleared.
/// Throws SemanticError naming the first violated precondition.
State apply_action(const PlanningProblem& problem, const State& state, ActionId id);

/// True when a and b may not share a step: a positive precondition or
/// negative effect of one meets a negative effect of the other, a negative
/// precondition or positive effect of one meets a positive effect of the
/// other, or their effects contradict. Duplicate effects count as conflicts.
bool actions_conflict(const Action& a, const Action& b);

bool satisfies_goals(const PlanningProblem& problem, const State& state);

/// An effect sets some goal variable to its goal value.
bool contributes_to_goals(const PlanningProblem& problem, const Action& action);
/// An effect sets some goal variable away from its goal value.
bool conflicts_with_goals(const PlanningProblem& problem, const Action& action);

/// Throws InputError if the plan references an unknown action.
ValidationResult validate_plan(const PlanningProblem& problem, const Plan& plan);

/// Stepwise simulation with apply_action; returns the final state or nullopt
/// if any action is inapplicable or a step holds conflicting actions.
std::optional<State> simulate(const PlanningProblem& problem, const Plan& plan);

// JSON problem schema:
// {num_state_vars, names[], actions[{name, pre_pos[], pre_neg[], eff_pos[], eff_neg[]}],
//  initial[], goals_pos[], goals_neg[], plan_length_hint}
std::string problem_to_json(const PlanningProblem& problem, int indent = 2);
PlanningProblem problem_from_json(const std::string& text);
PlanningProblem read_problem_file(const std::string& path);
void write_problem_file(const PlanningProblem& problem, const std::string& path);

std::string plan_to_json(const Plan& plan);

/// Grounded STRIPS as PDDL: a domain with zero-arity predicates and a
/// matching problem. Adds :negative-preconditions when needed.
struct PddlText {
  std::string domain;
  std::string problem;
};
PddlText to_pddl(const PlanningProblem& problem, const std::string& name = "planqubo");

}  // namespace planqubo
