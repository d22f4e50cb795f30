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
#include <span>
#include <string>
#include <vector>

#include "planqubo/cnf.hpp"
#include "planqubo/graph.hpp"
#include "planqubo/instance_gen.hpp"
#include "planqubo/planning.hpp"
#include "planqubo/pseudo_boolean.hpp"

namespace planqubo {

/// Meaning of one QUBO variable, used for legends and decoding.
struct VarLabel {
  enum class Kind : std::uint8_t { State, Action, Color, Slot, Ancilla };
  Kind kind;
  std::uint32_t first;   // state var i, action j, vertex v, or ancilla index
  std::uint32_t second;  // time step t, color c, or position t

  bool operator==(const VarLabel&) const = default;
};

std::string describe(const VarLabel& label);
/// {"0": {"kind": "state", "i": 3, "t": 1}, ...}
std::string legend_to_json(const std::vector<VarLabel>& legend);

// ---------------------------------------------------------------------------
// Layered candidacy shared by the time-slice simplifier and the CNF encoder.

struct CandidateLayers {
  std::size_t horizon = 0;
  /// [t][i]: bit 0 set when x_i^(t) may be false, bit 1 when it may be true.
  std::vector<std::vector<std::uint8_t>> values;
  /// [t][j] for t = 1..horizon (row 0 unused).
  std::vector<std::vector<bool>> actions;
  /// [t][i]: variable must be encoded at step t.
  std::vector<std::vector<bool>> relevant;

  static constexpr std::uint8_t kCanBeFalse = 1;
  static constexpr std::uint8_t kCanBeTrue = 2;

  /// Everything possible, t = 0 fixed to the initial state, all relevant.
  static CandidateLayers full(const PlanningProblem& problem, std::size_t horizon);

  std::size_t action_count() const;
};

/// Forward fixpoint: an action stays a candidate at t only if its
/// preconditions can hold at t-1; a value can arise at t only by persistence
/// or as an effect of a candidate at t. Iterated until nothing changes.
void reachability_prune(const PlanningProblem& problem, CandidateLayers& layers);

/// Backward pass from the goals: an action at t is kept only if it affects a
/// variable relevant at t; relevant(t-1) = relevant(t) plus the
/// preconditions of kept actions at t.
void relevance_prune(const PlanningProblem& problem, CandidateLayers& layers);

// ---------------------------------------------------------------------------
// Time-slice mapping

struct TimeSliceOptions {
  bool use_single_action = false;
  bool use_conflicts = true;
  /// Fix t = 0 and goal variables, apply reachability, and drop final-slot
  /// actions that conflict with or do not contribute to the goals.
  bool simplify_boundaries = true;
  /// Encode only positive preconditions.
  bool use_primed_precond = false;

  double weight_initial = 1.0;
  double weight_goal = 1.0;
  double weight_noop = 1.0;
  double weight_precond = 1.0;
  double weight_effects = 1.0;
  /// Multiplies a base of 1 + (most effects of any action). At unit weight
  /// the effect corrections of simultaneous actions sharing an effect can
  /// cancel the (k - 1)^2 penalty exactly; the base keeps it strictly ahead.
  double weight_single_action = 1.0;
  double weight_conflict = 1.0;

  /// H'_noop + H'_precond + H'_effects.
  static TimeSliceOptions navigation_preset();
  /// H_noop + H'_precond + H_effects + H_single-action.
  static TimeSliceOptions scheduling_preset();

  /// Throws InputError if both single-action and conflict terms are requested.
  void check() const;
};

/// A state or action slot either maps to a QUBO variable or is fixed.
struct Slot {
  std::int64_t var = -1;  // QUBO variable id, or -1 when fixed
  bool value = false;     // fixed value when var < 0

  bool is_fixed() const { return var < 0; }
};

struct TimeSliceLayout {
  std::size_t num_state_vars = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;  // L
  std::vector<Slot> states;   // index t * N + i, t = 0..L
  std::vector<Slot> actions;  // index (t - 1) * M + j, t = 1..L
  std::vector<VarLabel> legend;

  const Slot& state(std::size_t i, std::size_t t) const { return states[t * num_state_vars + i]; }
  const Slot& action(std::size_t j, std::size_t t) const { return actions[(t - 1) * num_actions + j]; }
  std::size_t num_vars() const { return legend.size(); }

  Plan decode(std::span<const std::uint8_t> x) const;
  /// Encoding of a plan (states by parallel progression). Returns nullopt if
  /// the plan uses a fixed-off action or drives a fixed slot to the other value.
  std::optional<Assignment> encode(const PlanningProblem& problem, const Plan& plan) const;
};

struct TimeSliceQubo {
  Qubo qubo;
  TimeSliceLayout layout;
};

struct VariableCount {
  std::size_t before = 0;  // N(L+1) + LM
  std::size_t after = 0;   // after boundary elimination (equals before when not simplifying)
};

TimeSliceQubo time_slice_qubo(const PlanningProblem& problem, std::size_t horizon,
                              const TimeSliceOptions& options = {});
VariableCount time_slice_variable_count(const PlanningProblem& problem, std::size_t horizon,
                                        const TimeSliceOptions& options = {});

/// Navigation: n; scheduling: 1. n == 0 throws InputError.
std::size_t plan_length_for(Family family, std::size_t n);

// ---------------------------------------------------------------------------
// CNF pipeline

struct CnfOptions {
  bool prune = true;  // reachability + relevance
};

struct PlanningCnf {
  CnfFormula cnf;
  CandidateLayers layers;
  std::size_t num_state_vars = 0;
  std::size_t num_actions = 0;
  std::vector<std::int64_t> state_var;   // t * N + i -> CNF var or -1
  std::vector<std::int64_t> action_var;  // (t - 1) * M + j -> CNF var or -1
  std::vector<VarLabel> legend;          // per CNF variable

  Plan decode(std::span<const std::uint8_t> x) const;
};

/// Initial values are substituted; goals become unit clauses. Precondition,
/// effect, explanatory frame and mutual-exclusion clauses per step.
PlanningCnf encode_planning_cnf(const PlanningProblem& problem, std::size_t horizon, const CnfOptions& options = {});

struct CnfQubo {
  PlanningCnf planning;
  ReductionCertificate certificate;
  std::vector<VarLabel> legend;  // CNF legend plus ancillas

  const Qubo& qubo() const { return certificate.qubo; }
  Plan decode(std::span<const std::uint8_t> x) const;
};

CnfQubo cnf_qubo(const PlanningProblem& problem, std::size_t horizon, const CnfOptions& options = {});

// ---------------------------------------------------------------------------
// Direct mappings

struct DirectQubo {
  Qubo qubo;
  std::vector<VarLabel> legend;
};

/// x_{v,c} at v*k + c: sum_v (1 - sum_c x_{v,c})^2 + sum_{uv in E} sum_c x_{u,c} x_{v,c}.
DirectQubo direct_coloring_qubo(const UndirectedGraph& graph, std::size_t k = 3);
/// x_{v,t} at v*n + t: one position per vertex, one vertex per position,
/// and a penalty on consecutive positions joined by a non-edge.
DirectQubo direct_hampath_qubo(const UndirectedGraph& graph);

/// Colors per vertex, or nullopt if some vertex is not one-hot.
std::optional<std::vector<std::uint32_t>> decode_coloring(std::span<const std::uint8_t> x, std::size_t n,
                                                          std::size_t k);
/// Vertex order, or nullopt if the assignment is not a permutation matrix.
std::optional<std::vector<Vertex>> decode_hampath(std::span<const std::uint8_t> x, std::size_t n);

/// One parallel step color_v_c (ids as in coloring_planning).
Plan coloring_to_plan(const std::vector<std::uint32_t>& colors, std::size_t k);
/// One visit per step (ids as in uhp_planning).
Plan order_to_plan(const std::vector<Vertex>& order);

/// Rebuild the underlying graph from a generated planning problem.
UndirectedGraph graph_from_coloring_problem(const PlanningProblem& problem, std::size_t k = 3);
UndirectedGraph graph_from_uhp_problem(const PlanningProblem& problem);
/// Guesses the family from the state variable naming used by the generators.
std::optional<Family> detect_family(const PlanningProblem& problem);

// ---------------------------------------------------------------------------
// Uniform front end used by the CLI and the experiment harness.

enum class MappingKind { TimeSlice, Cnf, Direct };
MappingKind parse_mapping(const std::string& text);
std::string mapping_name(MappingKind kind);

struct CompiledInstance {
  MappingKind kind = MappingKind::Direct;
  Family family = Family::Scheduling;
  std::size_t horizon = 0;
  std::size_t graph_size = 0;
  std::size_t colors = 3;
  Qubo qubo;
  std::vector<VarLabel> legend;
  std::optional<TimeSliceLayout> timeslice;
  std::optional<CnfQubo> cnf;

  /// Maps a logical assignment to a plan of the original planning problem.
  /// Direct mappings return nullopt when the assignment is not well-formed.
  std::optional<Plan> decode_plan(std::span<const std::uint8_t> x) const;
};

struct CompileOptions {
  std::optional<std::size_t> horizon;  // defaults to plan_length_for(family, n)
  bool simplify = true;
  /// Time-slice parallelism control; when unset, scheduling uses conflict
  /// terms and navigation the single-action term.
  std::optional<TimeSliceOptions> timeslice;
};

CompiledInstance compile_instance(const PlanningProblem& problem, Family family, MappingKind kind,
                                  const CompileOptions& options = {});

}  // namespace planqubo
