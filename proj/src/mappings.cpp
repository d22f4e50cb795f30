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

#include "planqubo/mappings.hpp"

#include <algorithm>
#include <string>

#include "json.hpp"
#include "planqubo/errors.hpp"

namespace planqubo {

namespace {

using Poly = PseudoBooleanPolynomial;

bool contains(const std::vector<StateVarId>& sorted, StateVarId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

bool preconditions_possible(const Action& a, const std::vector<std::uint8_t>& values) {
  for (auto i : a.pre_pos) {
    if (!(values[i] & CandidateLayers::kCanBeTrue)) return false;
  }
  for (auto i : a.pre_neg) {
    if (!(values[i] & CandidateLayers::kCanBeFalse)) return false;
  }
  return true;
}

std::uint8_t value_bit(bool v) { return v ? CandidateLayers::kCanBeTrue : CandidateLayers::kCanBeFalse; }

}  // namespace

std::string describe(const VarLabel& label) {
  const auto a = std::to_string(label.first);
  const auto b = std::to_string(label.second);
  switch (label.kind) {
    case VarLabel::Kind::State: return "x[" + a + "]@" + b;
    case VarLabel::Kind::Action: return "y[" + a + "]@" + b;
    case VarLabel::Kind::Color: return "vertex " + a + " color " + b;
    case VarLabel::Kind::Slot: return "vertex " + a + " position " + b;
    case VarLabel::Kind::Ancilla: return "ancilla " + a;
  }
  return "?";
}

std::string legend_to_json(const std::vector<VarLabel>& legend) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < legend.size(); ++v) {
    const auto& l = legend[v];
    nlohmann::ordered_json e;
    switch (l.kind) {
      case VarLabel::Kind::State: e = {{"kind", "state"}, {"i", l.first}, {"t", l.second}}; break;
      case VarLabel::Kind::Action: e = {{"kind", "action"}, {"j", l.first}, {"t", l.second}}; break;
      case VarLabel::Kind::Color: e = {{"kind", "color"}, {"vertex", l.first}, {"color", l.second}}; break;
      case VarLabel::Kind::Slot: e = {{"kind", "position"}, {"vertex", l.first}, {"position", l.second}}; break;
      case VarLabel::Kind::Ancilla: e = {{"kind", "ancilla"}, {"index", l.first}}; break;
    }
    out[std::to_string(v)] = e;
  }
  return out.dump(2);
}

// ---------------------------------------------------------------------------

CandidateLayers CandidateLayers::full(const PlanningProblem& problem, std::size_t horizon) {
  const std::size_t n = problem.num_state_vars();
  const std::size_t m = problem.num_actions();
  CandidateLayers layers;
  layers.horizon = horizon;
  layers.values.assign(horizon + 1, std::vector<std::uint8_t>(n, kCanBeFalse | kCanBeTrue));
  for (std::size_t i = 0; i < n; ++i) layers.values[0][i] = value_bit(problem.initial[i]);
  layers.actions.assign(horizon + 1, std::vector<bool>(m, true));
  layers.actions[0].assign(m, false);
  layers.relevant.assign(horizon + 1, std::vector<bool>(n, true));
  return layers;
}

std::size_t CandidateLayers::action_count() const {
  std::size_t count = 0;
  for (std::size_t t = 1; t <= horizon; ++t) count += static_cast<std::size_t>(std::count(actions[t].begin(), actions[t].end(), true));
  return count;
}

void reachability_prune(const PlanningProblem& problem, CandidateLayers& layers) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t t = 1; t <= layers.horizon; ++t) {
      std::vector<std::uint8_t> reach = layers.values[t - 1];
      for (std::size_t j = 0; j < problem.num_actions(); ++j) {
        if (!layers.actions[t][j]) continue;
        const Action& a = problem.actions[j];
        if (!preconditions_possible(a, layers.values[t - 1])) {
          layers.actions[t][j] = false;
          changed = true;
          continue;
        }
        for (auto i : a.eff_pos) reach[i] |= CandidateLayers::kCanBeTrue;
        for (auto i : a.eff_neg) reach[i] |= CandidateLayers::kCanBeFalse;
      }
      for (std::size_t i = 0; i < problem.num_state_vars(); ++i) {
        const std::uint8_t next = layers.values[t][i] & reach[i];
        if (next != layers.values[t][i]) {
          layers.values[t][i] = next;
          changed = true;
        }
      }
    }
  }
}

void relevance_prune(const PlanningProblem& problem, CandidateLayers& layers) {
  const std::size_t n = problem.num_state_vars();
  const std::size_t L = layers.horizon;
  std::vector<bool> relevant(n, false);
  for (auto i : problem.goals_pos) relevant[i] = true;
  for (auto i : problem.goals_neg) relevant[i] = true;
  for (std::size_t t = L + 1; t-- > 0;) {
    for (std::size_t i = 0; i < n; ++i) layers.relevant[t][i] = layers.relevant[t][i] && relevant[i];
    if (t == 0) break;
    std::vector<bool> below = relevant;
    for (std::size_t j = 0; j < problem.num_actions(); ++j) {
      if (!layers.actions[t][j]) continue;
      const Action& a = problem.actions[j];
      const bool touches = std::any_of(a.eff_pos.begin(), a.eff_pos.end(), [&](auto i) { return relevant[i]; }) ||
                           std::any_of(a.eff_neg.begin(), a.eff_neg.end(), [&](auto i) { return relevant[i]; });
      if (!touches) {
        layers.actions[t][j] = false;
        continue;
      }
      for (auto i : a.pre_pos) below[i] = true;
      for (auto i : a.pre_neg) below[i] = true;
    }
    relevant = std::move(below);
  }
}

// ---------------------------------------------------------------------------
// Time-slice

TimeSliceOptions TimeSliceOptions::navigation_preset() {
  TimeSliceOptions o;
  o.use_single_action = false;
  o.use_conflicts = false;
  o.simplify_boundaries = true;
  o.use_primed_precond = true;
  return o;
}

TimeSliceOptions TimeSliceOptions::scheduling_preset() {
  TimeSliceOptions o;
  o.use_single_action = true;
  o.use_conflicts = false;
  o.simplify_boundaries = true;
  o.use_primed_precond = true;
  return o;
}

void TimeSliceOptions::check() const {
  if (use_single_action && use_conflicts) throw InputError("single-action and conflict terms are mutually exclusive");
  for (double w : {weight_initial, weight_goal, weight_noop, weight_precond, weight_effects, weight_single_action,
                   weight_conflict}) {
    if (!(w > 0.0)) throw InputError("penalty weights must be positive");
  }
}

namespace {

TimeSliceLayout build_layout(const PlanningProblem& problem, std::size_t horizon, const TimeSliceOptions& options) {
  if (horizon == 0) throw InputError("plan length must be at least 1");
  const std::size_t n = problem.num_state_vars();
  const std::size_t m = problem.num_actions();
  TimeSliceLayout layout;
  layout.num_state_vars = n;
  layout.num_actions = m;
  layout.horizon = horizon;
  layout.states.assign(n * (horizon + 1), Slot{});
  layout.actions.assign(m * horizon, Slot{});

  CandidateLayers layers = CandidateLayers::full(problem, horizon);
  std::vector<std::int8_t> goal(n, -1);
  for (auto i : problem.goals_pos) goal[i] = 1;
  for (auto i : problem.goals_neg) goal[i] = 0;
  if (options.simplify_boundaries) {
    for (std::size_t j = 0; j < m; ++j) {
      const Action& a = problem.actions[j];
      if (conflicts_with_goals(problem, a) || !contributes_to_goals(problem, a)) layers.actions[horizon][j] = false;
    }
    reachability_prune(problem, layers);
  }

  auto next_var = [&layout](VarLabel label) {
    layout.legend.push_back(label);
    return static_cast<std::int64_t>(layout.legend.size() - 1);
  };
  for (std::size_t t = 0; t <= horizon; ++t) {
    if (t > 0) {
      for (std::size_t j = 0; j < m; ++j) {
        Slot& s = layout.actions[(t - 1) * m + j];
        if (options.simplify_boundaries && !layers.actions[t][j]) {
          s = {-1, false};
        } else {
          s.var = next_var({VarLabel::Kind::Action, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(t)});
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Slot& s = layout.states[t * n + i];
      if (!options.simplify_boundaries) {
        s.var = next_var({VarLabel::Kind::State, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t)});
        continue;
      }
      const auto vals = layers.values[t][i];
      if (t == horizon && goal[i] >= 0) {
        s = {-1, goal[i] == 1};
      } else if (vals == CandidateLayers::kCanBeTrue || vals == CandidateLayers::kCanBeFalse) {
        s = {-1, vals == CandidateLayers::kCanBeTrue};
      } else {
        s.var = next_var({VarLabel::Kind::State, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t)});
      }
    }
  }
  return layout;
}

Poly slot_poly(const Slot& s, std::size_t num_vars) {
  if (s.is_fixed()) return Poly::constant(s.value ? 1.0 : 0.0, num_vars);
  return Poly::variable(static_cast<VarId>(s.var), num_vars);
}

}  // namespace

Plan TimeSliceLayout::decode(std::span<const std::uint8_t> x) const {
  if (x.size() != num_vars()) throw InputError("assignment size does not match the time-slice layout");
  Plan plan;
  plan.steps.resize(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t j = 0; j < num_actions; ++j) {
      const Slot& s = action(j, t);
      const bool on = s.is_fixed() ? s.value : x[static_cast<std::size_t>(s.var)] != 0;
      if (on) plan.steps[t - 1].push_back(static_cast<ActionId>(j));
    }
  }
  return plan;
}

std::optional<Assignment> TimeSliceLayout::encode(const PlanningProblem& problem, const Plan& plan) const {
  if (plan.length() > horizon) return std::nullopt;
  Assignment x(num_vars(), 0);
  auto put = [&x](const Slot& s, bool v) {
    if (s.is_fixed()) return s.value == v;
    x[static_cast<std::size_t>(s.var)] = v ? 1 : 0;
    return true;
  };
  State state = problem.initial;
  for (std::size_t i = 0; i < num_state_vars; ++i) {
    if (!put(this->state(i, 0), state[i])) return std::nullopt;
  }
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::vector<bool> on(num_actions, false);
    if (t <= plan.length()) {
      for (auto j : plan.steps[t - 1]) {
        if (j >= num_actions) throw InputError("plan references unknown action id " + std::to_string(j));
        on[j] = true;
      }
    }
    State next = state;
    for (std::size_t j = 0; j < num_actions; ++j) {
      if (!put(action(j, t), on[j])) return std::nullopt;
      if (!on[j]) continue;
      for (auto i : problem.actions[j].eff_pos) next[i] = true;
      for (auto i : problem.actions[j].eff_neg) next[i] = false;
    }
    state = std::move(next);
    for (std::size_t i = 0; i < num_state_vars; ++i) {
      if (!put(this->state(i, t), state[i])) return std::nullopt;
    }
  }
  return x;
}

TimeSliceQubo time_slice_qubo(const PlanningProblem& problem, std::size_t horizon, const TimeSliceOptions& options) {
  problem.check();
  options.check();
  TimeSliceQubo out;
  out.layout = build_layout(problem, horizon, options);
  const TimeSliceLayout& lay = out.layout;
  const std::size_t nv = lay.num_vars();
  const std::size_t n = problem.num_state_vars();
  const std::size_t m = problem.num_actions();
  const std::size_t L = horizon;
  Poly H(nv);

  auto X = [&](std::size_t i, std::size_t t) { return slot_poly(lay.state(i, t), nv); };
  auto action_var = [&](std::size_t j, std::size_t t) -> std::optional<VarId> {
    const Slot& s = lay.action(j, t);
    if (s.is_fixed()) return std::nullopt;  // actions are only ever fixed off
    return static_cast<VarId>(s.var);
  };
  const Poly one = Poly::constant(1.0, nv);
  std::size_t most_effects = 0;
  for (const Action& a : problem.actions) most_effects = std::max(most_effects, a.eff_pos.size() + a.eff_neg.size());
  const double single_base = 1.0 + static_cast<double>(most_effects);

  if (!options.simplify_boundaries) {
    Poly h(nv);
    for (std::size_t i = 0; i < n; ++i) h += problem.initial[i] ? one - X(i, 0) : X(i, 0);
    H += options.weight_initial * h;
    Poly g(nv);
    for (auto i : problem.goals_pos) g += one - X(i, L);
    for (auto i : problem.goals_neg) g += X(i, L);
    H += options.weight_goal * g;
  }

  for (std::size_t t = 1; t <= L; ++t) {
    Poly noop(nv), pre(nv), eff(nv), single(nv), conflict(nv);
    for (std::size_t i = 0; i < n; ++i) {
      const Poly a = X(i, t - 1);
      const Poly b = X(i, t);
      noop += a + b - 2.0 * (a * b);
    }
    std::vector<VarId> live;
    for (std::size_t j = 0; j < m; ++j) {
      const auto y = action_var(j, t);
      if (!y) continue;
      live.push_back(*y);
      const Poly Y = Poly::variable(*y, nv);
      const Action& act = problem.actions[j];
      for (auto i : act.pre_pos) pre += Y * (one - X(i, t - 1));
      if (!options.use_primed_precond) {
        for (auto i : act.pre_neg) pre += Y * X(i, t - 1);
      }
      for (auto i : act.eff_pos) eff += Y * (one + X(i, t - 1) - 2.0 * X(i, t));
      for (auto i : act.eff_neg) eff += Y * (2.0 * X(i, t) - X(i, t - 1));
    }
    if (options.use_single_action) {
      single.add_term({}, 1.0);
      for (std::size_t a = 0; a < live.size(); ++a) {
        single.add_term({live[a]}, -1.0);
        for (std::size_t b = a + 1; b < live.size(); ++b) single.add_term({live[a], live[b]}, 2.0);
      }
    }
    if (options.use_conflicts) {
      // Ordered pairs (j, j'), j != j': j reads or deletes x_i while j' deletes
      // it, or j reads not-x_i or adds it while j' adds it.
      for (std::size_t i = 0; i < n; ++i) {
        const auto si = static_cast<StateVarId>(i);
        std::vector<VarId> needs_true, dels, needs_false, adds;
        for (std::size_t j = 0; j < m; ++j) {
          const auto y = action_var(j, t);
          if (!y) continue;
          const Action& act = problem.actions[j];
          if (contains(act.pre_pos, si) || contains(act.eff_neg, si)) needs_true.push_back(*y);
          if (contains(act.eff_neg, si)) dels.push_back(*y);
          if (contains(act.pre_neg, si) || contains(act.eff_pos, si)) needs_false.push_back(*y);
          if (contains(act.eff_pos, si)) adds.push_back(*y);
        }
        for (auto a : needs_true) {
          for (auto b : dels) {
            if (a != b) conflict.add_term({a, b}, 1.0);
          }
        }
        for (auto a : needs_false) {
          for (auto b : adds) {
            if (a != b) conflict.add_term({a, b}, 1.0);
          }
        }
      }
    }
    H += options.weight_noop * noop;
    H += options.weight_precond * pre;
    H += options.weight_effects * eff;
    if (options.use_single_action) H += options.weight_single_action * single_base * single;
    if (options.use_conflicts) H += options.weight_conflict * conflict;
  }
  H.ensure_vars(nv);
  out.qubo = Qubo(std::move(H));
  return out;
}

VariableCount time_slice_variable_count(const PlanningProblem& problem, std::size_t horizon,
                                        const TimeSliceOptions& options) {
  problem.check();
  const auto layout = build_layout(problem, horizon, options);
  VariableCount c;
  c.before = problem.num_state_vars() * (horizon + 1) + horizon * problem.num_actions();
  c.after = layout.num_vars();
  return c;
}

std::size_t plan_length_for(Family family, std::size_t n) {
  if (n == 0) throw InputError("instance size must be positive");
  return family == Family::Navigation ? n : 1;
}

// ---------------------------------------------------------------------------
// CNF

namespace {

/// A clause literal before substitution: a CNF literal or a constant.
struct PendingLit {
  enum Kind : std::uint8_t { False, True, Var } kind;
  Literal lit = 0;
};

}  // namespace

PlanningCnf encode_planning_cnf(const PlanningProblem& problem, std::size_t horizon, const CnfOptions& options) {
  problem.check();
  if (horizon == 0) throw InputError("plan length must be at least 1");
  const std::size_t n = problem.num_state_vars();
  const std::size_t m = problem.num_actions();
  PlanningCnf out;
  out.num_state_vars = n;
  out.num_actions = m;
  out.layers = CandidateLayers::full(problem, horizon);
  if (options.prune) {
    reachability_prune(problem, out.layers);
    relevance_prune(problem, out.layers);
  }
  const CandidateLayers& layers = out.layers;
  out.state_var.assign(n * (horizon + 1), -1);
  out.action_var.assign(m * horizon, -1);
  CnfFormula& cnf = out.cnf;

  auto new_var = [&](VarLabel label, std::string name) {
    out.legend.push_back(label);
    cnf.var_names.push_back(std::move(name));
    return static_cast<std::int64_t>(cnf.num_vars++);
  };
  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto ts = std::to_string(t);
    for (std::size_t j = 0; j < m; ++j) {
      if (!layers.actions[t][j]) continue;
      out.action_var[(t - 1) * m + j] = new_var(
          {VarLabel::Kind::Action, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(t)},
          problem.actions[j].name + "@" + ts);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = layers.values[t][i];
      if (!layers.relevant[t][i] || v != (CandidateLayers::kCanBeFalse | CandidateLayers::kCanBeTrue)) continue;
      out.state_var[t * n + i] = new_var(
          {VarLabel::Kind::State, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t)},
          problem.names[i] + "@" + ts);
    }
  }

  // Literal for "x_i^t == positive".
  auto state_lit = [&](std::size_t i, std::size_t t, bool positive) -> PendingLit {
    const auto var = out.state_var[t * n + i];
    if (var >= 0) return {PendingLit::Var, make_literal(static_cast<std::uint32_t>(var), positive)};
    const auto v = layers.values[t][i];
    if (v == 0) return {PendingLit::False, 0};  // no value reachable
    const bool value = v == CandidateLayers::kCanBeTrue;
    return {value == positive ? PendingLit::True : PendingLit::False, 0};
  };
  auto not_action = [&](std::size_t j, std::size_t t) -> PendingLit {
    return {PendingLit::Var, make_literal(static_cast<std::uint32_t>(out.action_var[(t - 1) * m + j]), false)};
  };
  auto emit = [&cnf](std::initializer_list<PendingLit> head, const std::vector<Literal>& tail = {}) {
    Clause c;
    for (const auto& l : head) {
      if (l.kind == PendingLit::True) return;
      if (l.kind == PendingLit::Var) c.push_back(l.lit);
    }
    c.insert(c.end(), tail.begin(), tail.end());
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t a = 0; a + 1 < c.size(); ++a) {
      for (std::size_t b = a + 1; b < c.size(); ++b) {
        if (c[a] == -c[b]) return;
      }
    }
    if (c.empty()) cnf.unsatisfiable = true;
    cnf.clauses.push_back(std::move(c));
  };

  for (auto i : problem.goals_pos) emit({state_lit(i, horizon, true)});
  for (auto i : problem.goals_neg) emit({state_lit(i, horizon, false)});

  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      if (out.action_var[(t - 1) * m + j] < 0) continue;
      const Action& a = problem.actions[j];
      for (auto i : a.pre_pos) emit({not_action(j, t), state_lit(i, t - 1, true)});
      for (auto i : a.pre_neg) emit({not_action(j, t), state_lit(i, t - 1, false)});
      for (auto i : a.eff_pos) {
        if (layers.relevant[t][i]) emit({not_action(j, t), state_lit(i, t, true)});
      }
      for (auto i : a.eff_neg) {
        if (layers.relevant[t][i]) emit({not_action(j, t), state_lit(i, t, false)});
      }
    }
    // Explanatory frame axioms.
    for (std::size_t i = 0; i < n; ++i) {
      if (!layers.relevant[t][i]) continue;
      const auto si = static_cast<StateVarId>(i);
      std::vector<Literal> adders, deleters;
      for (std::size_t j = 0; j < m; ++j) {
        const auto y = out.action_var[(t - 1) * m + j];
        if (y < 0) continue;
        if (contains(problem.actions[j].eff_pos, si)) adders.push_back(make_literal(static_cast<std::uint32_t>(y), true));
        if (contains(problem.actions[j].eff_neg, si)) deleters.push_back(make_literal(static_cast<std::uint32_t>(y), true));
      }
      emit({state_lit(i, t - 1, true), state_lit(i, t, false)}, adders);
      emit({state_lit(i, t - 1, false), state_lit(i, t, true)}, deleters);
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (out.action_var[(t - 1) * m + j] < 0) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (out.action_var[(t - 1) * m + k] < 0) continue;
        if (actions_conflict(problem.actions[j], problem.actions[k])) emit({not_action(j, t), not_action(k, t)});
      }
    }
  }
  return out;
}

Plan PlanningCnf::decode(std::span<const std::uint8_t> x) const {
  if (x.size() < cnf.num_vars) throw InputError("assignment shorter than the CNF variable count");
  const std::size_t horizon = num_actions == 0 ? layers.horizon : action_var.size() / num_actions;
  Plan plan;
  plan.steps.resize(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t j = 0; j < num_actions; ++j) {
      const auto v = action_var[(t - 1) * num_actions + j];
      if (v >= 0 && x[static_cast<std::size_t>(v)]) plan.steps[t - 1].push_back(static_cast<ActionId>(j));
    }
  }
  return plan;
}

Plan CnfQubo::decode(std::span<const std::uint8_t> x) const {
  return planning.decode(x.subspan(0, std::min(x.size(), certificate.original_num_vars)));
}

CnfQubo cnf_qubo(const PlanningProblem& problem, std::size_t horizon, const CnfOptions& options) {
  CnfQubo out;
  out.planning = encode_planning_cnf(problem, horizon, options);
  Poly pubo = cnf_to_pubo(out.planning.cnf);
  pubo.ensure_vars(out.planning.cnf.num_vars);
  out.certificate = reduce_to_quadratic(pubo);
  out.legend = out.planning.legend;
  for (std::size_t k = 0; k < out.certificate.substitutions.size(); ++k) {
    out.legend.push_back({VarLabel::Kind::Ancilla, static_cast<std::uint32_t>(k), 0});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct mappings

DirectQubo direct_coloring_qubo(const UndirectedGraph& graph, std::size_t k) {
  if (k == 0) throw InputError("need at least one color");
  const std::size_t n = graph.num_vertices();
  const std::size_t nv = n * k;
  Poly H(nv);
  DirectQubo out;
  for (std::size_t v = 0; v < n; ++v) {
    // (1 - sum_c x)^2 = 1 - sum_c x + 2 sum_{c<d} x x
    H.add_term({}, 1.0);
    for (std::size_t c = 0; c < k; ++c) {
      const auto a = static_cast<VarId>(v * k + c);
      H.add_term({a}, -1.0);
      for (std::size_t d = c + 1; d < k; ++d) H.add_term({a, static_cast<VarId>(v * k + d)}, 2.0);
      out.legend.push_back({VarLabel::Kind::Color, static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(c)});
    }
  }
  for (const auto& [u, v] : graph.edges()) {
    for (std::size_t c = 0; c < k; ++c) H.add_term({static_cast<VarId>(u * k + c), static_cast<VarId>(v * k + c)}, 1.0);
  }
  out.qubo = Qubo(std::move(H));
  return out;
}

DirectQubo direct_hampath_qubo(const UndirectedGraph& graph) {
  const std::size_t n = graph.num_vertices();
  if (n == 0) throw InputError("graph must be non-empty");
  const std::size_t nv = n * n;
  auto var = [n](std::size_t v, std::size_t t) { return static_cast<VarId>(v * n + t); };
  Poly H(nv);
  DirectQubo out;
  auto one_hot = [&H](const std::vector<VarId>& group) {
    H.add_term({}, 1.0);
    for (std::size_t a = 0; a < group.size(); ++a) {
      H.add_term({group[a]}, -1.0);
      for (std::size_t b = a + 1; b < group.size(); ++b) H.add_term({group[a], group[b]}, 2.0);
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<VarId> g;
    for (std::size_t t = 0; t < n; ++t) {
      g.push_back(var(v, t));
      out.legend.push_back({VarLabel::Kind::Slot, static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(t)});
    }
    one_hot(g);
  }
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<VarId> g;
    for (std::size_t v = 0; v < n; ++v) g.push_back(var(v, t));
    one_hot(g);
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u == v || graph.has_edge(u, v)) continue;
      for (std::size_t t = 0; t + 1 < n; ++t) H.add_term({var(u, t), var(v, t + 1)}, 1.0);
    }
  }
  out.qubo = Qubo(std::move(H));
  return out;
}

std::optional<std::vector<std::uint32_t>> decode_coloring(std::span<const std::uint8_t> x, std::size_t n,
                                                          std::size_t k) {
  if (x.size() < n * k) throw InputError("assignment too short for the coloring layout");
  std::vector<std::uint32_t> colors(n);
  for (std::size_t v = 0; v < n; ++v) {
    int found = -1;
    for (std::size_t c = 0; c < k; ++c) {
      if (!x[v * k + c]) continue;
      if (found >= 0) return std::nullopt;
      found = static_cast<int>(c);
    }
    if (found < 0) return std::nullopt;
    colors[v] = static_cast<std::uint32_t>(found);
  }
  return colors;
}

std::optional<std::vector<Vertex>> decode_hampath(std::span<const std::uint8_t> x, std::size_t n) {
  if (x.size() < n * n) throw InputError("assignment too short for the path layout");
  std::vector<Vertex> order(n);
  std::vector<int> per_vertex(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    int found = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (!x[v * n + t]) continue;
      if (found >= 0) return std::nullopt;
      found = static_cast<int>(v);
    }
    if (found < 0) return std::nullopt;
    order[t] = static_cast<Vertex>(found);
    if (++per_vertex[static_cast<std::size_t>(found)] > 1) return std::nullopt;
  }
  return order;
}

Plan coloring_to_plan(const std::vector<std::uint32_t>& colors, std::size_t k) {
  Plan plan;
  plan.steps.emplace_back();
  for (std::size_t v = 0; v < colors.size(); ++v) plan.steps[0].push_back(static_cast<ActionId>(k * v + colors[v]));
  return plan;
}

Plan order_to_plan(const std::vector<Vertex>& order) {
  Plan plan;
  for (auto v : order) plan.steps.push_back({static_cast<ActionId>(v)});
  return plan;
}

namespace {

std::size_t coloring_colors(const PlanningProblem& problem) {
  std::size_t k = 0;
  while (k + 1 < problem.names.size() && problem.names[k + 1] == "sc_0_" + std::to_string(k)) ++k;
  return k;
}

}  // namespace

std::optional<Family> detect_family(const PlanningProblem& problem) {
  const auto& names = problem.names;
  if (names.size() >= 3 && names.size() % 3 == 0 && names[0] == "sg_0" && names[1] == "si_0" && names[2] == "se_0" &&
      problem.actions.size() == names.size() / 3) {
    return Family::Navigation;
  }
  const std::size_t k = coloring_colors(problem);
  if (k > 0 && names[0] == "sg_0" && names.size() % (k + 1) == 0 &&
      problem.actions.size() == k * (names.size() / (k + 1))) {
    return Family::Scheduling;
  }
  return std::nullopt;
}

UndirectedGraph graph_from_coloring_problem(const PlanningProblem& problem, std::size_t k) {
  const std::size_t stride = k + 1;
  if (k == 0 || problem.names.size() % stride != 0 || problem.actions.size() != k * (problem.names.size() / stride)) {
    throw InputError("problem does not have the graph-coloring layout");
  }
  const std::size_t n = problem.names.size() / stride;
  UndirectedGraph g(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (auto i : problem.actions[k * v].pre_neg) {
      if (i % stride == 0) continue;
      const auto w = static_cast<Vertex>(i / stride);
      if (w != v && !g.has_edge(static_cast<Vertex>(v), w)) g.add_edge(static_cast<Vertex>(v), w);
    }
  }
  return g;
}

UndirectedGraph graph_from_uhp_problem(const PlanningProblem& problem) {
  if (problem.names.size() % 3 != 0 || problem.actions.size() != problem.names.size() / 3) {
    throw InputError("problem does not have the Hamiltonian-path layout");
  }
  const std::size_t n = problem.actions.size();
  UndirectedGraph g(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (auto i : problem.actions[v].eff_pos) {
      if (i % 3 != 2) continue;
      const auto w = static_cast<Vertex>(i / 3);
      if (w != v && !g.has_edge(static_cast<Vertex>(v), w)) g.add_edge(static_cast<Vertex>(v), w);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

MappingKind parse_mapping(const std::string& text) {
  if (text == "timeslice" || text == "time-slice" || text == "time_slice") return MappingKind::TimeSlice;
  if (text == "cnf") return MappingKind::Cnf;
  if (text == "direct") return MappingKind::Direct;
  throw InputError("unknown mapping '" + text + "' (expected timeslice, cnf or direct)");
}

std::string mapping_name(MappingKind kind) {
  switch (kind) {
    case MappingKind::TimeSlice: return "timeslice";
    case MappingKind::Cnf: return "cnf";
    case MappingKind::Direct: return "direct";
  }
  return "?";
}

std::optional<Plan> CompiledInstance::decode_plan(std::span<const std::uint8_t> x) const {
  switch (kind) {
    case MappingKind::TimeSlice: return timeslice->decode(x);
    case MappingKind::Cnf: return cnf->decode(x);
    case MappingKind::Direct:
      if (family == Family::Navigation) {
        auto order = decode_hampath(x, graph_size);
        if (!order) return std::nullopt;
        return order_to_plan(*order);
      } else {
        auto colors = decode_coloring(x, graph_size, this->colors);
        if (!colors) return std::nullopt;
        return coloring_to_plan(*colors, this->colors);
      }
  }
  return std::nullopt;
}

CompiledInstance compile_instance(const PlanningProblem& problem, Family family, MappingKind kind,
                                  const CompileOptions& options) {
  problem.check();
  CompiledInstance out;
  out.kind = kind;
  out.family = family;
  if (family == Family::Navigation) {
    out.graph_size = problem.num_state_vars() / 3;
  } else {
    out.colors = coloring_colors(problem);
    if (out.colors == 0) throw InputError("scheduling problem does not have the graph-coloring layout");
    out.graph_size = problem.num_state_vars() / (out.colors + 1);
  }
  out.horizon = options.horizon.value_or(problem.plan_length_hint.value_or(plan_length_for(family, out.graph_size)));

  switch (kind) {
    case MappingKind::TimeSlice: {
      TimeSliceOptions ts;
      if (options.timeslice) {
        ts = *options.timeslice;
      } else {
        ts.use_conflicts = family == Family::Scheduling;
        ts.use_single_action = family == Family::Navigation;
        ts.simplify_boundaries = options.simplify;
      }
      auto r = time_slice_qubo(problem, out.horizon, ts);
      out.qubo = std::move(r.qubo);
      out.legend = r.layout.legend;
      out.timeslice = std::move(r.layout);
      break;
    }
    case MappingKind::Cnf: {
      auto r = cnf_qubo(problem, out.horizon, CnfOptions{options.simplify});
      out.qubo = r.qubo();
      out.legend = r.legend;
      out.cnf = std::move(r);
      break;
    }
    case MappingKind::Direct: {
      DirectQubo r = family == Family::Navigation ? direct_hampath_qubo(graph_from_uhp_problem(problem))
                                                  : direct_coloring_qubo(graph_from_coloring_problem(problem, out.colors),
                                                                         out.colors);
      out.qubo = std::move(r.qubo);
      out.legend = std::move(r.legend);
      break;
    }
  }
  return out;
}

}  // namespace planqubo
