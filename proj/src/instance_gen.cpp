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

#include "planqubo/instance_gen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "planqubo/errors.hpp"

namespace planqubo {

Family parse_family(const std::string& text) {
  if (text == "nav" || text == "navigation") return Family::Navigation;
  if (text == "sched" || text == "scheduling") return Family::Scheduling;
  throw InputError("unknown family: " + text);
}

std::string family_name(Family f) { return f == Family::Navigation ? "navigation" : "scheduling"; }

UndirectedGraph er_graph(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability must lie in [0,1]");
  UndirectedGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) g.add_edge(u, v);
    }
  }
  return g;
}

double navigation_phase_p(std::size_t n) {
  if (n < 3) throw InputError("navigation phase transition needs n >= 3");
  const double x = static_cast<double>(n);
  return std::clamp((std::log(x) + std::log(std::log(x))) / x, 0.0, 1.0);
}

double scheduling_phase_p(std::size_t n) {
  if (n < 5) throw InputError("scheduling phase transition needs n >= 5 so that p <= 1");
  return 4.5 / static_cast<double>(n);
}

PlanningProblem uhp_planning(const UndirectedGraph& graph) {
  const std::size_t n = graph.num_vertices();
  if (n == 0) throw InputError("graph must be non-empty");
  PlanningProblem p;
  for (std::size_t v = 0; v < n; ++v) {
    const auto s = std::to_string(v);
    p.names.push_back("sg_" + s);
    p.names.push_back("si_" + s);
    p.names.push_back("se_" + s);
    p.initial.push_back(false);
    p.initial.push_back(true);
    p.initial.push_back(true);
    p.goals_pos.push_back(static_cast<StateVarId>(3 * v));
  }
  for (Vertex v = 0; v < n; ++v) {
    Action a;
    a.name = "visit_" + std::to_string(v);
    a.pre_pos = {3 * v + 1, 3 * v + 2};
    a.eff_pos.push_back(3 * v);
    a.eff_neg.push_back(3 * v + 1);
    for (Vertex w = 0; w < n; ++w) {
      if (w == v) continue;
      (graph.has_edge(v, w) ? a.eff_pos : a.eff_neg).push_back(3 * w + 2);
    }
    p.actions.push_back(std::move(a));
  }
  p.plan_length_hint = n;
  p.normalize();
  return p;
}

PlanningProblem coloring_planning(const UndirectedGraph& graph, std::size_t k, bool parallel) {
  if (k < 1) throw InputError("need at least one color");
  const std::size_t n = graph.num_vertices();
  const auto stride = static_cast<StateVarId>(k + 1);
  PlanningProblem p;
  for (std::size_t v = 0; v < n; ++v) {
    p.names.push_back("sg_" + std::to_string(v));
    for (std::size_t c = 0; c < k; ++c) p.names.push_back("sc_" + std::to_string(v) + "_" + std::to_string(c));
    p.goals_pos.push_back(static_cast<StateVarId>(stride * v));
  }
  p.initial.assign(p.names.size(), false);
  for (Vertex v = 0; v < n; ++v) {
    for (StateVarId c = 0; c < k; ++c) {
      Action a;
      a.name = "color_" + std::to_string(v) + "_" + std::to_string(c);
      a.pre_neg.push_back(stride * v);
      for (Vertex w : graph.neighbors(v)) a.pre_neg.push_back(stride * w + 1 + c);
      a.eff_pos = {stride * v, stride * v + 1 + c};
      p.actions.push_back(std::move(a));
    }
  }
  p.plan_length_hint = parallel ? 1 : n;
  p.normalize();
  return p;
}

bool is_hamiltonian_path(const UndirectedGraph& graph) {
  const std::size_t n = graph.num_vertices();
  if (n > 20) throw CapabilityError("Hamiltonian path oracle limited to n <= 20");
  if (n <= 1) return true;
  std::vector<std::uint32_t> adj(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : graph.neighbors(v)) adj[v] |= 1u << w;
  }
  // ends[mask]: vertices at which some path covering exactly `mask` can end.
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> ends(std::size_t{1} << n, 0);
  for (std::size_t v = 0; v < n; ++v) ends[1u << v] = 1u << v;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t e = ends[mask];
    while (e) {
      const int v = std::countr_zero(e);
      e &= e - 1;
      std::uint32_t next = adj[v] & ~mask;
      while (next) {
        const int w = std::countr_zero(next);
        next &= next - 1;
        ends[mask | (1u << w)] |= 1u << w;
      }
    }
  }
  return ends[full] != 0;
}

namespace {

bool color_rec(const UndirectedGraph& g, const std::vector<Vertex>& order, std::size_t pos,
               std::vector<int>& color, std::size_t k) {
  if (pos == order.size()) return true;
  const Vertex v = order[pos];
  int used_max = -1;
  for (std::size_t i = 0; i < pos; ++i) used_max = std::max(used_max, color[order[i]]);
  for (int c = 0; c < static_cast<int>(k); ++c) {
    // Symmetry: never open more than one new color at a time.
    if (c > used_max + 1) break;
    bool ok = true;
    for (Vertex w : g.neighbors(v)) {
      if (color[w] == c) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    color[v] = c;
    if (color_rec(g, order, pos + 1, color, k)) return true;
    color[v] = -1;
  }
  return false;
}

}  // namespace

bool is_k_colorable(const UndirectedGraph& graph, std::size_t k) {
  const std::size_t n = graph.num_vertices();
  if (n > 64) throw CapabilityError("coloring oracle limited to n <= 64");
  if (n == 0) return true;
  if (k == 0) return false;
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return graph.degree(a) > graph.degree(b); });
  std::vector<int> color(n, -1);
  return color_rec(graph, order, 0, color, k);
}

BenchmarkSet generate_benchmark(Family family, std::size_t n, std::size_t count, std::uint64_t seed,
                                bool filter_solvable) {
  BenchmarkSet set;
  set.family = family;
  set.n = n;
  set.seed = seed;
  if (count == 0) return set;
  if (family == Family::Navigation && n > 20) throw CapabilityError("navigation oracle limited to n <= 20");
  if (family == Family::Scheduling && n > 64) throw CapabilityError("coloring oracle limited to n <= 64");
  const double p = family == Family::Navigation ? navigation_phase_p(n) : scheduling_phase_p(n);
  const std::size_t max_attempts = 1000 * count + 1000;
  for (std::size_t attempt = 0; set.instances.size() < count; ++attempt) {
    if (attempt >= max_attempts) throw CapabilityError("too few solvable instances in the seed stream");
    BenchmarkInstance inst;
    inst.attempt = attempt;
    inst.seed = mix_seed(seed, attempt);
    Rng rng(inst.seed);
    inst.graph = er_graph(n, p, rng);
    inst.solvable =
        family == Family::Navigation ? is_hamiltonian_path(inst.graph) : is_k_colorable(inst.graph, 3);
    set.attempts = attempt + 1;
    if (filter_solvable && !inst.solvable) continue;
    inst.problem = family == Family::Navigation ? uhp_planning(inst.graph) : coloring_planning(inst.graph, 3);
    set.instances.push_back(std::move(inst));
  }
  return set;
}

void write_benchmark(const BenchmarkSet& set, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "manifest.csv");
  if (!manifest) throw IoError("cannot write manifest in " + dir);
  manifest << "instance,family,n,attempt,seed,solvable,edges\n";
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    const auto& inst = set.instances[i];
    std::ostringstream name;
    name << "instance_" << std::setw(4) << std::setfill('0') << i;
    write_problem_file(inst.problem, (fs::path(dir) / (name.str() + ".json")).string());
    std::ofstream graph_out(fs::path(dir) / (name.str() + ".edges"));
    graph_out << inst.graph.to_edge_list();
    manifest << name.str() << ',' << family_name(set.family) << ',' << set.n << ',' << inst.attempt << ','
             << inst.seed << ',' << (inst.solvable ? 1 : 0) << ',' << inst.graph.num_edges() << '\n';
  }
}

}  // namespace planqubo
