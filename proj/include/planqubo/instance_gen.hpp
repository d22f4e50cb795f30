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
#include <string>
#include <vector>

#include "planqubo/graph.hpp"
#include "planqubo/planning.hpp"
#include "planqubo/rng.hpp"

namespace planqubo {

enum class Family { Navigation, Scheduling };

/// Accepts "nav"/"navigation" and "sched"/"scheduling".
Family parse_family(const std::string& text);
std::string family_name(Family f);

/// G(n,p): each of the n(n-1)/2 pairs, visited in lexicographic order, is
/// kept when rng.uniform() < p.
UndirectedGraph er_graph(std::size_t n, double p, Rng& rng);

/// (ln n + ln ln n) / n clamped to [0,1]; n >= 3.
double navigation_phase_p(std::size_t n);
/// 4.5 / n (average degree c = 4.5); n >= 5.
double scheduling_phase_p(std::size_t n);

/// Hamiltonian-path planning problem. Per vertex v the state variables are
/// sg_v (visited), si_v (not yet visited), se_v (may be visited next), laid
/// out as 3v, 3v+1, 3v+2; action visit_v has id v.
PlanningProblem uhp_planning(const UndirectedGraph& graph);

/// k-coloring planning problem. Per vertex v: sg_v at (k+1)v and sc_v_c at
/// (k+1)v+1+c; action color_v_c has id k*v+c. plan_length_hint is 1 when
/// parallel, n otherwise.
PlanningProblem coloring_planning(const UndirectedGraph& graph, std::size_t k = 3, bool parallel = true);

/// Exact DP over vertex subsets; n <= 20 else CapabilityError.
bool is_hamiltonian_path(const UndirectedGraph& graph);
/// Exact backtracking; n <= 64 else CapabilityError.
bool is_k_colorable(const UndirectedGraph& graph, std::size_t k);

struct BenchmarkInstance {
  std::size_t attempt = 0;  // position in the seed stream
  std::uint64_t seed = 0;   // seed used for this graph
  UndirectedGraph graph;
  PlanningProblem problem;
  bool solvable = false;
};

struct BenchmarkSet {
  Family family = Family::Scheduling;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t attempts = 0;
  std::vector<BenchmarkInstance> instances;
};

/// Instance seeds are mix_seed(seed, attempt). With filter_solvable the set
/// holds the first `count` solvable instances in attempt order; otherwise
/// the first `count` attempts.
BenchmarkSet generate_benchmark(Family family, std::size_t n, std::size_t count, std::uint64_t seed,
                                bool filter_solvable = true);

/// Writes instance_XXXX.json per instance plus manifest.csv
/// (instance,attempt,seed,solvable,edges).
void write_benchmark(const BenchmarkSet& set, const std::string& dir);

}  // namespace planqubo
