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

#include "planqubo/chimera.hpp"
#include "planqubo/graph.hpp"
#include "planqubo/pseudo_boolean.hpp"
#include "planqubo/rng.hpp"

namespace planqubo {

/// chains[i] is the component C_i of logical variable i (sorted qubits).
struct Embedding {
  std::vector<std::vector<Vertex>> chains;

  std::size_t num_vars() const { return chains.size(); }
  std::size_t total_qubits() const;
  bool operator==(const Embedding&) const = default;
};

struct EmbeddingCheck {
  bool valid = true;
  std::string reason;
  explicit operator bool() const { return valid; }
};

/// Checks: one nonempty chain per source vertex, usable qubits only,
/// pairwise disjoint ("overlap"), connected, and every source edge realized.
EmbeddingCheck validate_embedding(const UndirectedGraph& source, const ChimeraGraph& hardware,
                                  const Embedding& embedding);

struct EmbeddingMetrics {
  std::size_t total = 0;
  double average = 0.0;
  double median = 0.0;  // mean of the two middle values for even counts
  std::size_t p65 = 0;  // nearest-rank
  std::size_t p90 = 0;  // nearest-rank
  std::size_t max = 0;
};

EmbeddingMetrics embedding_metrics(const Embedding& embedding);

/// Nearest-rank percentile (p in (0, 100]) of a nonempty sample.
double nearest_rank(std::vector<double> values, double p);

struct FindEmbeddingOptions {
  std::size_t tries = 10;
  /// Annealing budget for the cross-shaped seed, per source vertex.
  std::size_t anneal_steps_per_vertex = 40000;
  /// Seed energy charged per qubit, against 1 per overlap or missing edge.
  double qubit_charge = 0.02;
  /// Rip-up-and-reroute passes per try before giving up.
  std::size_t max_rounds = 40;
  /// A try is abandoned after this many passes without reducing overlap.
  std::size_t patience = 10;
  /// Chain-shortening passes run after a valid embedding is found.
  std::size_t refine_rounds = 2;
};

/// Randomized heuristic: an annealed seed of straight qubit runs, repaired
/// and shortened by rip-up-and-reroute. nullopt when every try fails.
std::optional<Embedding> find_embedding(const UndirectedGraph& source, const ChimeraGraph& hardware,
                                        std::uint64_t seed, const FindEmbeddingOptions& options = {});

/// Deterministic layout for up to M*L + 1 vertices on an intact Chimera graph.
std::optional<Embedding> clique_embed(const UndirectedGraph& source, const ChimeraGraph& hardware);

/// Triangle t of the source is vertices 3t, 3t+1, 3t+2. Four qubits per
/// triangle, L/2 triangles per cell; cells touching broken qubits are skipped
/// slot by slot. nullopt for odd L or insufficient capacity.
std::optional<Embedding> pack_triangles(std::size_t n_triangles, const ChimeraGraph& hardware);
/// Disjoint union of n triangles (the source graph pack_triangles expects).
UndirectedGraph triangle_graph(std::size_t n_triangles);

/// Spreads h_i evenly over C_i, puts -j_int on every hardware edge inside a
/// component (j_int is a ferromagnetic strength, so positive values bind
/// chains), and places J_ij on the lexicographically smallest hardware edge
/// between C_i and C_j. Throws SemanticError if a logical coupling has no
/// hardware edge.
HardwareIsing embed_ising(const IsingModel& logical, const Embedding& embedding, const ChimeraGraph& hardware,
                          double j_int);

/// Divides all coefficients so that |J| <= 1 and |h| <= 2, the way the
/// machine rescales a submitted problem. Returns the factor used.
double rescale_to_hardware_range(HardwareIsing& hw);

/// Rounds every field and coupling to one of `levels` evenly spaced values
/// across the hardware range (exploratory precision model, off by default).
void quantize(HardwareIsing& hw, std::size_t levels);

using GaugeVector = std::vector<std::int8_t>;

GaugeVector random_gauge(std::size_t num_qubits, Rng& rng);
HardwareIsing apply_gauge(const HardwareIsing& hw, const GaugeVector& g);
/// s_q -> g_q s_q.
std::vector<std::int8_t> ungauge_sample(std::span<const std::int8_t> spins, const GaugeVector& g);
/// Bit version: flips the bits where g_q = -1.
Assignment ungauge_bits(std::span<const std::uint8_t> bits, const GaugeVector& g);

/// Majority value per component on a 0/1 hardware sample; ties take the
/// value of the component's lowest-index qubit.
Assignment majority_decode(const Embedding& embedding, std::span<const std::uint8_t> bits);
/// Read-off when every component is uniform, nullopt otherwise.
std::optional<Assignment> uniform_decode(const Embedding& embedding, std::span<const std::uint8_t> bits);

std::string embedding_to_json(const Embedding& embedding);
Embedding embedding_from_json(const std::string& text);

}  // namespace planqubo
