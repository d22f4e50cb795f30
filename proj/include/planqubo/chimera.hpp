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
#include <span>
#include <string>
#include <vector>

#include "planqubo/graph.hpp"

namespace planqubo {

/// (M, L)-Chimera graph: an M x M grid of K_{L,L} cells.
///
/// Qubit index = (row * M + col) * 2L + side * L + k. Side 0 (the left
/// column) couples vertically to the same k in the cells above and below
/// (index +- 2LM); side 1 couples horizontally (index +- 2L). Broken qubits
/// stay in the index space but lose all their edges.
class ChimeraGraph {
 public:
  ChimeraGraph(std::size_t M, std::size_t L, std::vector<Vertex> broken = {});

  std::size_t M() const { return m_; }
  std::size_t L() const { return l_; }
  std::size_t num_qubits() const { return graph_.num_vertices(); }
  std::size_t num_usable() const { return num_qubits() - broken_.size(); }
  std::size_t num_edges() const { return graph_.num_edges(); }
  const std::vector<Vertex>& broken() const { return broken_; }
  bool is_usable(Vertex q) const { return q < usable_.size() && usable_[q]; }
  const UndirectedGraph& graph() const { return graph_; }

  Vertex qubit(std::size_t row, std::size_t col, std::size_t side, std::size_t k) const {
    return static_cast<Vertex>(((row * m_ + col) * 2 + side) * l_ + k);
  }
  std::size_t vertical_offset() const { return 2 * l_ * m_; }
  std::size_t horizontal_offset() const { return 2 * l_; }

  /// Comment header (dimensions, broken qubits) then one "u v" edge per line.
  std::string to_edge_list() const;

 private:
  std::size_t m_;
  std::size_t l_;
  std::vector<Vertex> broken_;
  std::vector<bool> usable_;
  UndirectedGraph graph_;
};

/// IC_{n,n}: vertex v*n + t; edges between vertices sharing v or sharing t.
UndirectedGraph ic_graph(std::size_t n);

/// Parses "12,77,301" (empty string allowed).
std::vector<Vertex> parse_qubit_list(const std::string& text);

/// Ising model on hardware qubits. Energy follows the same sign convention
/// as IsingModel: E = -sum h_q s_q + sum J_uv s_u s_v + offset.
struct HardwareIsing {
  struct Coupling {
    Vertex u;
    Vertex v;
    double J;
  };

  std::size_t num_qubits = 0;
  std::vector<std::uint8_t> active;  // qubits that take part in the model
  std::vector<double> h;
  std::vector<Coupling> couplings;  // u < v, each a hardware edge
  double offset = 0.0;

  double energy(std::span<const std::int8_t> spins) const;
  double max_abs_h() const;
  double max_abs_J() const;
};

}  // namespace planqubo
