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
#include <utility>
#include <vector>

namespace planqubo {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;  // always (min, max)

/// Simple undirected graph: no self-loops, no parallel edges.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(std::size_t num_vertices);

  static UndirectedGraph complete(std::size_t n);
  static UndirectedGraph path(std::size_t n);
  static UndirectedGraph star(std::size_t leaves);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  /// Returns false if the edge already exists. Throws InputError on a
  /// self-loop or an out-of-range endpoint.
  bool add_edge(Vertex u, Vertex v);
  bool has_edge(Vertex u, Vertex v) const;
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }

  /// Sorted list of (min, max) pairs.
  std::vector<Edge> edges() const;

  bool operator==(const UndirectedGraph& other) const;

  std::string to_edge_list() const;

 private:
  std::vector<std::vector<Vertex>> adjacency_;  // each list kept sorted
  std::size_t num_edges_ = 0;
};

/// Connected-component check restricted to `vertices`, using the edges of g.
bool induces_connected_subgraph(const UndirectedGraph& g, const std::vector<Vertex>& vertices);

}  // namespace planqubo
