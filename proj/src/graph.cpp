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

#include "planqubo/graph.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "planqubo/errors.hpp"

namespace planqubo {

UndirectedGraph::UndirectedGraph(std::size_t num_vertices) : adjacency_(num_vertices) {}

UndirectedGraph UndirectedGraph::complete(std::size_t n) {
  UndirectedGraph g(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

UndirectedGraph UndirectedGraph::path(std::size_t n) {
  UndirectedGraph g(n);
  for (Vertex v = 1; v < n; ++v) g.add_edge(v - 1, v);
  return g;
}

UndirectedGraph UndirectedGraph::star(std::size_t leaves) {
  UndirectedGraph g(leaves + 1);
  for (Vertex v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

bool UndirectedGraph::add_edge(Vertex u, Vertex v) {
  if (u == v) throw InputError("self-loop on vertex " + std::to_string(u));
  if (u >= num_vertices() || v >= num_vertices()) throw InputError("edge endpoint out of range");
  auto& nu = adjacency_[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return false;
  nu.insert(it, v);
  auto& nv = adjacency_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++num_edges_;
  return true;
}

bool UndirectedGraph::has_edge(Vertex u, Vertex v) const {
  if (u >= num_vertices() || v >= num_vertices()) return false;
  const auto& nu = adjacency_[u];
  return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool UndirectedGraph::operator==(const UndirectedGraph& other) const {
  return adjacency_ == other.adjacency_;
}

std::string UndirectedGraph::to_edge_list() const {
  std::ostringstream out;
  out << "# vertices " << num_vertices() << " edges " << num_edges() << '\n';
  for (const auto& [u, v] : edges()) out << u << ' ' << v << '\n';
  return out.str();
}

bool induces_connected_subgraph(const UndirectedGraph& g, const std::vector<Vertex>& vertices) {
  if (vertices.empty()) return false;
  std::unordered_set<Vertex> members(vertices.begin(), vertices.end());
  std::unordered_set<Vertex> seen{vertices.front()};
  std::vector<Vertex> stack{vertices.front()};
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v)) {
      if (members.count(w) && seen.insert(w).second) stack.push_back(w);
    }
  }
  return seen.size() == members.size();
}

}  // namespace planqubo
