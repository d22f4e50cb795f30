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

#include "planqubo/chimera.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "planqubo/errors.hpp"

namespace planqubo {

ChimeraGraph::ChimeraGraph(std::size_t M, std::size_t L, std::vector<Vertex> broken)
    : m_(M), l_(L), broken_(std::move(broken)) {
  if (M < 1 || L < 1) throw InputError("Chimera dimensions must be positive");
  const std::size_t n = 2 * L * M * M;
  std::sort(broken_.begin(), broken_.end());
  broken_.erase(std::unique(broken_.begin(), broken_.end()), broken_.end());
  usable_.assign(n, true);
  for (auto q : broken_) {
    if (q >= n) throw InputError("broken qubit " + std::to_string(q) + " out of range");
    usable_[q] = false;
  }
  graph_ = UndirectedGraph(n);
  auto link = [this](Vertex a, Vertex b) {
    if (usable_[a] && usable_[b]) graph_.add_edge(a, b);
  };
  for (std::size_t r = 0; r < M; ++r) {
    for (std::size_t c = 0; c < M; ++c) {
      for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = 0; b < L; ++b) link(qubit(r, c, 0, a), qubit(r, c, 1, b));
        if (r + 1 < M) link(qubit(r, c, 0, a), qubit(r + 1, c, 0, a));
        if (c + 1 < M) link(qubit(r, c, 1, a), qubit(r, c + 1, 1, a));
      }
    }
  }
}

std::string ChimeraGraph::to_edge_list() const {
  std::ostringstream out;
  out << "# chimera M=" << m_ << " L=" << l_ << " qubits=" << num_qubits() << " usable=" << num_usable()
      << " edges=" << num_edges() << "\n";
  if (!broken_.empty()) {
    out << "# broken";
    for (auto q : broken_) out << ' ' << q;
    out << "\n";
  }
  out << graph_.to_edge_list();
  return out.str();
}

UndirectedGraph ic_graph(std::size_t n) {
  if (n < 1) throw InputError("IC graph needs n >= 1");
  UndirectedGraph g(n * n);
  for (std::size_t a = 0; a < n * n; ++a) {
    for (std::size_t b = a + 1; b < n * n; ++b) {
      if (a / n == b / n || a % n == b % n) g.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
    }
  }
  return g;
}

std::vector<Vertex> parse_qubit_list(const std::string& text) {
  std::vector<Vertex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      throw InputError("bad qubit index '" + item + "'");
    }
    if (pos != item.size()) throw InputError("bad qubit index '" + item + "'");
    out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

double HardwareIsing::energy(std::span<const std::int8_t> spins) const {
  if (spins.size() != num_qubits) throw InputError("spin vector does not match the hardware model");
  double e = offset;
  for (std::size_t q = 0; q < num_qubits; ++q) e -= h[q] * spins[q];
  for (const auto& c : couplings) e += c.J * spins[c.u] * spins[c.v];
  return e;
}

double HardwareIsing::max_abs_h() const {
  double m = 0.0;
  for (double x : h) m = std::max(m, std::abs(x));
  return m;
}

double HardwareIsing::max_abs_J() const {
  double m = 0.0;
  for (const auto& c : couplings) m = std::max(m, std::abs(c.J));
  return m;
}

}  // namespace planqubo
