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

#include "planqubo/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"
#include "planqubo/errors.hpp"

namespace planqubo {

std::size_t Embedding::total_qubits() const {
  std::size_t t = 0;
  for (const auto& c : chains) t += c.size();
  return t;
}

EmbeddingCheck validate_embedding(const UndirectedGraph& source, const ChimeraGraph& hardware,
                                  const Embedding& embedding) {
  const std::size_t n = source.num_vertices();
  if (embedding.chains.size() != n) {
    return {false, "embedding has " + std::to_string(embedding.chains.size()) + " components for " +
                       std::to_string(n) + " variables"};
  }
  const auto& hw = hardware.graph();
  std::vector<std::int64_t> owner(hardware.num_qubits(), -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& chain = embedding.chains[i];
    if (chain.empty()) return {false, "empty component for variable " + std::to_string(i)};
    for (auto q : chain) {
      if (q >= hardware.num_qubits()) return {false, "qubit " + std::to_string(q) + " out of range"};
      if (!hardware.is_usable(q)) return {false, "broken qubit " + std::to_string(q) + " used"};
      if (owner[q] >= 0) {
        return {false, "overlap: qubit " + std::to_string(q) + " in components " + std::to_string(owner[q]) +
                           " and " + std::to_string(i)};
      }
      owner[q] = static_cast<std::int64_t>(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!induces_connected_subgraph(hw, embedding.chains[i])) {
      return {false, "disconnected component for variable " + std::to_string(i)};
    }
  }
  for (const auto& [a, b] : source.edges()) {
    bool found = false;
    for (auto q : embedding.chains[a]) {
      for (auto r : hw.neighbors(q)) {
        if (owner[r] == static_cast<std::int64_t>(b)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return {false, "missing edge (" + std::to_string(a) + "," + std::to_string(b) + ")"};
  }
  return {};
}

double nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw InputError("percentile of an empty sample");
  if (!(p > 0.0 && p <= 100.0)) throw InputError("percentile must lie in (0, 100]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

EmbeddingMetrics embedding_metrics(const Embedding& embedding) {
  EmbeddingMetrics m;
  if (embedding.chains.empty()) return m;
  std::vector<double> sizes;
  for (const auto& c : embedding.chains) sizes.push_back(static_cast<double>(c.size()));
  std::sort(sizes.begin(), sizes.end());
  const std::size_t n = sizes.size();
  m.total = embedding.total_qubits();
  m.average = static_cast<double>(m.total) / static_cast<double>(n);
  m.median = n % 2 ? sizes[n / 2] : 0.5 * (sizes[n / 2 - 1] + sizes[n / 2]);
  m.p65 = static_cast<std::size_t>(nearest_rank(sizes, 65));
  m.p90 = static_cast<std::size_t>(nearest_rank(sizes, 90));
  m.max = static_cast<std::size_t>(sizes.back());
  return m;
}

// ---------------------------------------------------------------------------
// Deterministic layouts

namespace {

std::vector<std::vector<Vertex>> clique_chains(const ChimeraGraph& hw) {
  const std::size_t M = hw.M();
  const std::size_t L = hw.L();
  std::vector<std::vector<Vertex>> chains;
  if (M == 1) {
    chains.push_back({hw.qubit(0, 0, 0, 0)});
    chains.push_back({hw.qubit(0, 0, 1, 0)});
    for (std::size_t k = 1; k < L; ++k) chains.push_back({hw.qubit(0, 0, 0, k), hw.qubit(0, 0, 1, k)});
    return chains;
  }
  // Chain (b, k): right qubits along row b up to the diagonal, then left
  // qubits down column b from the diagonal.
  for (std::size_t b = 0; b < M; ++b) {
    for (std::size_t k = 0; k < L; ++k) {
      std::vector<Vertex> c;
      for (std::size_t col = 0; col <= b; ++col) c.push_back(hw.qubit(b, col, 1, k));
      for (std::size_t row = b; row < M; ++row) c.push_back(hw.qubit(row, b, 0, k));
      chains.push_back(std::move(c));
    }
  }
  // One more chain in the unused upper triangle, touching every chain above
  // its diagonal cell.
  std::vector<Vertex> extra;
  for (std::size_t k = 0; k < L; ++k) extra.push_back(hw.qubit(0, 1, 1, k));
  for (std::size_t b = 1; b < M; ++b) {
    for (std::size_t k = 0; k < L; ++k) extra.push_back(hw.qubit(b - 1, b, 0, k));
    extra.push_back(hw.qubit(b - 1, b, 1, 0));
    if (b + 1 < M) {
      extra.push_back(hw.qubit(b - 1, b + 1, 1, 0));
      extra.push_back(hw.qubit(b - 1, b + 1, 0, 0));
    }
  }
  chains.push_back(std::move(extra));
  return chains;
}

}  // namespace

std::optional<Embedding> clique_embed(const UndirectedGraph& source, const ChimeraGraph& hardware) {
  const std::size_t n = source.num_vertices();
  if (!hardware.broken().empty()) return std::nullopt;
  if (n > hardware.M() * hardware.L() + 1) return std::nullopt;
  auto chains = clique_chains(hardware);
  chains.resize(n);
  Embedding e;
  for (auto& c : chains) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    e.chains.push_back(std::move(c));
  }
  return e;
}

UndirectedGraph triangle_graph(std::size_t n_triangles) {
  UndirectedGraph g(3 * n_triangles);
  for (std::size_t t = 0; t < n_triangles; ++t) {
    const auto a = static_cast<Vertex>(3 * t);
    g.add_edge(a, a + 1);
    g.add_edge(a, a + 2);
    g.add_edge(a + 1, a + 2);
  }
  return g;
}

std::optional<Embedding> pack_triangles(std::size_t n_triangles, const ChimeraGraph& hardware) {
  const std::size_t M = hardware.M();
  const std::size_t L = hardware.L();
  if (L % 2 != 0) return std::nullopt;
  Embedding e;
  for (std::size_t cell = 0; cell < M * M && e.chains.size() < 3 * n_triangles; ++cell) {
    const std::size_t r = cell / M;
    const std::size_t c = cell % M;
    for (std::size_t t = 0; t < L / 2 && e.chains.size() < 3 * n_triangles; ++t) {
      const Vertex l0 = hardware.qubit(r, c, 0, 2 * t);
      const Vertex r0 = hardware.qubit(r, c, 1, 2 * t);
      const Vertex l1 = hardware.qubit(r, c, 0, 2 * t + 1);
      const Vertex r1 = hardware.qubit(r, c, 1, 2 * t + 1);
      if (!hardware.is_usable(l0) || !hardware.is_usable(r0) || !hardware.is_usable(l1) || !hardware.is_usable(r1)) {
        continue;
      }
      e.chains.push_back({l0});
      e.chains.push_back({r0});
      e.chains.push_back({std::min(l1, r1), std::max(l1, r1)});
    }
  }
  if (e.chains.size() < 3 * n_triangles) return std::nullopt;
  return e;
}

// ---------------------------------------------------------------------------
// Parameter setting

HardwareIsing embed_ising(const IsingModel& logical, const Embedding& embedding, const ChimeraGraph& hardware,
                          double j_int) {
  if (logical.num_spins != embedding.num_vars()) throw InputError("embedding does not match the logical model");
  const std::size_t nq = hardware.num_qubits();
  const auto& hw = hardware.graph();
  HardwareIsing out;
  out.num_qubits = nq;
  out.active.assign(nq, 0);
  out.h.assign(nq, 0.0);
  out.offset = logical.offset;
  std::vector<std::int64_t> owner(nq, -1);
  for (std::size_t i = 0; i < embedding.num_vars(); ++i) {
    const auto& chain = embedding.chains[i];
    if (chain.empty()) throw InputError("empty component for variable " + std::to_string(i));
    for (auto q : chain) {
      if (q >= nq) throw InputError("qubit out of range in embedding");
      owner[q] = static_cast<std::int64_t>(i);
      out.active[q] = 1;
      out.h[q] = logical.h[i] / static_cast<double>(chain.size());
    }
  }
  std::map<std::pair<Vertex, Vertex>, double> J;
  for (const auto& chain : embedding.chains) {
    for (auto q : chain) {
      for (auto r : hw.neighbors(q)) {
        if (r > q && owner[r] == owner[q]) J[{q, r}] = -j_int;
      }
    }
  }
  for (const auto& [key, value] : logical.J) {
    if (value == 0.0) continue;
    const auto [i, j] = key;
    std::optional<std::pair<Vertex, Vertex>> best;
    for (auto q : embedding.chains[i]) {
      for (auto r : hw.neighbors(q)) {
        if (owner[r] != static_cast<std::int64_t>(j)) continue;
        const std::pair<Vertex, Vertex> e{std::min(q, r), std::max(q, r)};
        if (!best || e < *best) best = e;
      }
    }
    if (!best) {
      throw SemanticError("no hardware edge between components " + std::to_string(i) + " and " + std::to_string(j));
    }
    J[*best] += value;
  }
  for (const auto& [e, value] : J) out.couplings.push_back({e.first, e.second, value});
  return out;
}

double rescale_to_hardware_range(HardwareIsing& hw) {
  const double factor = std::max(hw.max_abs_J(), hw.max_abs_h() / 2.0);
  if (factor <= 0.0) return 1.0;
  for (auto& x : hw.h) x /= factor;
  for (auto& c : hw.couplings) c.J /= factor;
  hw.offset /= factor;
  return factor;
}

void quantize(HardwareIsing& hw, std::size_t levels) {
  if (levels < 2) throw InputError("quantization needs at least two levels");
  const double steps = static_cast<double>(levels - 1);
  auto snap = [steps](double x, double range) {
    const double clamped = std::clamp(x, -range, range);
    return std::round((clamped + range) / (2.0 * range) * steps) / steps * 2.0 * range - range;
  };
  for (auto& x : hw.h) x = snap(x, 2.0);
  for (auto& c : hw.couplings) c.J = snap(c.J, 1.0);
}

GaugeVector random_gauge(std::size_t num_qubits, Rng& rng) {
  GaugeVector g(num_qubits);
  for (auto& x : g) x = rng.coin() ? 1 : -1;
  return g;
}

HardwareIsing apply_gauge(const HardwareIsing& hw, const GaugeVector& g) {
  if (g.size() != hw.num_qubits) throw InputError("gauge length does not match the hardware model");
  HardwareIsing out = hw;
  for (std::size_t q = 0; q < hw.num_qubits; ++q) out.h[q] *= g[q];
  for (auto& c : out.couplings) c.J *= g[c.u] * g[c.v];
  return out;
}

std::vector<std::int8_t> ungauge_sample(std::span<const std::int8_t> spins, const GaugeVector& g) {
  if (g.size() != spins.size()) throw InputError("gauge length does not match the sample");
  std::vector<std::int8_t> out(spins.size());
  for (std::size_t q = 0; q < spins.size(); ++q) out[q] = static_cast<std::int8_t>(spins[q] * g[q]);
  return out;
}

Assignment ungauge_bits(std::span<const std::uint8_t> bits, const GaugeVector& g) {
  if (g.size() != bits.size()) throw InputError("gauge length does not match the sample");
  Assignment out(bits.size());
  for (std::size_t q = 0; q < bits.size(); ++q) out[q] = g[q] < 0 ? static_cast<std::uint8_t>(!bits[q]) : bits[q];
  return out;
}

Assignment majority_decode(const Embedding& embedding, std::span<const std::uint8_t> bits) {
  Assignment out(embedding.num_vars());
  for (std::size_t i = 0; i < embedding.num_vars(); ++i) {
    const auto& chain = embedding.chains[i];
    std::size_t ones = 0;
    for (auto q : chain) ones += bits[q] ? 1 : 0;
    if (2 * ones > chain.size()) {
      out[i] = 1;
    } else if (2 * ones < chain.size()) {
      out[i] = 0;
    } else {
      out[i] = bits[*std::min_element(chain.begin(), chain.end())] ? 1 : 0;
    }
  }
  return out;
}

std::optional<Assignment> uniform_decode(const Embedding& embedding, std::span<const std::uint8_t> bits) {
  Assignment out(embedding.num_vars());
  for (std::size_t i = 0; i < embedding.num_vars(); ++i) {
    const auto& chain = embedding.chains[i];
    const std::uint8_t first = bits[chain.front()] ? 1 : 0;
    for (auto q : chain) {
      if ((bits[q] ? 1 : 0) != first) return std::nullopt;
    }
    out[i] = first;
  }
  return out;
}

std::string embedding_to_json(const Embedding& embedding) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < embedding.num_vars(); ++i) j[std::to_string(i)] = embedding.chains[i];
  return j.dump();
}

Embedding embedding_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("embedding JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("embedding JSON must be an object");
  Embedding e;
  e.chains.resize(j.size());
  std::vector<bool> seen(j.size(), false);
  for (const auto& [key, value] : j.items()) {
    std::size_t pos = 0;
    unsigned long i = 0;
    try {
      i = std::stoul(key, &pos);
    } catch (const std::exception&) {
      throw InputError("embedding key '" + key + "' is not a variable index");
    }
    if (pos != key.size() || i >= j.size() || seen[i]) throw InputError("embedding keys must be 0..n-1");
    seen[i] = true;
    if (!value.is_array()) throw InputError("component of variable " + key + " must be an array");
    for (const auto& q : value) {
      if (!q.is_number_unsigned()) throw InputError("qubit ids must be non-negative integers");
      e.chains[i].push_back(q.get<Vertex>());
    }
    std::sort(e.chains[i].begin(), e.chains[i].end());
  }
  return e;
}

}  // namespace planqubo
