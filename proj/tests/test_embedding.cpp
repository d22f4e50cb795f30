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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "planqubo/embedding.hpp"
#include "planqubo/errors.hpp"

using namespace planqubo;

namespace {

// Exhaustive sorted spectrum of a hardware model over its active qubits.
std::vector<double> spectrum(const HardwareIsing& hw) {
  std::vector<Vertex> act;
  for (Vertex q = 0; q < hw.num_qubits; ++q) {
    if (hw.active[q]) act.push_back(q);
  }
  std::vector<double> out;
  std::vector<std::int8_t> s(hw.num_qubits, 1);
  for (std::uint64_t m = 0; m < (1ULL << act.size()); ++m) {
    for (std::size_t i = 0; i < act.size(); ++i) s[act[i]] = ((m >> i) & 1) ? -1 : 1;
    out.push_back(hw.energy(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Chain 0 = {0}, chain 1 = {1, 4, 5, 6} in one (1,4) cell: three hardware
// edges join them.
Embedding two_chains() { return Embedding{{{0}, {1, 4, 5, 6}}}; }

}  // namespace

TEST(FindEmbedding, TriangleInSingleCell) {
  const ChimeraGraph hw(1, 2);
  const auto e = find_embedding(UndirectedGraph::complete(3), hw, 1);
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(validate_embedding(UndirectedGraph::complete(3), hw, *e).valid);
  EXPECT_EQ(e->total_qubits(), 4u);
  const auto m = embedding_metrics(*e);
  EXPECT_EQ(m.total, 4u);
  EXPECT_DOUBLE_EQ(m.average, 4.0 / 3);
  EXPECT_EQ(m.max, 2u);
}

TEST(FindEmbedding, Ic6WithinElevenRuns) {
  const ChimeraGraph hw(8, 4);
  const auto g = ic_graph(6);
  bool any = false;
  for (std::uint64_t r = 0; r < 11 && !any; ++r) {
    if (auto e = find_embedding(g, hw, mix_seed(6, r))) {
      EXPECT_TRUE(validate_embedding(g, hw, *e).valid);
      any = true;
    }
  }
  EXPECT_TRUE(any);
}

TEST(FindEmbedding, TooLargeFails) {
  FindEmbeddingOptions o;
  o.tries = 2;
  EXPECT_FALSE(find_embedding(UndirectedGraph::complete(5), ChimeraGraph(1, 2), 3, o).has_value());
}

TEST(FindEmbedding, AvoidsBrokenQubits) {
  const ChimeraGraph hw(2, 4, {0, 1, 2, 3, 9});
  const auto g = UndirectedGraph::complete(5);
  const auto e = find_embedding(g, hw, 8);
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(validate_embedding(g, hw, *e).valid);
}

TEST(FindEmbedding, Deterministic) {
  const ChimeraGraph hw(4, 4);
  const auto g = ic_graph(4);
  EXPECT_EQ(find_embedding(g, hw, 5), find_embedding(g, hw, 5));
}

TEST(CliqueEmbed, Bound) {
  const ChimeraGraph hw(8, 4);
  for (std::size_t n : {1, 2, 10, 33}) {
    const auto g = UndirectedGraph::complete(n);
    const auto e = clique_embed(g, hw);
    ASSERT_TRUE(e.has_value()) << n;
    EXPECT_TRUE(validate_embedding(g, hw, *e).valid) << n;
  }
  EXPECT_FALSE(clique_embed(UndirectedGraph::complete(34), hw).has_value());
  const auto k2 = clique_embed(UndirectedGraph::complete(2), ChimeraGraph(1, 1));
  ASSERT_TRUE(k2.has_value());
  EXPECT_EQ(k2->total_qubits(), 2u);
}

TEST(CliqueEmbed, SparseSourceAlsoFits) {
  Rng rng(1);
  UndirectedGraph g(33);
  for (int i = 0; i < 60; ++i) {
    const auto u = static_cast<Vertex>(rng.below(33)), v = static_cast<Vertex>(rng.below(33));
    if (u != v) g.add_edge(u, v);
  }
  const ChimeraGraph hw(8, 4);
  const auto e = clique_embed(g, hw);
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(validate_embedding(g, hw, *e).valid);
}

TEST(PackTriangles, Capacity) {
  const ChimeraGraph hw(8, 4);
  const auto e = pack_triangles(128, hw);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->total_qubits(), 512u);
  EXPECT_TRUE(validate_embedding(triangle_graph(128), hw, *e).valid);
  EXPECT_FALSE(pack_triangles(129, hw).has_value());
  const ChimeraGraph big(16, 4);
  const auto e2 = pack_triangles(512, big);
  ASSERT_TRUE(e2.has_value());
  EXPECT_TRUE(validate_embedding(triangle_graph(512), big, *e2).valid);
  EXPECT_FALSE(pack_triangles(1, ChimeraGraph(1, 3)).has_value());
}

TEST(PackTriangles, SkipsBrokenSlots) {
  const ChimeraGraph hw(8, 4, {0});
  EXPECT_FALSE(pack_triangles(128, hw).has_value());
  const auto e = pack_triangles(127, hw);
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(validate_embedding(triangle_graph(127), hw, *e).valid);
}

TEST(Validate, Reasons) {
  const ChimeraGraph hw(1, 2);
  UndirectedGraph g(2);
  g.add_edge(0, 1);
  EXPECT_TRUE(validate_embedding(g, hw, Embedding{{{0}, {2}}}).valid);
  const auto overlap = validate_embedding(g, hw, Embedding{{{0, 2}, {2}}});
  EXPECT_FALSE(overlap.valid);
  EXPECT_NE(overlap.reason.find("overlap"), std::string::npos);
  EXPECT_FALSE(validate_embedding(g, hw, Embedding{{{0}, {1}}}).valid);     // no edge
  EXPECT_FALSE(validate_embedding(g, hw, Embedding{{{0, 1}, {2}}}).valid);  // disconnected
  EXPECT_FALSE(validate_embedding(g, hw, Embedding{{{0}}}).valid);          // missing chain
  EXPECT_FALSE(validate_embedding(g, ChimeraGraph(1, 2, {2}), Embedding{{{0}, {2}}}).valid);
}

TEST(Validate, SingletonsOnSubgraph) {
  const ChimeraGraph hw(1, 2);
  const auto e = Embedding{{{0}, {1}, {2}, {3}}};
  EXPECT_TRUE(validate_embedding(hw.graph(), hw, e).valid);
  EXPECT_EQ(embedding_metrics(e).max, 1u);
}

TEST(Metrics, Percentiles) {
  Embedding e{{{0}, {1, 2}, {3, 4, 5}, {6, 7, 8, 9}}};
  const auto m = embedding_metrics(e);
  EXPECT_EQ(m.total, 10u);
  EXPECT_DOUBLE_EQ(m.median, 2.5);
  EXPECT_EQ(m.p65, 3u);
  EXPECT_EQ(m.p90, 4u);
  EXPECT_DOUBLE_EQ(nearest_rank({5, 1, 3}, 50), 3);
}

TEST(EmbedIsing, FieldSplitAndSingleCoupling) {
  const ChimeraGraph hw(1, 4);
  IsingModel m(2);
  m.h = {0.0, 1.0};
  m.add_coupling(0, 1, -1.0);
  const auto out = embed_ising(m, two_chains(), hw, 2.0);
  for (Vertex q : {1, 4, 5, 6}) EXPECT_DOUBLE_EQ(out.h[q], 0.25);
  std::size_t logical = 0, chain = 0;
  for (const auto& c : out.couplings) {
    if (c.u == 0) {
      EXPECT_EQ(c.v, 4u);
      EXPECT_DOUBLE_EQ(c.J, -1.0);
      ++logical;
    } else {
      EXPECT_DOUBLE_EQ(c.J, -2.0);
      ++chain;
    }
  }
  EXPECT_EQ(logical, 1u);
  EXPECT_EQ(chain, 3u);
}

TEST(EmbedIsing, SingletonsMatchLogical) {
  const ChimeraGraph hw(1, 2);
  IsingModel m(2);
  m.h = {0.3, -0.7};
  m.add_coupling(0, 1, 0.4);
  m.offset = 1;
  const auto out = embed_ising(m, Embedding{{{0}, {2}}}, hw, 5.0);
  for (std::uint64_t k = 0; k < 4; ++k) {
    const std::vector<std::int8_t> s{static_cast<std::int8_t>(k & 1 ? -1 : 1), 1,
                                     static_cast<std::int8_t>(k & 2 ? -1 : 1), 1};
    const std::vector<std::int8_t> l{s[0], s[2]};
    EXPECT_NEAR(out.energy(s), m.energy(l), 1e-12);
  }
}

TEST(EmbedIsing, MissingEdgeThrows) {
  IsingModel m(2);
  m.add_coupling(0, 1, 1.0);
  EXPECT_THROW(embed_ising(m, Embedding{{{0}, {1}}}, ChimeraGraph(1, 2), 1.0), SemanticError);
}

TEST(Rescale, IntoRange) {
  HardwareIsing hw;
  hw.num_qubits = 2;
  hw.active = {1, 1};
  hw.h = {4.0, -1.0};
  hw.couplings = {{0, 1, -3.0}};
  const double f = rescale_to_hardware_range(hw);
  EXPECT_DOUBLE_EQ(f, 3.0);
  EXPECT_LE(hw.max_abs_J(), 1.0);
  EXPECT_LE(hw.max_abs_h(), 2.0);
}

TEST(Gauge, IdentityAndFlip) {
  HardwareIsing hw;
  hw.num_qubits = 2;
  hw.active = {1, 1};
  hw.h = {0.5, -0.25};
  hw.couplings = {{0, 1, 0.75}};
  const auto same = apply_gauge(hw, GaugeVector{1, 1});
  EXPECT_EQ(same.h, hw.h);
  EXPECT_EQ(same.couplings[0].J, 0.75);
  const auto flip = apply_gauge(hw, GaugeVector{-1, -1});
  EXPECT_EQ(flip.h, (std::vector<double>{-0.5, 0.25}));
  EXPECT_EQ(flip.couplings[0].J, 0.75);
}

TEST(Gauge, SpectrumInvariant) {
  Rng rng(77);
  const ChimeraGraph chip(1, 6);
  for (int k = 0; k < 10; ++k) {
    HardwareIsing hw;
    hw.num_qubits = chip.num_qubits();
    hw.active.assign(hw.num_qubits, 1);
    hw.h.resize(hw.num_qubits);
    for (auto& h : hw.h) h = rng.uniform() * 2 - 1;
    for (auto [u, v] : chip.graph().edges()) hw.couplings.push_back({u, v, rng.uniform() * 2 - 1});
    const auto g = random_gauge(hw.num_qubits, rng);
    const auto gauged = apply_gauge(hw, g);
    const auto a = spectrum(hw), b = spectrum(gauged);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-9);
    // Pointwise: E_gauged(s) = E(g s).
    std::vector<std::int8_t> s(hw.num_qubits);
    for (auto& x : s) x = rng.coin() ? 1 : -1;
    EXPECT_NEAR(gauged.energy(s), hw.energy(ungauge_sample(s, g)), 1e-9);
  }
}

TEST(Decode, MajorityAndUniform) {
  const Embedding e{{{0, 1, 2}, {3, 4}}};
  EXPECT_EQ(majority_decode(e, Assignment{1, 1, 0, 1, 0}), (Assignment{1, 1}));
  EXPECT_EQ(majority_decode(e, Assignment{1, 1, 0, 0, 1}), (Assignment{1, 0}));
  EXPECT_FALSE(uniform_decode(e, Assignment{1, 1, 0, 1, 1}).has_value());
  const Assignment uni{0, 0, 0, 1, 1};
  EXPECT_EQ(*uniform_decode(e, uni), majority_decode(e, uni));
}

TEST(Decode, UngaugeBits) {
  EXPECT_EQ(ungauge_bits(Assignment{1, 0, 1}, GaugeVector{1, -1, -1}), (Assignment{1, 1, 0}));
}

TEST(EmbeddingJson, RoundTrip) {
  const auto e = two_chains();
  EXPECT_EQ(embedding_from_json(embedding_to_json(e)), e);
  EXPECT_THROW(embedding_from_json("{"), InputError);
}
