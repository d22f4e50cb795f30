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

// Heuristic minor embedding. Each try has two stages:
//
//  1. Seeding. Every chain starts as a Chimera "cross": a run of right-side
//     qubits along one track of a row and/or a run of left-side qubits
//     along one track of a column, joined where they meet. Simulated
//     annealing moves the runs around to minimize overlaps plus unrealized
//     source edges, with a small charge per qubit.
//  2. Routing. Chains are ripped up one at a time and rerouted along
//     weighted shortest paths toward their neighbors' chains, a qubit's
//     weight growing exponentially with the number of chains already on it
//     (and with a congestion history). This repairs seeds that annealing
//     left infeasible and then shortens chains without overlap.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "planqubo/embedding.hpp"
#include "planqubo/errors.hpp"

namespace planqubo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Stage 1: cross-shaped seeds

struct Cross {
  int row = 0, col = 0;        // cell where the two runs meet
  int htrack = 0, vtrack = 0;  // k of the right / left qubits
  int c1 = 0, c2 = 0;          // columns spanned by the horizontal run
  int r1 = 0, r2 = 0;          // rows spanned by the vertical run
  bool horizontal = true, vertical = true;

  int size() const { return (horizontal ? c2 - c1 + 1 : 0) + (vertical ? r2 - r1 + 1 : 0); }
};

bool crosses_touch(const Cross& a, const Cross& b) {
  // A right qubit and a left qubit in the same cell are always coupled.
  if (a.horizontal && b.vertical && a.row >= b.r1 && a.row <= b.r2 && b.col >= a.c1 && b.col <= a.c2) return true;
  if (b.horizontal && a.vertical && b.row >= a.r1 && b.row <= a.r2 && a.col >= b.c1 && a.col <= b.c2) return true;
  // Collinear runs on the same track meeting end to end.
  if (a.horizontal && b.horizontal && a.row == b.row && a.htrack == b.htrack &&
      (a.c2 + 1 == b.c1 || b.c2 + 1 == a.c1)) {
    return true;
  }
  return a.vertical && b.vertical && a.col == b.col && a.vtrack == b.vtrack &&
         (a.r2 + 1 == b.r1 || b.r2 + 1 == a.r1);
}

class CrossAnnealer {
 public:
  CrossAnnealer(const UndirectedGraph& source, const ChimeraGraph& hw, Rng& rng)
      : source_(source),
        hw_(hw),
        rng_(rng),
        m_(static_cast<int>(hw.M())),
        l_(static_cast<int>(hw.L())),
        shapes_(source.num_vertices()),
        right_(hw.M() * hw.M() * hw.L(), 0),
        left_(hw.M() * hw.M() * hw.L(), 0) {
    // A broken qubit is pre-occupied, so covering it counts as overlap.
    for (int r = 0; r < m_; ++r) {
      for (int c = 0; c < m_; ++c) {
        for (int k = 0; k < l_; ++k) {
          if (!hw.is_usable(hw.qubit(r, c, 1, k))) right_[slot(r, c, k)] = 1;
          if (!hw.is_usable(hw.qubit(r, c, 0, k))) left_[slot(r, c, k)] = 1;
        }
      }
    }
  }

  /// Anneals for at most `steps` moves; true once a seed with no overlap and
  /// every source edge realized is reached.
  bool run(std::size_t steps, double qubit_charge) {
    const std::size_t n = shapes_.size();
    qubit_charge_ = qubit_charge;
    for (std::size_t v = 0; v < n; ++v) {
      shapes_[v] = random_cross();
      occupy(shapes_[v], +1);
    }
    missing_ = 0;
    for (const auto& [a, b] : source_.edges()) missing_ += !crosses_touch(shapes_[a], shapes_[b]);

    constexpr double kHot = 2.0;
    constexpr double kCold = 0.05;
    const double ratio = std::log(kCold / kHot);
    for (std::size_t step = 0; step < steps && (overlap_ > 0 || missing_ > 0); ++step) {
      const double temperature = kHot * std::exp(ratio * static_cast<double>(step) / static_cast<double>(steps));
      propose(temperature, false);
    }
    if (overlap_ > 0 || missing_ > 0) return false;
    // Shrink the runs without giving up feasibility.
    for (std::size_t extra = 0; extra < steps / 4; ++extra) propose(qubit_charge / 4, true);
    return true;
  }

  std::vector<std::vector<Vertex>> chains() const {
    std::vector<std::vector<Vertex>> out(shapes_.size());
    for (std::size_t v = 0; v < shapes_.size(); ++v) {
      const Cross& s = shapes_[v];
      auto& chain = out[v];
      if (s.horizontal) {
        for (int c = s.c1; c <= s.c2; ++c) chain.push_back(hw_.qubit(s.row, c, 1, s.htrack));
      }
      if (s.vertical) {
        for (int r = s.r1; r <= s.r2; ++r) chain.push_back(hw_.qubit(r, s.col, 0, s.vtrack));
      }
      std::sort(chain.begin(), chain.end());
    }
    return out;
  }

 private:
  std::size_t slot(int r, int c, int k) const { return static_cast<std::size_t>((r * m_ + c) * l_ + k); }

  void propose(double temperature, bool keep_feasible) {
    const auto v = static_cast<Vertex>(rng_.below(shapes_.size()));
    const Cross before = shapes_[v];
    const Cross after = perturb(before);

    long missing_before = 0;
    long missing_after = 0;
    for (auto u : source_.neighbors(v)) missing_before += !crosses_touch(shapes_[u], before);
    const long overlap_before = overlap_;
    occupy(before, -1);
    occupy(after, +1);
    for (auto u : source_.neighbors(v)) missing_after += !crosses_touch(shapes_[u], after);

    const long violations = overlap_ - overlap_before + missing_after - missing_before;
    const double delta = static_cast<double>(violations) + qubit_charge_ * (after.size() - before.size());
    const bool allowed = !keep_feasible || violations <= 0;
    if (allowed && (delta <= 0.0 || rng_.uniform() < std::exp(-delta / temperature))) {
      shapes_[v] = after;
      missing_ += missing_after - missing_before;
    } else {
      occupy(after, -1);
      occupy(before, +1);
    }
  }

  int pick(int bound) { return static_cast<int>(rng_.below(static_cast<std::uint64_t>(bound))); }

  Cross random_cross() {
    Cross s;
    s.row = s.r1 = s.r2 = pick(m_);
    s.col = s.c1 = s.c2 = pick(m_);
    s.htrack = pick(l_);
    s.vtrack = pick(l_);
    const int kind = pick(3);
    s.horizontal = kind != 1;
    s.vertical = kind != 2;
    return s;
  }

  void occupy(const Cross& s, int delta) {
    auto touch = [&](int& count) {
      if (delta > 0) {
        if (count >= 1) ++overlap_;
        ++count;
      } else {
        --count;
        if (count >= 1) --overlap_;
      }
    };
    if (s.horizontal) {
      for (int c = s.c1; c <= s.c2; ++c) touch(right_[slot(s.row, c, s.htrack)]);
    }
    if (s.vertical) {
      for (int r = s.r1; r <= s.r2; ++r) touch(left_[slot(r, s.col, s.vtrack)]);
    }
  }

  Cross perturb(Cross s) {
    const bool grow = rng_.coin();
    switch (pick(9)) {
      case 0:
        if (s.horizontal) s.c1 = grow ? std::max(0, s.c1 - 1) : std::min(s.col, s.c1 + 1);
        break;
      case 1:
        if (s.horizontal) s.c2 = grow ? std::min(m_ - 1, s.c2 + 1) : std::max(s.col, s.c2 - 1);
        break;
      case 2:
        if (s.vertical) s.r1 = grow ? std::max(0, s.r1 - 1) : std::min(s.row, s.r1 + 1);
        break;
      case 3:
        if (s.vertical) s.r2 = grow ? std::min(m_ - 1, s.r2 + 1) : std::max(s.row, s.r2 - 1);
        break;
      case 4:
        s.htrack = pick(l_);
        break;
      case 5:
        s.vtrack = pick(l_);
        break;
      case 6:
        // Slide the meeting cell along the runs.
        if (s.vertical) s.row = s.r1 + pick(s.r2 - s.r1 + 1);
        if (s.horizontal) s.col = s.c1 + pick(s.c2 - s.c1 + 1);
        if (!s.vertical) s.r1 = s.r2 = s.row;
        if (!s.horizontal) s.c1 = s.c2 = s.col;
        break;
      case 7:
        // Drop one run, or add the missing one as a single qubit.
        if (s.horizontal && s.vertical) {
          (grow ? s.horizontal : s.vertical) = false;
        } else if (s.horizontal) {
          s.vertical = true;
          s.r1 = s.r2 = s.row;
        } else {
          s.horizontal = true;
          s.c1 = s.c2 = s.col;
        }
        break;
      default:
        s = random_cross();
        break;
    }
    return s;
  }

  const UndirectedGraph& source_;
  const ChimeraGraph& hw_;
  Rng& rng_;
  int m_;
  int l_;
  std::vector<Cross> shapes_;
  std::vector<int> right_;
  std::vector<int> left_;
  long overlap_ = 0;
  long missing_ = 0;
  double qubit_charge_ = 0.0;
};

// ---------------------------------------------------------------------------
// Stage 2: rip-up and reroute

class ChainRouter {
 public:
  ChainRouter(const UndirectedGraph& source, const ChimeraGraph& hardware, Rng& rng)
      : source_(source),
        hw_(hardware),
        rng_(rng),
        chains_(source.num_vertices()),
        usage_(hardware.num_qubits(), 0),
        history_(hardware.num_qubits(), 0.0) {}

  const std::vector<std::vector<Vertex>>& chains() const { return chains_; }
  const std::vector<Vertex>& chain(Vertex v) const { return chains_[v]; }

  void rip_up(Vertex v) {
    for (auto q : chains_[v]) --usage_[q];
    chains_[v].clear();
  }

  void place(Vertex v, std::vector<Vertex> chain) {
    std::sort(chain.begin(), chain.end());
    for (auto q : chain) ++usage_[q];
    chains_[v] = std::move(chain);
  }

  /// Qubits that stay contested get dearer for everyone.
  void bump_history() {
    for (std::size_t q = 0; q < usage_.size(); ++q) {
      if (usage_[q] > 1) history_[q] += kHistoryStep * static_cast<double>(usage_[q] - 1);
    }
  }

  /// Total excess usage over all qubits; zero means no overlap.
  long overlap() const {
    long excess = 0;
    for (int u : usage_) {
      if (u > 1) excess += u - 1;
    }
    return excess;
  }

  bool overused(Vertex v) const {
    return std::any_of(chains_[v].begin(), chains_[v].end(), [&](Vertex q) { return usage_[q] > 1; });
  }

  /// Rebuilds v (currently ripped up) around the root minimizing the summed
  /// weighted distances to its placed neighbors, then joins the neighbor
  /// chains one by one, nearest first, each by a shortest path from the
  /// chain grown so far. With `exclusive`, qubits of other chains are
  /// forbidden and routing may fail.
  bool route(Vertex v, bool exclusive) {
    std::vector<Vertex> placed;
    for (auto u : source_.neighbors(v)) {
      if (!chains_[u].empty()) placed.push_back(u);
    }
    const std::size_t nq = hw_.num_qubits();
    weights_.assign(nq, kInf);
    for (std::size_t q = 0; q < nq; ++q) {
      if (!hw_.is_usable(static_cast<Vertex>(q))) continue;
      if (exclusive && usage_[q] > 0) continue;
      weights_[q] = (1.0 + history_[q]) * std::pow(kOverlapBase, usage_[q]);
    }

    if (placed.empty()) {
      std::optional<Vertex> best;
      std::size_t ties = 0;
      for (std::size_t q = 0; q < nq; ++q) {
        if (weights_[q] == kInf) continue;
        if (!best || weights_[q] < weights_[*best]) {
          best = static_cast<Vertex>(q);
          ties = 1;
        } else if (weights_[q] == weights_[*best] && rng_.below(++ties) == 0) {
          best = static_cast<Vertex>(q);
        }
      }
      if (!best) return false;
      place(v, {*best});
      return true;
    }

    dist_.resize(placed.size());
    parent_.resize(placed.size());
    for (std::size_t k = 0; k < placed.size(); ++k) {
      shortest_paths(chains_[placed[k]], {}, dist_[k], parent_[k]);
    }

    // dist counts every qubit after the source chain, the endpoint included,
    // so the root's own weight is charged once per neighbor; keep one.
    double best_cost = kInf;
    Vertex root = 0;
    std::size_t ties = 0;
    for (std::size_t q = 0; q < nq; ++q) {
      if (weights_[q] == kInf) continue;
      double cost = 0.0;
      for (std::size_t k = 0; k < placed.size() && cost < kInf; ++k) {
        cost += dist_[k][q] == 0.0 ? weights_[q] : dist_[k][q];
      }
      if (cost >= kInf) continue;
      cost -= static_cast<double>(placed.size() - 1) * weights_[q];
      if (cost < best_cost * (1 - 1e-12)) {
        best_cost = cost;
        root = static_cast<Vertex>(q);
        ties = 1;
      } else if (cost <= best_cost * (1 + 1e-12) && rng_.below(++ties) == 0) {
        root = static_cast<Vertex>(q);
      }
    }
    if (best_cost >= kInf) return false;

    std::vector<std::size_t> by_distance(placed.size());
    for (std::size_t k = 0; k < placed.size(); ++k) by_distance[k] = k;
    std::sort(by_distance.begin(), by_distance.end(),
              [&](std::size_t a, std::size_t b) { return dist_[a][root] < dist_[b][root]; });
    in_chain_.assign(nq, 0);
    std::vector<Vertex> chain{root};
    in_chain_[root] = 1;
    for (std::size_t idx = 0; idx < by_distance.size(); ++idx) {
      const std::size_t k = by_distance[idx];
      if (idx == 0) {
        // The nearest neighbor's search tree already leads back to the root.
        for (Vertex q = root; dist_[k][q] != 0.0;) {
          q = parent_[k][q];
          if (dist_[k][q] != 0.0 && !in_chain_[q]) {
            in_chain_[q] = 1;
            chain.push_back(q);
          }
        }
      } else if (!touches_chain(chains_[placed[k]])) {
        if (!extend_to(chain, chains_[placed[k]])) return false;
      }
    }
    place(v, std::move(chain));
    return true;
  }

  /// Drops qubits needed neither for connectivity nor for adjacency.
  void trim(Vertex v) {
    const auto& hw = hw_.graph();
    bool changed = true;
    while (changed && chains_[v].size() > 1) {
      changed = false;
      for (std::size_t idx = 0; idx < chains_[v].size() && chains_[v].size() > 1; ++idx) {
        const Vertex q = chains_[v][idx];
        std::vector<Vertex> rest = chains_[v];
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(idx));
        if (!induces_connected_subgraph(hw, rest)) continue;
        const auto& nbrs = source_.neighbors(v);
        if (!std::all_of(nbrs.begin(), nbrs.end(), [&](Vertex u) { return touches(rest, chains_[u]); })) continue;
        --usage_[q];
        chains_[v] = std::move(rest);
        changed = true;
        break;
      }
    }
  }

 private:
  static constexpr double kOverlapBase = 6.0;
  static constexpr double kHistoryStep = 0.3;

  bool touches(const std::vector<Vertex>& a, const std::vector<Vertex>& b) const {
    const auto& hw = hw_.graph();
    for (auto q : a) {
      for (auto r : hw.neighbors(q)) {
        if (std::binary_search(b.begin(), b.end(), r)) return true;
      }
    }
    return false;
  }

  bool touches_chain(const std::vector<Vertex>& target) const {
    const auto& hw = hw_.graph();
    for (auto q : target) {
      if (in_chain_[q]) return true;
      for (auto r : hw.neighbors(q)) {
        if (in_chain_[r]) return true;
      }
    }
    return false;
  }

  /// Adds the cheapest path from the chain to a qubit next to `target`.
  bool extend_to(std::vector<Vertex>& chain, const std::vector<Vertex>& target) {
    const auto& hw = hw_.graph();
    goal_.assign(hw_.num_qubits(), 0);
    for (auto t : target) goal_[t] = 2;
    for (auto t : target) {
      for (auto r : hw.neighbors(t)) {
        if (goal_[r] == 0) goal_[r] = 1;
      }
    }
    const Vertex end = shortest_paths(chain, goal_, scratch_dist_, scratch_parent_);
    if (end == kNoQubit) return false;
    for (Vertex q = end; scratch_dist_[q] != 0.0; q = scratch_parent_[q]) {
      in_chain_[q] = 1;
      chain.push_back(q);
    }
    return true;
  }

  static constexpr Vertex kNoQubit = std::numeric_limits<Vertex>::max();

  /// Multi-source Dijkstra with node weights. With a goal mask, qubits
  /// marked 2 are impassable and the search stops at the first qubit
  /// marked 1, which is returned.
  Vertex shortest_paths(const std::vector<Vertex>& sources, const std::vector<char>& goal,
                        std::vector<double>& dist, std::vector<Vertex>& parent) {
    const std::size_t nq = hw_.num_qubits();
    dist.assign(nq, kInf);
    parent.assign(nq, 0);
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (auto s : sources) {
      dist[s] = 0.0;
      heap.push({0.0, s});
    }
    const auto& hw = hw_.graph();
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (d > dist[x]) continue;
      if (!goal.empty() && goal[x] == 1 && d > 0.0) return x;
      for (auto y : hw.neighbors(x)) {
        const double w = weights_[y];
        if (w == kInf || (!goal.empty() && goal[y] == 2)) continue;
        const double nd = d + w;
        if (nd < dist[y]) {
          dist[y] = nd;
          parent[y] = x;
          heap.push({nd, y});
        }
      }
    }
    return kNoQubit;
  }

  const UndirectedGraph& source_;
  const ChimeraGraph& hw_;
  Rng& rng_;
  std::vector<std::vector<Vertex>> chains_;
  std::vector<int> usage_;
  std::vector<double> history_;
  std::vector<double> weights_;
  std::vector<std::vector<double>> dist_;
  std::vector<std::vector<Vertex>> parent_;
  std::vector<char> in_chain_;
  std::vector<char> goal_;
  std::vector<double> scratch_dist_;
  std::vector<Vertex> scratch_parent_;
};

/// Rip-up-and-reroute passes until no qubit is shared. After each pass a
/// few contested vertices are torn out together with their neighbors and
/// rebuilt, which frees chains that are boxed in.
bool negotiate(ChainRouter& router, const UndirectedGraph& source, Rng& rng, std::vector<Vertex>& order,
               const FindEmbeddingOptions& options) {
  const std::size_t n = source.num_vertices();
  long best = std::numeric_limits<long>::max();
  std::size_t stall = 0;
  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    router.bump_history();
    rng.shuffle(order);
    for (auto v : order) {
      router.rip_up(v);
      if (!router.route(v, false)) return false;
    }
    for (int kick = 0; kick < 3 && router.overlap() > 0; ++kick) {
      std::vector<Vertex> hot;
      for (std::size_t v = 0; v < n; ++v) {
        if (router.overused(static_cast<Vertex>(v))) hot.push_back(static_cast<Vertex>(v));
      }
      const Vertex pick = hot[rng.below(hot.size())];
      std::vector<Vertex> group{pick};
      for (auto u : source.neighbors(pick)) group.push_back(u);
      for (auto u : group) router.rip_up(u);
      rng.shuffle(group);
      for (auto u : group) {
        if (!router.route(u, false)) return false;
      }
    }
    const long now = router.overlap();
    if (now == 0) return true;
    if (now < best) {
      best = now;
      stall = 0;
    } else if (++stall >= options.patience) {
      break;
    }
  }
  return false;
}

}  // namespace

std::optional<Embedding> find_embedding(const UndirectedGraph& source, const ChimeraGraph& hardware,
                                        std::uint64_t seed, const FindEmbeddingOptions& options) {
  const std::size_t n = source.num_vertices();
  if (n == 0) throw InputError("source graph must be non-empty");
  if (n > hardware.num_usable()) return std::nullopt;
  Rng rng(seed);
  std::vector<Vertex> order(n);
  for (std::size_t v = 0; v < n; ++v) order[v] = static_cast<Vertex>(v);

  for (std::size_t attempt = 0; attempt < options.tries; ++attempt) {
    CrossAnnealer annealer(source, hardware, rng);
    const bool seeded = annealer.run(options.anneal_steps_per_vertex * n, options.qubit_charge);
    ChainRouter router(source, hardware, rng);
    auto chains = annealer.chains();
    for (std::size_t v = 0; v < n; ++v) router.place(static_cast<Vertex>(v), std::move(chains[v]));
    if (!seeded && !negotiate(router, source, rng, order, options)) continue;

    // Shorten: a chain is replaced only by a strictly smaller one that
    // avoids every other chain.
    for (auto v : order) router.trim(v);
    for (std::size_t round = 0; round < options.refine_rounds; ++round) {
      rng.shuffle(order);
      for (auto v : order) {
        auto old = router.chain(v);
        router.rip_up(v);
        if (!router.route(v, true) || router.chain(v).size() >= old.size()) {
          router.rip_up(v);
          router.place(v, std::move(old));
        }
        router.trim(v);
      }
    }
    Embedding e{router.chains()};
    if (validate_embedding(source, hardware, e)) return e;
  }
  return std::nullopt;
}

}  // namespace planqubo
