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

#include "planqubo/annealer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>

#include "json.hpp"
#include "planqubo/errors.hpp"

namespace planqubo {

GroundStates brute_force_ground(const PseudoBooleanPolynomial& poly, std::size_t limit, double tol) {
  const std::size_t n = poly.num_vars();
  if (n > 26) throw CapabilityError("exhaustive search limited to 26 variables");
  GroundStates out;
  out.energy = std::numeric_limits<double>::infinity();
  Assignment x(n, 0);

  auto consider = [&](double e) {
    if (e < out.energy - tol) {
      out.energy = e;
      out.count = 0;
      out.states.clear();
    }
    if (e <= out.energy + tol) {
      ++out.count;
      if (out.states.size() < limit) out.states.push_back(x);
    }
  };

  if (poly.degree() > 2) {
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
      consider(poly.evaluate(x));
    }
    return out;
  }

  // Gray code walk: flipping bit i changes the energy by +-g_i where
  // g_i = a_i + sum_j c_ij x_j.
  std::vector<double> lin(n, 0.0);
  std::vector<std::vector<std::pair<VarId, double>>> adj(n);
  for (const auto& [m, c] : poly.terms()) {
    if (m.size() == 1) lin[m[0]] += c;
    if (m.size() == 2) {
      adj[m[0]].push_back({m[1], c});
      adj[m[1]].push_back({m[0], c});
    }
  }
  std::vector<double> g = lin;
  double e = poly.constant_term();
  // Incremental energies drift; candidates near the best are re-evaluated.
  auto check = [&](double approx) {
    if (approx <= out.energy + 1e-6 || out.count == 0) consider(poly.evaluate(x));
  };
  check(e);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto i = static_cast<std::size_t>(std::countr_zero(step));
    const double sign = x[i] ? -1.0 : 1.0;
    e += sign * g[i];
    x[i] ^= 1;
    for (const auto& [j, c] : adj[i]) g[j] += sign * c;
    check(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> AnnealSchedule::betas() const {
  check();
  std::vector<double> b(sweeps);
  if (sweeps == 1) {
    b[0] = beta_end;
    return b;
  }
  const double ratio = std::pow(beta_end / beta_start, 1.0 / static_cast<double>(sweeps - 1));
  double beta = beta_start;
  for (std::size_t s = 0; s < sweeps; ++s) {
    b[s] = beta;
    beta *= ratio;
  }
  b.back() = beta_end;
  return b;
}

void AnnealSchedule::check() const {
  if (sweeps == 0) throw InputError("annealing needs at least one sweep");
  if (!(beta_start > 0.0) || !(beta_end >= beta_start)) throw InputError("beta schedule must be positive and non-decreasing");
}

SimulatedAnnealer::SimulatedAnnealer(const HardwareIsing& model, AnnealSchedule schedule)
    : num_qubits_(model.num_qubits), h_(model.h), betas_(schedule.betas()) {
  for (std::size_t q = 0; q < num_qubits_; ++q) {
    if (model.active[q]) active_.push_back(static_cast<Vertex>(q));
  }
  std::vector<std::size_t> degree(num_qubits_, 0);
  for (const auto& c : model.couplings) {
    ++degree[c.u];
    ++degree[c.v];
  }
  offsets_.assign(num_qubits_ + 1, 0);
  for (std::size_t q = 0; q < num_qubits_; ++q) offsets_[q + 1] = offsets_[q] + degree[q];
  nbr_.resize(offsets_.back());
  weight_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& c : model.couplings) {
    nbr_[fill[c.u]] = c.v;
    weight_[fill[c.u]++] = c.J;
    nbr_[fill[c.v]] = c.u;
    weight_[fill[c.v]++] = c.J;
  }
  field_.assign(num_qubits_, 0.0);
}

void SimulatedAnnealer::sample(Rng& rng, std::vector<std::int8_t>& spins) {
  spins.assign(num_qubits_, 1);
  for (auto q : active_) spins[q] = rng.coin() ? 1 : -1;
  // field_q = -h_q + sum_j J_qj s_j; the energy change of flipping q is -2 s_q field_q.
  for (auto q : active_) {
    double f = -h_[q];
    for (std::size_t e = offsets_[q]; e < offsets_[q + 1]; ++e) f += weight_[e] * spins[nbr_[e]];
    field_[q] = f;
  }
  for (double beta : betas_) {
    for (auto q : active_) {
      const double delta = -2.0 * spins[q] * field_[q];
      if (delta > 0.0 && rng.uniform() >= std::exp(-beta * delta)) continue;
      spins[q] = static_cast<std::int8_t>(-spins[q]);
      const double change = 2.0 * spins[q];
      for (std::size_t e = offsets_[q]; e < offsets_[q + 1]; ++e) field_[nbr_[e]] += weight_[e] * change;
    }
  }
}

// ---------------------------------------------------------------------------

void AnnealProtocol::check() const {
  if (anneals_per_gauge == 0 || num_gauges == 0) throw InputError("protocol counts must be positive");
  if (!(anneal_time_us > 0.0)) throw InputError("anneal time must be positive");
  if (quantization_levels == 1) throw InputError("quantization needs at least two levels");
  schedule.check();
}

TtsResult expected_tts(double r, double anneal_time_us, double target) {
  if (!(target > 0.0 && target < 1.0)) throw InputError("target success probability must lie in (0, 1)");
  if (!(r >= 0.0 && r <= 1.0)) throw InputError("success rate must lie in [0, 1]");
  TtsResult out;
  if (r == 0.0) {
    out.censored = true;
    out.k = std::numeric_limits<double>::infinity();
    out.tts_us = std::numeric_limits<double>::infinity();
    return out;
  }
  out.k = r >= 1.0 ? 1.0 : std::max(1.0, std::log(1.0 - target) / std::log(1.0 - r));
  out.tts_us = anneal_time_us * out.k;
  return out;
}

std::string RunStats::to_json() const {
  auto tts = [](const TtsResult& t) {
    nlohmann::ordered_json j;
    j["censored"] = t.censored;
    j["k"] = t.censored ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(t.k);
    j["tts_us"] = t.censored ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(t.tts_us);
    return j;
  };
  nlohmann::ordered_json j;
  j["num_samples"] = num_samples;
  j["hits_raw"] = hits_raw;
  j["hits_corrected"] = hits_corrected;
  j["r_raw"] = r_raw;
  j["r_corrected"] = r_corrected;
  j["censored"] = censored();
  j["raw"] = tts(tts_raw);
  j["corrected"] = tts(tts_corrected);
  return j.dump(2);
}

HardwareIsing prepare_hardware_model(const Qubo& logical, const Embedding& embedding, const ChimeraGraph& hardware,
                                     double j_int, const AnnealProtocol& protocol) {
  IsingModel ising = qubo_to_ising(logical);
  // j_int is measured in units of the largest logical coupling.
  double scale = 0.0;
  for (const auto& [e, v] : ising.J) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    for (double x : ising.h) scale = std::max(scale, std::abs(x));
  }
  if (scale > 0.0) {
    for (auto& x : ising.h) x /= scale;
    for (auto& [e, v] : ising.J) v /= scale;
    ising.offset /= scale;
  }
  HardwareIsing hw = embed_ising(ising, embedding, hardware, j_int);
  if (protocol.rescale) rescale_to_hardware_range(hw);
  if (protocol.quantization_levels > 0) quantize(hw, protocol.quantization_levels);
  return hw;
}

RunStats run_protocol_with(const Qubo& logical, const Embedding& embedding, const HardwareIsing& embedded,
                           double ground_energy, const AnnealProtocol& protocol, const SamplerFactory& factory,
                           const HitCallback& on_hit) {
  protocol.check();
  RunStats stats;
  std::vector<std::int8_t> spins;
  Assignment bits(embedded.num_qubits);
  for (std::size_t gi = 0; gi < protocol.num_gauges; ++gi) {
    Rng gauge_rng(mix_seed(protocol.seed, 2 * gi));
    const GaugeVector gauge = random_gauge(embedded.num_qubits, gauge_rng);
    Sampler sampler = factory(apply_gauge(embedded, gauge));
    Rng rng(mix_seed(protocol.seed, 2 * gi + 1));
    for (std::size_t a = 0; a < protocol.anneals_per_gauge; ++a) {
      sampler(rng, spins);
      for (std::size_t q = 0; q < bits.size(); ++q) bits[q] = spins[q] * gauge[q] < 0 ? 1 : 0;
      ++stats.num_samples;
      const auto uniform = uniform_decode(embedding, bits);
      const Assignment logical_bits = uniform ? *uniform : majority_decode(embedding, bits);
      if (logical.evaluate(logical_bits) > ground_energy + 1e-6) continue;
      ++stats.hits_corrected;
      if (uniform) ++stats.hits_raw;
      if (on_hit) on_hit(logical_bits, uniform.has_value());
    }
  }
  const auto total = static_cast<double>(stats.num_samples);
  stats.r_raw = static_cast<double>(stats.hits_raw) / total;
  stats.r_corrected = static_cast<double>(stats.hits_corrected) / total;
  stats.tts_raw = expected_tts(stats.r_raw, protocol.anneal_time_us);
  stats.tts_corrected = expected_tts(stats.r_corrected, protocol.anneal_time_us);
  return stats;
}

RunStats run_protocol(const Qubo& logical, const Embedding& embedding, const ChimeraGraph& hardware,
                      double ground_energy, double j_int, const AnnealProtocol& protocol, const HitCallback& on_hit) {
  protocol.check();
  const HardwareIsing hw = prepare_hardware_model(logical, embedding, hardware, j_int, protocol);
  const AnnealSchedule schedule = protocol.schedule;
  SamplerFactory factory = [&schedule](const HardwareIsing& model) -> Sampler {
    auto annealer = std::make_shared<SimulatedAnnealer>(model, schedule);
    return [annealer](Rng& rng, std::vector<std::int8_t>& spins) { annealer->sample(rng, spins); };
  };
  return run_protocol_with(logical, embedding, hw, ground_energy, protocol, factory, on_hit);
}

ScalingFit fit_scaling(const std::vector<double>& sizes, const std::vector<double>& tts,
                       const std::vector<bool>& censored) {
  if (sizes.size() != tts.size() || (!censored.empty() && censored.size() != sizes.size())) {
    throw InputError("size, TTS and censoring vectors must have equal length");
  }
  ScalingFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const bool drop = (!censored.empty() && censored[i]) || !(tts[i] > 0.0) || !std::isfinite(tts[i]);
    if (drop) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(sizes[i]);
    ys.push_back(std::log(tts[i]));
  }
  if (xs.size() < 2) throw InputError("scaling fit needs at least two uncensored points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InputError("scaling fit needs at least two distinct sizes");
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) fit.residuals.push_back(ys[i] - (fit.alpha * xs[i] + fit.intercept));
  return fit;
}

}  // namespace planqubo
