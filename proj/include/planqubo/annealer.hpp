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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "planqubo/chimera.hpp"
#include "planqubo/embedding.hpp"
#include "planqubo/pseudo_boolean.hpp"

namespace planqubo {

struct GroundStates {
  double energy = 0.0;
  std::uint64_t count = 0;          // number of minimizers
  std::vector<Assignment> states;   // first `limit` minimizers in enumeration order
};

/// Exact minimum by enumeration (Gray code for degree <= 2). Capability
/// error beyond 26 variables. Energies within `tol` of the minimum tie.
GroundStates brute_force_ground(const PseudoBooleanPolynomial& poly, std::size_t limit = 1 << 16,
                                double tol = 1e-9);

struct AnnealSchedule {
  double beta_start = 0.1;
  double beta_end = 10.0;
  std::size_t sweeps = 100;

  /// Geometric interpolation; sweeps == 1 uses beta_end.
  std::vector<double> betas() const;
  void check() const;
};

/// Metropolis single-spin-flip annealer over the active qubits of a
/// hardware model. Inactive qubits are reported as +1 and never touched.
class SimulatedAnnealer {
 public:
  SimulatedAnnealer(const HardwareIsing& model, AnnealSchedule schedule);

  /// One anneal from a uniformly random start.
  void sample(Rng& rng, std::vector<std::int8_t>& spins);

 private:
  std::size_t num_qubits_;
  std::vector<Vertex> active_;
  std::vector<double> h_;
  std::vector<std::size_t> offsets_;  // CSR over all qubits
  std::vector<Vertex> nbr_;
  std::vector<double> weight_;
  std::vector<double> betas_;
  std::vector<double> field_;
};

struct AnnealProtocol {
  std::size_t anneals_per_gauge = 45000;
  std::size_t num_gauges = 10;
  double anneal_time_us = 20.0;
  AnnealSchedule schedule;
  /// Rescale the embedded model into the machine's coefficient range.
  bool rescale = false;
  /// 0 disables; otherwise coefficients snap to this many levels.
  std::size_t quantization_levels = 0;
  std::uint64_t seed = 1;

  void check() const;
};

struct TtsResult {
  bool censored = false;
  double k = 0.0;        // expected number of anneals
  double tts_us = 0.0;   // anneal_time_us * k
};

/// k = ln(1 - target) / ln(1 - r), at least one anneal; r == 0 is censored.
TtsResult expected_tts(double r, double anneal_time_us, double target = 0.99);

struct RunStats {
  std::uint64_t num_samples = 0;
  std::uint64_t hits_raw = 0;
  std::uint64_t hits_corrected = 0;
  double r_raw = 0.0;
  double r_corrected = 0.0;
  TtsResult tts_raw;
  TtsResult tts_corrected;

  bool censored() const { return hits_raw == 0; }
  std::string to_json() const;
};

/// Called for every corrected hit with the decoded logical assignment and
/// whether it was also a raw hit (all components uniform).
using HitCallback = std::function<void(const Assignment&, bool raw)>;

/// Samples the embedded model under `num_gauges` random gauges and counts
/// anneals whose decoded logical assignment reaches `ground_energy` of the
/// logical QUBO.
RunStats run_protocol(const Qubo& logical, const Embedding& embedding, const ChimeraGraph& hardware,
                      double ground_energy, double j_int, const AnnealProtocol& protocol,
                      const HitCallback& on_hit = {});

/// Draws one hardware spin configuration.
using Sampler = std::function<void(Rng&, std::vector<std::int8_t>&)>;
/// Builds a sampler for one gauged model.
using SamplerFactory = std::function<Sampler(const HardwareIsing&)>;

/// The embedded model handed to the sampler: logical Ising scaled so that
/// max |J| = 1 (max |h| = 1 when there are no couplings), embedded with
/// ferromagnetic strength j_int, then optionally rescaled and quantized.
HardwareIsing prepare_hardware_model(const Qubo& logical, const Embedding& embedding, const ChimeraGraph& hardware,
                                     double j_int, const AnnealProtocol& protocol);

/// Gauge loop and hit bookkeeping with a caller-supplied sampler (tests use
/// an exact one).
RunStats run_protocol_with(const Qubo& logical, const Embedding& embedding, const HardwareIsing& embedded,
                           double ground_energy, const AnnealProtocol& protocol, const SamplerFactory& factory,
                           const HitCallback& on_hit = {});

struct ScalingFit {
  double alpha = 0.0;      // d ln(TTS) / d n
  double intercept = 0.0;
  std::vector<double> residuals;
  std::size_t excluded = 0;  // censored points dropped
};

/// Least squares ln(TTS) = alpha * n + c over uncensored points.
ScalingFit fit_scaling(const std::vector<double>& sizes, const std::vector<double>& tts,
                       const std::vector<bool>& censored = {});

}  // namespace planqubo
