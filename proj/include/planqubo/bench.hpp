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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "planqubo/annealer.hpp"
#include "planqubo/embedding.hpp"
#include "planqubo/instance_gen.hpp"
#include "planqubo/mappings.hpp"

namespace planqubo {

struct Architecture {
  std::size_t M = 8;
  std::size_t L = 4;
  std::vector<Vertex> broken;

  ChimeraGraph graph() const { return ChimeraGraph(M, L, broken); }
};

struct SweepSpec {
  Family family = Family::Scheduling;
  std::vector<std::size_t> sizes;
  std::vector<MappingKind> mappings{MappingKind::Direct};
  std::vector<double> j_int_grid{1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6};
  std::size_t instances = 25;
  AnnealProtocol protocol;
  Architecture architecture;
  std::size_t embed_runs = 11;
  FindEmbeddingOptions embed_options;
  std::uint64_t seed = 1;
  std::string output_dir;  // empty: nothing written
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Desk-scale defaults: 2000 anneals x 4 gauges, 25 instances, sizes
  /// 8..12 (scheduling) or 3..6 (navigation).
  static SweepSpec desk(Family family);

  /// Mapping and J_int grids must be nonempty; sizes may be empty.
  void check() const;
  std::string to_json() const;
  /// Missing keys keep their desk defaults for the given family.
  static SweepSpec from_json(const std::string& text);
};

/// One (instance, mapping, J_int) solve.
struct InstanceResult {
  std::size_t size = 0;
  std::size_t instance = 0;
  std::uint64_t instance_seed = 0;
  MappingKind mapping = MappingKind::Direct;
  double j_int = 0.0;
  std::size_t qubo_vars = 0;
  std::size_t couplings = 0;
  std::size_t embed_successes = 0;  // out of embed_runs
  bool embedded = false;
  EmbeddingMetrics embedding;
  RunStats stats;
  std::size_t invalid_hits = 0;  // hits whose decoded plan fails validate_plan
};

std::string results_csv_header();
std::string to_csv_row(const InstanceResult& row);
void write_results_csv(const std::vector<InstanceResult>& rows, std::ostream& out);

struct SummaryRow {
  std::size_t size = 0;
  MappingKind mapping = MappingKind::Direct;
  double j_int = 0.0;
  std::size_t instances = 0;       // embedded instances in the group
  std::size_t embed_failures = 0;  // instances that could not be embedded
  double fraction_solved = 0.0;
  double median_tts_us = 0.0;
  double p35_tts_us = 0.0;
  std::optional<double> p65_tts_us;  // nullopt: fewer than 65% solved
  double median_r = 0.0;
  double median_qubo_vars = 0.0;
  double median_couplings = 0.0;
  double median_embedding_size = 0.0;
  double median_avg_component = 0.0;
  double median_p90_component = 0.0;
  double median_max_component = 0.0;
};

struct SummaryOptions {
  bool corrected = false;  // use error-corrected TTS
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<SummaryRow> omitted;  // groups with at least half censored
  std::size_t malformed = 0;        // unparseable CSV rows skipped
};

/// Groups by (size, mapping, J_int). Censored instances count as infinite
/// TTS; groups where at least half are censored are omitted.
Summary summarize(const std::vector<InstanceResult>& rows, const SummaryOptions& options = {});
/// Reads a results CSV; malformed rows are counted and skipped.
Summary summarize_csv(std::istream& in, const SummaryOptions& options = {});
std::vector<InstanceResult> read_results_csv(std::istream& in, std::size_t* malformed = nullptr);

std::string summary_csv_header();
void write_summary_csv(const Summary& summary, std::ostream& out);

struct BestJint {
  std::size_t size = 0;
  MappingKind mapping = MappingKind::Direct;
  std::optional<double> j_int;  // nullopt: every J_int censored
  double median_tts_us = 0.0;
  double median_r = 0.0;
  std::optional<double> j_int_by_r;  // maximal median success rate instead
};

/// Minimal median TTS per (size, mapping); ties go to the smaller J_int.
std::vector<BestJint> best_jint(const Summary& summary);

struct MappingComparison {
  std::vector<InstanceResult> rows;
  Summary summary;
  std::vector<BestJint> best;
};

/// Generate, compile, embed (best of embed_runs), sweep J_int and solve.
/// Writes results.csv, summary.csv, best_jint.csv and manifest.json to
/// output_dir when set.
MappingComparison run_mapping_comparison(const SweepSpec& spec);

struct JintTable {
  std::vector<std::size_t> sizes;  // columns
  std::vector<double> grid;        // rows
  /// cells[row][col]; nullopt when the group was omitted as censored.
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<std::optional<std::size_t>> best_row;  // per column
  std::vector<bool> censored;                        // every cell empty

  std::string to_csv() const;
};

JintTable jint_table(const Summary& summary, MappingKind mapping, const std::vector<std::size_t>& sizes,
                     const std::vector<double>& grid);

/// Median TTS by (size, J_int) for the first mapping of the spec. Writes
/// jint_table.csv alongside the comparison outputs when output_dir is set.
JintTable run_jint_sweep(const SweepSpec& spec, MappingComparison* details = nullptr);

struct ArchitectureRow {
  std::size_t k = 0;
  std::size_t M = 0;
  std::size_t L = 0;
  std::size_t successes = 0;
  std::size_t runs = 0;
  std::size_t min_size = 0;  // 0 when no run succeeded
};

struct ArchitectureStudyOptions {
  std::size_t runs = 11;
  std::uint64_t seed = 1;
  FindEmbeddingOptions embed_options;
  std::size_t threads = 0;
};

/// Embeds IC_{k,k} for k = 1..max_k into every (M, L) pair. When k*k
/// exceeds the usable qubits no run is attempted.
std::vector<ArchitectureRow> run_architecture_study(std::size_t max_k, const std::vector<std::size_t>& M_range,
                                                    const std::vector<std::size_t>& L_range,
                                                    const ArchitectureStudyOptions& options = {});

/// Largest k such that every k' <= k succeeded in all runs at (M, L).
std::size_t largest_reliable_k(const std::vector<ArchitectureRow>& rows, std::size_t M, std::size_t L);

std::string architecture_csv(const std::vector<ArchitectureRow>& rows);

struct PairedResult {
  std::size_t size = 0;
  std::size_t instance = 0;
  MappingKind mapping = MappingKind::Direct;
  double j_int = 0.0;
  double r_raw = 0.0;
  double r_corrected = 0.0;
  TtsResult tts_raw;
  TtsResult tts_corrected;
};

struct PairedStats {
  std::size_t pairs = 0;
  std::size_t improved = 0;  // corrected hits > raw hits
  std::size_t equal = 0;
  std::size_t worse = 0;
  double median_r_raw = 0.0;
  double median_r_corrected = 0.0;
  /// Median of tts_raw / tts_corrected over pairs uncensored on both sides.
  std::optional<double> median_speedup;
  std::size_t rescued = 0;  // censored raw, solved after correction
  double sign_test_p = 1.0;  // two-sided, ties dropped
};

struct ErrorCorrectionComparison {
  std::vector<PairedResult> pairs;
  PairedStats stats;
  MappingComparison details;
};

PairedStats paired_statistics(const std::vector<PairedResult>& pairs);

/// Runs the comparison pipeline once and pairs raw and majority-vote
/// results per solve. Writes error_correction.csv when output_dir is set.
ErrorCorrectionComparison run_error_correction_comparison(const SweepSpec& spec);

}  // namespace planqubo
