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

#include "planqubo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "planqubo/errors.hpp"

namespace planqubo {

namespace {

using json = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// Runs f(0..n-1) on a small pool; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

UndirectedGraph interaction_graph(const Qubo& qubo) {
  UndirectedGraph g(qubo.num_vars());
  for (const auto& [a, b] : qubo.interactions()) g.add_edge(a, b);
  return g;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw IoError("cannot write " + name + " in " + dir);
  return out;
}

template <class T>
void read_key(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Spec

SweepSpec SweepSpec::desk(Family family) {
  SweepSpec s;
  s.family = family;
  if (family == Family::Scheduling) {
    s.sizes = {8, 9, 10, 11, 12};
  } else {
    s.sizes = {3, 4, 5, 6};
  }
  s.mappings = {MappingKind::TimeSlice, MappingKind::Cnf, MappingKind::Direct};
  s.protocol.anneals_per_gauge = 2000;
  s.protocol.num_gauges = 4;
  return s;
}

void SweepSpec::check() const {
  if (mappings.empty()) throw InputError("sweep needs at least one mapping");
  if (j_int_grid.empty()) throw InputError("sweep needs at least one J_int value");
  for (double j : j_int_grid) {
    if (!(j > 0.0) || !std::isfinite(j)) throw InputError("J_int values must be positive");
  }
  if (instances == 0) throw InputError("sweep needs at least one instance per size");
  if (embed_runs == 0) throw InputError("embed_runs must be positive");
  if (architecture.M == 0 || architecture.L == 0) throw InputError("architecture needs M, L > 0");
  protocol.check();
}

std::string SweepSpec::to_json() const {
  json j;
  j["family"] = family_name(family);
  j["sizes"] = sizes;
  json maps = json::array();
  for (auto m : mappings) maps.push_back(mapping_name(m));
  j["mappings"] = maps;
  j["j_int_grid"] = j_int_grid;
  j["instances"] = instances;
  j["protocol"] = {{"anneals_per_gauge", protocol.anneals_per_gauge},
                   {"num_gauges", protocol.num_gauges},
                   {"anneal_time_us", protocol.anneal_time_us},
                   {"beta_start", protocol.schedule.beta_start},
                   {"beta_end", protocol.schedule.beta_end},
                   {"sweeps", protocol.schedule.sweeps},
                   {"rescale", protocol.rescale},
                   {"quantization_levels", protocol.quantization_levels}};
  j["architecture"] = {{"M", architecture.M}, {"L", architecture.L}, {"broken", architecture.broken}};
  j["embed_runs"] = embed_runs;
  j["embed"] = {{"tries", embed_options.tries},
                {"anneal_steps_per_vertex", embed_options.anneal_steps_per_vertex},
                {"qubit_charge", embed_options.qubit_charge},
                {"max_rounds", embed_options.max_rounds},
                {"patience", embed_options.patience},
                {"refine_rounds", embed_options.refine_rounds}};
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  return j.dump(2);
}

SweepSpec SweepSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("sweep spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("sweep spec must be a JSON object");
  std::string fam = "scheduling";
  read_key(j, "family", fam);
  SweepSpec s = desk(parse_family(fam));
  read_key(j, "sizes", s.sizes);
  if (j.contains("mappings")) {
    std::vector<std::string> names;
    read_key(j, "mappings", names);
    s.mappings.clear();
    for (const auto& n : names) s.mappings.push_back(parse_mapping(n));
  }
  read_key(j, "j_int_grid", s.j_int_grid);
  read_key(j, "instances", s.instances);
  if (j.contains("protocol")) {
    const json& p = j["protocol"];
    read_key(p, "anneals_per_gauge", s.protocol.anneals_per_gauge);
    read_key(p, "num_gauges", s.protocol.num_gauges);
    read_key(p, "anneal_time_us", s.protocol.anneal_time_us);
    read_key(p, "beta_start", s.protocol.schedule.beta_start);
    read_key(p, "beta_end", s.protocol.schedule.beta_end);
    read_key(p, "sweeps", s.protocol.schedule.sweeps);
    read_key(p, "rescale", s.protocol.rescale);
    read_key(p, "quantization_levels", s.protocol.quantization_levels);
  }
  if (j.contains("architecture")) {
    const json& a = j["architecture"];
    read_key(a, "M", s.architecture.M);
    read_key(a, "L", s.architecture.L);
    read_key(a, "broken", s.architecture.broken);
  }
  read_key(j, "embed_runs", s.embed_runs);
  if (j.contains("embed")) {
    const json& e = j["embed"];
    read_key(e, "tries", s.embed_options.tries);
    read_key(e, "anneal_steps_per_vertex", s.embed_options.anneal_steps_per_vertex);
    read_key(e, "qubit_charge", s.embed_options.qubit_charge);
    read_key(e, "max_rounds", s.embed_options.max_rounds);
    read_key(e, "patience", s.embed_options.patience);
    read_key(e, "refine_rounds", s.embed_options.refine_rounds);
  }
  read_key(j, "seed", s.seed);
  read_key(j, "output_dir", s.output_dir);
  read_key(j, "threads", s.threads);
  s.check();
  return s;
}

// ---------------------------------------------------------------------------
// Per-instance CSV

std::string results_csv_header() {
  return "size,instance,instance_seed,mapping,j_int,qubo_vars,couplings,embed_successes,embedded,"
         "embedding_size,avg_component,median_component,p65_component,p90_component,max_component,"
         "samples,hits_raw,hits_corrected,r_raw,r_corrected,k_raw,k_corrected,tts_raw_us,tts_corrected_us,"
         "censored,invalid_hits";
}

std::string to_csv_row(const InstanceResult& r) {
  auto tts = [](const TtsResult& t, bool k) { return t.censored ? std::string() : num(k ? t.k : t.tts_us); };
  std::ostringstream o;
  o << r.size << ',' << r.instance << ',' << r.instance_seed << ',' << mapping_name(r.mapping) << ','
    << num(r.j_int) << ',' << r.qubo_vars << ',' << r.couplings << ',' << r.embed_successes << ','
    << (r.embedded ? 1 : 0) << ',' << r.embedding.total << ',' << num(r.embedding.average) << ','
    << num(r.embedding.median) << ',' << r.embedding.p65 << ',' << r.embedding.p90 << ',' << r.embedding.max << ','
    << r.stats.num_samples << ',' << r.stats.hits_raw << ',' << r.stats.hits_corrected << ','
    << num(r.stats.r_raw) << ',' << num(r.stats.r_corrected) << ',' << tts(r.stats.tts_raw, true) << ','
    << tts(r.stats.tts_corrected, true) << ',' << tts(r.stats.tts_raw, false) << ','
    << tts(r.stats.tts_corrected, false) << ',' << (r.stats.censored() ? 1 : 0) << ',' << r.invalid_hits;
  return o.str();
}

void write_results_csv(const std::vector<InstanceResult>& rows, std::ostream& out) {
  out << results_csv_header() << '\n';
  for (const auto& r : rows) out << to_csv_row(r) << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
bool parse_int(const std::string& s, T& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

bool parse_tts(const std::string& s, bool& censored, double& out) {
  censored = s.empty();
  return censored || (parse_real(s, out) && out >= 0.0);
}

std::optional<InstanceResult> parse_row(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 26) return std::nullopt;
  InstanceResult r;
  int embedded = 0, censored = 0;
  bool ok = parse_int(f[0], r.size) && parse_int(f[1], r.instance) && parse_int(f[2], r.instance_seed) &&
            parse_real(f[4], r.j_int) && parse_int(f[5], r.qubo_vars) && parse_int(f[6], r.couplings) &&
            parse_int(f[7], r.embed_successes) && parse_int(f[8], embedded) && parse_int(f[9], r.embedding.total) &&
            parse_real(f[10], r.embedding.average) && parse_real(f[11], r.embedding.median) &&
            parse_int(f[12], r.embedding.p65) && parse_int(f[13], r.embedding.p90) &&
            parse_int(f[14], r.embedding.max) && parse_int(f[15], r.stats.num_samples) &&
            parse_int(f[16], r.stats.hits_raw) && parse_int(f[17], r.stats.hits_corrected) &&
            parse_real(f[18], r.stats.r_raw) && parse_real(f[19], r.stats.r_corrected) &&
            parse_tts(f[20], r.stats.tts_raw.censored, r.stats.tts_raw.k) &&
            parse_tts(f[21], r.stats.tts_corrected.censored, r.stats.tts_corrected.k) &&
            parse_tts(f[22], r.stats.tts_raw.censored, r.stats.tts_raw.tts_us) &&
            parse_tts(f[23], r.stats.tts_corrected.censored, r.stats.tts_corrected.tts_us) &&
            parse_int(f[24], censored) && parse_int(f[25], r.invalid_hits);
  if (!ok || embedded > 1 || censored > 1) return std::nullopt;
  try {
    r.mapping = parse_mapping(f[3]);
  } catch (const InputError&) {
    return std::nullopt;
  }
  r.embedded = embedded == 1;
  if (r.stats.r_raw < 0 || r.stats.r_raw > 1 || r.stats.r_corrected < 0 || r.stats.r_corrected > 1) return std::nullopt;
  if ((censored == 1) != (r.stats.hits_raw == 0)) return std::nullopt;
  return r;
}

}  // namespace

std::vector<InstanceResult> read_results_csv(std::istream& in, std::size_t* malformed) {
  std::vector<InstanceResult> rows;
  std::size_t bad = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && line.rfind("size,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty() || line == "\r") continue;
    if (auto r = parse_row(line)) {
      rows.push_back(*r);
    } else {
      ++bad;
    }
  }
  if (malformed) *malformed = bad;
  return rows;
}

// ---------------------------------------------------------------------------
// Summaries

Summary summarize(const std::vector<InstanceResult>& rows, const SummaryOptions& options) {
  using Key = std::tuple<std::size_t, int, double>;
  std::map<Key, std::vector<const InstanceResult*>> groups;
  for (const auto& r : rows) groups[{r.size, static_cast<int>(r.mapping), r.j_int}].push_back(&r);

  Summary out;
  for (const auto& [key, members] : groups) {
    SummaryRow s;
    s.size = std::get<0>(key);
    s.mapping = static_cast<MappingKind>(std::get<1>(key));
    s.j_int = std::get<2>(key);
    std::vector<double> tts, rs, vars, coup, total, avg, p90, mx;
    std::size_t solved = 0;
    for (const auto* r : members) {
      vars.push_back(static_cast<double>(r->qubo_vars));
      coup.push_back(static_cast<double>(r->couplings));
      if (!r->embedded) {
        ++s.embed_failures;
        continue;
      }
      const TtsResult& t = options.corrected ? r->stats.tts_corrected : r->stats.tts_raw;
      tts.push_back(t.censored ? kInf : t.tts_us);
      if (!t.censored) ++solved;
      rs.push_back(options.corrected ? r->stats.r_corrected : r->stats.r_raw);
      total.push_back(static_cast<double>(r->embedding.total));
      avg.push_back(r->embedding.average);
      p90.push_back(static_cast<double>(r->embedding.p90));
      mx.push_back(static_cast<double>(r->embedding.max));
    }
    s.instances = tts.size();
    s.median_qubo_vars = median(vars);
    s.median_couplings = median(coup);
    const std::size_t censored = s.instances - solved;
    if (s.instances == 0 || 2 * censored >= s.instances) {
      s.fraction_solved = s.instances ? static_cast<double>(solved) / static_cast<double>(s.instances) : 0.0;
      out.omitted.push_back(s);
      continue;
    }
    s.fraction_solved = static_cast<double>(solved) / static_cast<double>(s.instances);
    s.median_tts_us = median(tts);
    s.p35_tts_us = nearest_rank(tts, 35);
    if (100 * solved >= 65 * s.instances) s.p65_tts_us = nearest_rank(tts, 65);
    s.median_r = median(rs);
    s.median_embedding_size = median(total);
    s.median_avg_component = median(avg);
    s.median_p90_component = median(p90);
    s.median_max_component = median(mx);
    out.rows.push_back(s);
  }
  return out;
}

Summary summarize_csv(std::istream& in, const SummaryOptions& options) {
  std::size_t bad = 0;
  const auto rows = read_results_csv(in, &bad);
  Summary s = summarize(rows, options);
  s.malformed = bad;
  return s;
}

std::string summary_csv_header() {
  return "size,mapping,j_int,instances,embed_failures,fraction_solved,median_tts_us,p35_tts_us,p65_tts_us,"
         "median_r,median_qubo_vars,median_couplings,median_embedding_size,median_avg_component,"
         "median_p90_component,median_max_component";
}

void write_summary_csv(const Summary& summary, std::ostream& out) {
  out << summary_csv_header() << '\n';
  for (const auto& s : summary.rows) {
    out << s.size << ',' << mapping_name(s.mapping) << ',' << num(s.j_int) << ',' << s.instances << ','
        << s.embed_failures << ',' << num(s.fraction_solved) << ',' << num(s.median_tts_us) << ','
        << num(s.p35_tts_us) << ',' << (s.p65_tts_us ? num(*s.p65_tts_us) : std::string("indeterminate")) << ','
        << num(s.median_r) << ',' << num(s.median_qubo_vars) << ',' << num(s.median_couplings) << ','
        << num(s.median_embedding_size) << ',' << num(s.median_avg_component) << ','
        << num(s.median_p90_component) << ',' << num(s.median_max_component) << '\n';
  }
}

std::vector<BestJint> best_jint(const Summary& summary) {
  std::map<std::pair<std::size_t, int>, BestJint> best;
  for (const auto& s : summary.omitted) {
    auto& b = best[{s.size, static_cast<int>(s.mapping)}];
    b.size = s.size;
    b.mapping = s.mapping;
  }
  double best_r = -1.0;
  std::pair<std::size_t, int> last{0, -1};
  for (const auto& s : summary.rows) {  // sorted by size, mapping, J_int
    const std::pair<std::size_t, int> key{s.size, static_cast<int>(s.mapping)};
    if (key != last) best_r = -1.0;
    last = key;
    auto& b = best[key];
    b.size = s.size;
    b.mapping = s.mapping;
    if (!b.j_int || s.median_tts_us < b.median_tts_us) {
      b.j_int = s.j_int;
      b.median_tts_us = s.median_tts_us;
      b.median_r = s.median_r;
    }
    if (s.median_r > best_r) {
      best_r = s.median_r;
      b.j_int_by_r = s.j_int;
    }
  }
  std::vector<BestJint> out;
  for (auto& [k, b] : best) out.push_back(b);
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

struct Job {
  std::size_t size_index;
  std::size_t instance;
  std::size_t mapping_index;
};

std::vector<InstanceResult> solve_job(const SweepSpec& spec, const ChimeraGraph& hw, const BenchmarkInstance& inst,
                                      std::size_t size, std::size_t instance, std::size_t mi) {
  const MappingKind kind = spec.mappings[mi];
  const CompiledInstance ci = compile_instance(inst.problem, spec.family, kind);
  const UndirectedGraph source = interaction_graph(ci.qubo);

  std::optional<Embedding> best;
  std::size_t successes = 0;
  const std::uint64_t embed_seed = mix_seed(inst.seed, 0x100 + static_cast<std::uint64_t>(kind));
  for (std::size_t r = 0; r < spec.embed_runs; ++r) {
    auto e = find_embedding(source, hw, mix_seed(embed_seed, r), spec.embed_options);
    if (!e) continue;
    ++successes;
    if (!best || e->total_qubits() < best->total_qubits()) best = std::move(e);
  }

  // Every hit is decoded and checked against the planning problem; the same
  // logical assignment recurs often, so verdicts are cached.
  std::map<Assignment, bool> verdicts;
  std::vector<InstanceResult> out;
  for (std::size_t ji = 0; ji < spec.j_int_grid.size(); ++ji) {
    InstanceResult r;
    r.size = size;
    r.instance = instance;
    r.instance_seed = inst.seed;
    r.mapping = kind;
    r.j_int = spec.j_int_grid[ji];
    r.qubo_vars = ci.qubo.num_vars();
    r.couplings = ci.qubo.num_couplings();
    r.embed_successes = successes;
    r.embedded = best.has_value();
    if (best) {
      r.embedding = embedding_metrics(*best);
      AnnealProtocol p = spec.protocol;
      p.seed = mix_seed(mix_seed(inst.seed, 0x200 + static_cast<std::uint64_t>(kind)), ji);
      std::size_t invalid = 0;
      auto on_hit = [&](const Assignment& bits, bool) {
        auto it = verdicts.find(bits);
        if (it == verdicts.end()) {
          const auto plan = ci.decode_plan(bits);
          const bool ok = plan && validate_plan(inst.problem, *plan).valid;
          it = verdicts.emplace(bits, ok).first;
        }
        if (!it->second) ++invalid;
      };
      r.stats = run_protocol(ci.qubo, *best, hw, 0.0, r.j_int, p, on_hit);
      r.invalid_hits = invalid;
    } else {
      r.stats.tts_raw.censored = true;
      r.stats.tts_corrected.censored = true;
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_best_csv(const std::vector<BestJint>& best, std::ostream& out) {
  out << "size,mapping,best_j_int,median_tts_us,median_r,best_j_int_by_r\n";
  for (const auto& b : best) {
    out << b.size << ',' << mapping_name(b.mapping) << ',';
    if (b.j_int) {
      out << num(*b.j_int) << ',' << num(b.median_tts_us) << ',' << num(b.median_r);
    } else {
      out << "censored,,";
    }
    out << ',' << (b.j_int_by_r ? num(*b.j_int_by_r) : std::string()) << '\n';
  }
}

json manifest(const SweepSpec& spec, const MappingComparison& mc) {
  json m;
  m["tool"] = "planqubo";
  m["spec"] = json::parse(spec.to_json());
  m["rows"] = mc.rows.size();
  std::size_t invalid = 0;
  std::map<std::pair<std::size_t, int>, std::pair<std::size_t, std::size_t>> embed;  // failures, instances
  for (const auto& r : mc.rows) {
    invalid += r.invalid_hits;
    if (r.j_int != spec.j_int_grid.front()) continue;
    auto& e = embed[{r.size, static_cast<int>(r.mapping)}];
    e.first += r.embedded ? 0 : 1;
    e.second += 1;
  }
  m["invalid_hits"] = invalid;
  json rates = json::array();
  for (const auto& [k, e] : embed) {
    rates.push_back({{"size", k.first},
                     {"mapping", mapping_name(static_cast<MappingKind>(k.second))},
                     {"instances", e.second},
                     {"embed_failures", e.first},
                     {"embed_failure_rate", static_cast<double>(e.first) / static_cast<double>(e.second)}});
  }
  m["embedding"] = rates;
  json omitted = json::array();
  for (const auto& s : mc.summary.omitted) {
    omitted.push_back({{"size", s.size},
                       {"mapping", mapping_name(s.mapping)},
                       {"j_int", s.j_int},
                       {"instances", s.instances},
                       {"fraction_solved", s.fraction_solved}});
  }
  m["omitted_groups"] = omitted;
  m["files"] = {"results.csv", "summary.csv", "best_jint.csv"};
  return m;
}

}  // namespace

MappingComparison run_mapping_comparison(const SweepSpec& spec) {
  spec.check();
  const ChimeraGraph hw = spec.architecture.graph();

  std::vector<BenchmarkSet> sets;
  for (std::size_t n : spec.sizes) {
    sets.push_back(generate_benchmark(spec.family, n, spec.instances, mix_seed(spec.seed, n)));
  }
  std::vector<Job> jobs;
  for (std::size_t si = 0; si < sets.size(); ++si) {
    for (std::size_t ii = 0; ii < sets[si].instances.size(); ++ii) {
      for (std::size_t mi = 0; mi < spec.mappings.size(); ++mi) jobs.push_back({si, ii, mi});
    }
  }
  std::vector<std::vector<InstanceResult>> results(jobs.size());
  parallel_for(jobs.size(), spec.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const auto& set = sets[job.size_index];
    results[j] = solve_job(spec, hw, set.instances[job.instance], set.n, job.instance, job.mapping_index);
  });

  MappingComparison mc;
  for (auto& r : results) {
    for (auto& row : r) mc.rows.push_back(std::move(row));
  }
  mc.summary = summarize(mc.rows);
  mc.best = best_jint(mc.summary);

  if (!spec.output_dir.empty()) {
    ensure_dir(spec.output_dir);
    auto results_out = open_out(spec.output_dir, "results.csv");
    write_results_csv(mc.rows, results_out);
    auto summary_out = open_out(spec.output_dir, "summary.csv");
    write_summary_csv(mc.summary, summary_out);
    auto best_out = open_out(spec.output_dir, "best_jint.csv");
    write_best_csv(mc.best, best_out);
    auto manifest_out = open_out(spec.output_dir, "manifest.json");
    manifest_out << manifest(spec, mc).dump(2) << '\n';
  }
  return mc;
}

// ---------------------------------------------------------------------------
// J_int table

JintTable jint_table(const Summary& summary, MappingKind mapping, const std::vector<std::size_t>& sizes,
                     const std::vector<double>& grid) {
  JintTable t;
  t.sizes = sizes;
  t.grid = grid;
  t.cells.assign(grid.size(), std::vector<std::optional<double>>(sizes.size()));
  for (const auto& s : summary.rows) {
    if (s.mapping != mapping) continue;
    const auto col = std::find(sizes.begin(), sizes.end(), s.size);
    const auto row = std::find(grid.begin(), grid.end(), s.j_int);
    if (col == sizes.end() || row == grid.end()) continue;
    t.cells[row - grid.begin()][col - sizes.begin()] = s.median_tts_us;
  }
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    std::optional<std::size_t> best;
    for (std::size_t r = 0; r < grid.size(); ++r) {
      if (t.cells[r][c] && (!best || *t.cells[r][c] < *t.cells[*best][c])) best = r;
    }
    t.best_row.push_back(best);
    t.censored.push_back(!best.has_value());
  }
  return t;
}

std::string JintTable::to_csv() const {
  std::ostringstream o;
  o << "j_int";
  for (auto n : sizes) o << ",n=" << n;
  o << '\n';
  for (std::size_t r = 0; r < grid.size(); ++r) {
    o << num(grid[r]);
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      o << ',';
      if (!cells[r][c]) {
        o << '-';
      } else {
        o << num(*cells[r][c]);
        if (best_row[c] == r) o << '*';
      }
    }
    o << '\n';
  }
  o << "status";
  for (std::size_t c = 0; c < sizes.size(); ++c) o << ',' << (censored[c] ? "censored" : "ok");
  o << '\n';
  return o.str();
}

JintTable run_jint_sweep(const SweepSpec& spec, MappingComparison* details) {
  spec.check();
  SweepSpec single = spec;
  single.mappings = {spec.mappings.front()};
  MappingComparison mc = run_mapping_comparison(single);
  JintTable t = jint_table(mc.summary, single.mappings.front(), spec.sizes, spec.j_int_grid);
  if (!spec.output_dir.empty()) {
    auto out = open_out(spec.output_dir, "jint_table.csv");
    out << t.to_csv();
  }
  if (details) *details = std::move(mc);
  return t;
}

// ---------------------------------------------------------------------------
// Architecture study

std::vector<ArchitectureRow> run_architecture_study(std::size_t max_k, const std::vector<std::size_t>& M_range,
                                                    const std::vector<std::size_t>& L_range,
                                                    const ArchitectureStudyOptions& options) {
  if (options.runs == 0) throw InputError("architecture study needs at least one run");
  std::vector<ArchitectureRow> rows;
  std::vector<ChimeraGraph> graphs;
  std::vector<std::size_t> graph_of;
  for (std::size_t M : M_range) {
    for (std::size_t L : L_range) {
      if (M == 0 || L == 0) throw InputError("architecture needs M, L > 0");
      graphs.emplace_back(M, L);
      for (std::size_t k = 1; k <= max_k; ++k) {
        rows.push_back({k, M, L, 0, options.runs, 0});
        graph_of.push_back(graphs.size() - 1);
      }
    }
  }
  struct Unit {
    std::size_t row;
    std::size_t run;
  };
  std::vector<Unit> units;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].k * rows[i].k > graphs[graph_of[i]].num_usable()) continue;
    for (std::size_t r = 0; r < options.runs; ++r) units.push_back({i, r});
  }
  // Slow (large k) units first so the pool drains evenly.
  std::stable_sort(units.begin(), units.end(),
                   [&](const Unit& a, const Unit& b) { return rows[a.row].k > rows[b.row].k; });
  std::vector<std::size_t> sizes(units.size(), 0);
  parallel_for(units.size(), options.threads, [&](std::size_t u) {
    const ArchitectureRow& row = rows[units[u].row];
    const std::uint64_t seed = mix_seed(mix_seed(options.seed, row.k), row.M * 1000 + row.L);
    const auto e =
        find_embedding(ic_graph(row.k), graphs[graph_of[units[u].row]], mix_seed(seed, units[u].run),
                       options.embed_options);
    if (e) sizes[u] = e->total_qubits();
  });
  for (std::size_t u = 0; u < units.size(); ++u) {
    if (sizes[u] == 0) continue;
    auto& row = rows[units[u].row];
    ++row.successes;
    if (row.min_size == 0 || sizes[u] < row.min_size) row.min_size = sizes[u];
  }
  return rows;
}

std::size_t largest_reliable_k(const std::vector<ArchitectureRow>& rows, std::size_t M, std::size_t L) {
  std::map<std::size_t, bool> reliable;
  for (const auto& r : rows) {
    if (r.M == M && r.L == L) reliable[r.k] = r.runs > 0 && r.successes == r.runs;
  }
  std::size_t k = 0;
  for (const auto& [kk, ok] : reliable) {
    if (kk != k + 1 || !ok) break;
    k = kk;
  }
  return k;
}

std::string architecture_csv(const std::vector<ArchitectureRow>& rows) {
  std::ostringstream o;
  o << "k,M,L,successes,runs,min_size\n";
  for (const auto& r : rows) {
    o << r.k << ',' << r.M << ',' << r.L << ',' << r.successes << ',' << r.runs << ',' << r.min_size << '\n';
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// Error correction

PairedStats paired_statistics(const std::vector<PairedResult>& pairs) {
  PairedStats s;
  s.pairs = pairs.size();
  std::vector<double> raw, corr, speedup;
  for (const auto& p : pairs) {
    raw.push_back(p.r_raw);
    corr.push_back(p.r_corrected);
    if (p.r_corrected > p.r_raw) {
      ++s.improved;
    } else if (p.r_corrected < p.r_raw) {
      ++s.worse;
    } else {
      ++s.equal;
    }
    if (p.tts_raw.censored && !p.tts_corrected.censored) ++s.rescued;
    if (!p.tts_raw.censored && !p.tts_corrected.censored) speedup.push_back(p.tts_raw.tts_us / p.tts_corrected.tts_us);
  }
  s.median_r_raw = median(raw);
  s.median_r_corrected = median(corr);
  if (!speedup.empty()) s.median_speedup = median(speedup);
  // Exact two-sided sign test on the untied pairs.
  const std::size_t n = s.improved + s.worse;
  if (n > 0) {
    const std::size_t lo = std::min(s.improved, s.worse);
    double tail = 0.0;
    for (std::size_t i = 0; i <= lo; ++i) {
      const double log_term = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                              std::lgamma(static_cast<double>(n - i) + 1) - static_cast<double>(n) * std::log(2.0);
      tail += std::exp(log_term);
    }
    s.sign_test_p = std::min(1.0, 2.0 * tail);
  }
  return s;
}

ErrorCorrectionComparison run_error_correction_comparison(const SweepSpec& spec) {
  ErrorCorrectionComparison ec;
  ec.details = run_mapping_comparison(spec);
  for (const auto& r : ec.details.rows) {
    if (!r.embedded) continue;
    ec.pairs.push_back({r.size, r.instance, r.mapping, r.j_int, r.stats.r_raw, r.stats.r_corrected, r.stats.tts_raw,
                        r.stats.tts_corrected});
  }
  ec.stats = paired_statistics(ec.pairs);
  if (!spec.output_dir.empty()) {
    auto out = open_out(spec.output_dir, "error_correction.csv");
    out << "size,instance,mapping,j_int,r_raw,r_corrected,tts_raw_us,tts_corrected_us\n";
    for (const auto& p : ec.pairs) {
      out << p.size << ',' << p.instance << ',' << mapping_name(p.mapping) << ',' << num(p.j_int) << ','
          << num(p.r_raw) << ',' << num(p.r_corrected) << ',' << (p.tts_raw.censored ? "" : num(p.tts_raw.tts_us))
          << ',' << (p.tts_corrected.censored ? "" : num(p.tts_corrected.tts_us)) << '\n';
    }
    auto stats = open_out(spec.output_dir, "error_correction.json");
    json j = {{"pairs", ec.stats.pairs},
              {"improved", ec.stats.improved},
              {"equal", ec.stats.equal},
              {"worse", ec.stats.worse},
              {"rescued", ec.stats.rescued},
              {"median_r_raw", ec.stats.median_r_raw},
              {"median_r_corrected", ec.stats.median_r_corrected},
              {"median_speedup", ec.stats.median_speedup ? json(*ec.stats.median_speedup) : json(nullptr)},
              {"sign_test_p", ec.stats.sign_test_p}};
    stats << j.dump(2) << '\n';
  }
  return ec;
}

}  // namespace planqubo
