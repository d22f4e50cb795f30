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

// planqubo command line. Every subcommand accepts --config file.json; keys
// named after long options (dashes or underscores) fill in options not
// given on the command line. For `sweep` the file is the sweep spec itself.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "planqubo/planqubo.h"

namespace {

using json = nlohmann::json;

struct Failure {
  pq_status status;
};

void check(pq_status s) {
  if (s != PQ_OK) throw Failure{s};
}

// Owning wrapper for strings returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { pq_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    spit(path, text);
  }
}

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/// Fills options of `cmd` that were not given on the command line from the
/// JSON object in `path`.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config " + path + " must be a JSON object");
  for (CLI::Option* opt : cmd->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "config" || name == "help") continue;
    std::string alt = name;
    for (char& c : alt) c = c == '-' ? '_' : c;
    const json* v = j.contains(name) ? &j[name] : j.contains(alt) ? &j[alt] : nullptr;
    if (!v || v->is_object() || v->is_null()) continue;
    if (v->is_array()) {
      std::string joined;
      for (const auto& x : *v) joined += (joined.empty() ? "" : ",") + scalar(x);
      opt->add_result(joined);
    } else if (opt->get_type_size() == 0) {
      if (v->is_boolean() && !v->get<bool>()) continue;
      opt->add_result("true");
    } else {
      opt->add_result(scalar(*v));
    }
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning problems as QUBOs on Chimera hardware"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pq_version()));

  std::string config;
  auto with_config = [&](CLI::App* cmd) { cmd->add_option("--config", config, "JSON file with option values"); };

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a benchmark set of planning problems");
  std::string family = "sched", out_dir;
  std::size_t n = 8, count = 25;
  std::uint64_t seed = 1;
  bool keep_unsolvable = false;
  gen->add_option("--family", family, "nav|sched")->capture_default_str();
  gen->add_option("--n", n, "graph size")->capture_default_str();
  gen->add_option("--count", count, "instances")->capture_default_str();
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--out", out_dir, "output directory");
  gen->add_flag("--keep-unsolvable", keep_unsolvable, "do not filter for solvable instances");
  with_config(gen);

  // map
  auto* map = app.add_subcommand("map", "Compile a planning problem to a QUBO");
  std::string mapping = "direct", in_path, out_path, map_family, legend_path, dimacs_path;
  std::size_t horizon = 0;
  bool no_simplify = false;
  map->add_option("--mapping", mapping, "timeslice|cnf|direct")->capture_default_str();
  map->add_option("--in", in_path, "problem JSON");
  map->add_option("--out", out_path, "QUBO output (stdout when omitted)");
  map->add_option("--L", horizon, "plan length (0: family default)");
  map->add_option("--family", map_family, "nav|sched (detected when omitted)");
  map->add_option("--legend", legend_path, "variable legend JSON output");
  map->add_option("--dimacs", dimacs_path, "CNF intermediate output (cnf mapping)");
  map->add_flag("--no-simplify", no_simplify);
  with_config(map);

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Quadratize a DIMACS CNF into a QUBO");
  std::string certificate_path;
  reduce->add_option("--in", in_path, "DIMACS CNF");
  reduce->add_option("--out", out_path, "QUBO output (stdout when omitted)");
  reduce->add_option("--certificate", certificate_path, "substitution list JSON output");
  with_config(reduce);

  // chimera
  auto* chimera = app.add_subcommand("chimera", "Emit an (M, L) Chimera hardware graph");
  std::size_t M = 8, L = 4;
  std::string broken;
  chimera->add_option("--M", M)->capture_default_str();
  chimera->add_option("--L", L)->capture_default_str();
  chimera->add_option("--broken", broken, "comma separated qubit ids");
  chimera->add_option("--out", out_path);
  with_config(chimera);

  // embed
  auto* embed = app.add_subcommand("embed", "Minor-embed a QUBO interaction graph");
  std::string qubo_path;
  std::size_t tries = 10, runs = 11;
  embed->add_option("--qubo", qubo_path);
  embed->add_option("--M", M)->capture_default_str();
  embed->add_option("--L", L)->capture_default_str();
  embed->add_option("--broken", broken);
  embed->add_option("--tries", tries)->capture_default_str();
  embed->add_option("--runs", runs)->capture_default_str();
  embed->add_option("--seed", seed)->capture_default_str();
  embed->add_option("--out", out_path, "best embedding JSON");
  with_config(embed);

  // solve
  auto* solve = app.add_subcommand("solve", "Anneal an embedded QUBO and report success statistics");
  std::string embedding_path, results_path, instance_label = "-", mapping_label = "-";
  double jint = 1.3, ground = std::numeric_limits<double>::quiet_NaN();
  std::size_t anneals = 45000, gauges = 10, sweeps = 100;
  double beta_start = 0.1, beta_end = 10.0;
  bool rescale = false;
  std::size_t levels = 0;
  solve->add_option("--qubo", qubo_path);
  solve->add_option("--embedding", embedding_path);
  solve->add_option("--M", M)->capture_default_str();
  solve->add_option("--L", L)->capture_default_str();
  solve->add_option("--broken", broken);
  solve->add_option("--jint", jint)->capture_default_str();
  solve->add_option("--anneals", anneals, "anneals per gauge")->capture_default_str();
  solve->add_option("--gauges", gauges)->capture_default_str();
  solve->add_option("--sweeps", sweeps)->capture_default_str();
  solve->add_option("--beta-start", beta_start)->capture_default_str();
  solve->add_option("--beta-end", beta_end)->capture_default_str();
  solve->add_flag("--rescale", rescale, "rescale into the hardware coefficient range");
  solve->add_option("--quantize", levels, "coefficient levels (0: off)");
  solve->add_option("--seed", seed)->capture_default_str();
  solve->add_option("--ground", ground, "logical ground energy (default: exact when small, else 0)");
  solve->add_option("--results", results_path, "CSV to append a result row to");
  solve->add_option("--instance", instance_label, "instance label for the results row");
  solve->add_option("--mapping", mapping_label, "mapping label for the results row");
  with_config(solve);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a mapping comparison, J_int sweep or error-correction study");
  std::string kind = "comparison";
  std::size_t threads = 0;
  sweep->add_option("--kind", kind, "comparison|jint|error-correction")->capture_default_str();
  sweep->add_option("--out", out_dir, "output directory (overrides the spec)");
  sweep->add_option("--threads", threads, "worker threads (0: all cores)");
  auto* sweep_seed = sweep->add_option("--seed", seed, "overrides the spec seed");
  auto* sweep_threads = sweep->get_option("--threads");
  with_config(sweep);

  // arch-study
  auto* arch = app.add_subcommand("arch-study", "Embeddability of IC_{k,k} across Chimera sizes");
  std::size_t max_k = 7;
  std::string M_list = "8,10,12", L_list = "4,6,8";
  arch->add_option("--max-k", max_k)->capture_default_str();
  arch->add_option("--M", M_list, "comma separated")->capture_default_str();
  arch->add_option("--L", L_list, "comma separated")->capture_default_str();
  arch->add_option("--runs", runs)->capture_default_str();
  arch->add_option("--seed", seed)->capture_default_str();
  arch->add_option("--threads", threads);
  arch->add_option("--out", out_path);
  with_config(arch);

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Summarize a per-instance results CSV");
  bool corrected = false;
  summarize->add_option("--in", in_path, "results CSV");
  summarize->add_option("--out", out_path);
  summarize->add_flag("--corrected", corrected, "use error-corrected TTS");
  with_config(summarize);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd != sweep) apply_config(cmd, config);
    auto need = [](const std::string& v, const char* what) {
      if (v.empty()) throw std::runtime_error(std::string("missing ") + what);
    };

    if (cmd == gen) {
      need(out_dir, "--out");
      Text manifest;
      check(pq_generate(family.c_str(), n, count, seed, keep_unsolvable ? 0 : 1, out_dir.c_str(), manifest.out()));
      std::cout << manifest.str();
    } else if (cmd == map) {
      need(in_path, "--in");
      pq_problem* problem = nullptr;
      check(pq_problem_read(in_path.c_str(), &problem));
      std::unique_ptr<pq_problem, decltype(&pq_problem_free)> p(problem, pq_problem_free);
      pq_compiled* compiled = nullptr;
      check(pq_compile(p.get(), map_family.empty() ? nullptr : map_family.c_str(), mapping.c_str(), horizon,
                       no_simplify ? 0 : 1, &compiled));
      std::unique_ptr<pq_compiled, decltype(&pq_compiled_free)> c(compiled, pq_compiled_free);
      Text qubo, legend;
      check(pq_compiled_qubo_text(c.get(), qubo.out()));
      emit(out_path, qubo.str());
      check(pq_compiled_legend_json(c.get(), legend.out()));
      if (legend_path.empty() && !out_path.empty() && out_path != "-") legend_path = out_path + ".legend.json";
      if (!legend_path.empty()) spit(legend_path, legend.str() + "\n");
      if (!dimacs_path.empty()) {
        Text dimacs;
        check(pq_compiled_dimacs(c.get(), dimacs.out()));
        spit(dimacs_path, dimacs.str());
      }
    } else if (cmd == reduce) {
      need(in_path, "--in");
      Text qubo, cert;
      check(pq_reduce_dimacs(slurp(in_path).c_str(), qubo.out(), cert.out()));
      emit(out_path, qubo.str());
      if (!certificate_path.empty()) spit(certificate_path, cert.str() + "\n");
    } else if (cmd == chimera || cmd == embed || cmd == solve) {
      pq_chimera* hw_raw = nullptr;
      check(pq_chimera_new(M, L, broken.c_str(), &hw_raw));
      std::unique_ptr<pq_chimera, decltype(&pq_chimera_free)> hw(hw_raw, pq_chimera_free);
      if (cmd == chimera) {
        Text edges;
        check(pq_chimera_edge_list(hw.get(), edges.out()));
        emit(out_path, edges.str());
      } else if (cmd == embed) {
        need(qubo_path, "--qubo");
        Text csv, best;
        check(pq_embed(slurp(qubo_path).c_str(), hw.get(), tries, runs, seed, csv.out(), best.out()));
        std::cout << csv.str();
        if (!out_path.empty() && best.p) spit(out_path, best.str() + "\n");
        if (!best.p) return 3;
      } else {
        need(qubo_path, "--qubo");
        need(embedding_path, "--embedding");
        const json protocol = {{"anneals_per_gauge", anneals}, {"num_gauges", gauges},   {"sweeps", sweeps},
                               {"beta_start", beta_start},     {"beta_end", beta_end},    {"rescale", rescale},
                               {"quantization_levels", levels}, {"seed", seed}};
        Text stats;
        check(pq_solve(slurp(qubo_path).c_str(), slurp(embedding_path).c_str(), hw.get(), jint,
                       protocol.dump().c_str(), ground, stats.out()));
        std::cout << stats.str() << '\n';
        if (!results_path.empty()) {
          const json s = json::parse(stats.str());
          const bool fresh = !std::ifstream(results_path).good();
          std::ofstream out(results_path, std::ios::app);
          if (!out) throw std::runtime_error("cannot append to " + results_path);
          if (fresh) out << "instance,mapping,j_int,r_raw,r_corrected,k,tts_us,censored\n";
          const json& raw = s["raw"];
          out << instance_label << ',' << mapping_label << ',' << jint << ',' << s["r_raw"].get<double>() << ','
              << s["r_corrected"].get<double>() << ',' << (raw["k"].is_null() ? "" : raw["k"].dump()) << ','
              << (raw["tts_us"].is_null() ? "" : raw["tts_us"].dump()) << ','
              << (raw["censored"].get<bool>() ? 1 : 0) << '\n';
        }
      }
    } else if (cmd == sweep) {
      json spec = config.empty() ? json::object() : json::parse(slurp(config));
      if (!out_dir.empty()) spec["output_dir"] = out_dir;
      if (sweep_seed->count() > 0) spec["seed"] = seed;
      if (sweep_threads->count() > 0) spec["threads"] = threads;
      if (spec.contains("kind") && sweep->get_option("--kind")->count() == 0) kind = spec["kind"].get<std::string>();
      spec.erase("kind");
      Text report;
      check(pq_sweep(spec.dump().c_str(), kind.c_str(), report.out()));
      std::cout << report.str() << '\n';
    } else if (cmd == arch) {
      Text csv;
      check(pq_arch_study(max_k, M_list.c_str(), L_list.c_str(), runs, seed, threads, csv.out()));
      emit(out_path, csv.str());
    } else if (cmd == summarize) {
      need(in_path, "--in");
      Text csv;
      std::size_t malformed = 0;
      check(pq_summarize(slurp(in_path).c_str(), corrected ? 1 : 0, csv.out(), &malformed));
      emit(out_path, csv.str());
      if (malformed > 0) std::cerr << "skipped " << malformed << " malformed rows\n";
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << pq_last_error() << '\n';
    return 1 + static_cast<int>(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
