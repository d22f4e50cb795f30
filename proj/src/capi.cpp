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

#include "planqubo/planqubo.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>

#include "json.hpp"
#include "planqubo/annealer.hpp"
#include "planqubo/bench.hpp"
#include "planqubo/chimera.hpp"
#include "planqubo/cnf.hpp"
#include "planqubo/embedding.hpp"
#include "planqubo/errors.hpp"
#include "planqubo/instance_gen.hpp"
#include "planqubo/mappings.hpp"
#include "planqubo/planning.hpp"
#include "planqubo/pseudo_boolean.hpp"

struct pq_problem {
  planqubo::PlanningProblem problem;
};

struct pq_compiled {
  planqubo::CompiledInstance compiled;
};

struct pq_chimera {
  planqubo::ChimeraGraph graph;
};

namespace {

using namespace planqubo;
using json = nlohmann::ordered_json;

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

template <class F>
pq_status guard(F&& f) {
  last_error.clear();
  try {
    f();
    return PQ_OK;
  } catch (const InputError& e) {
    last_error = e.what();
    return PQ_ERR_INPUT;
  } catch (const CapabilityError& e) {
    last_error = e.what();
    return PQ_ERR_CAPABILITY;
  } catch (const SemanticError& e) {
    last_error = e.what();
    return PQ_ERR_SEMANTIC;
  } catch (const IoError& e) {
    last_error = e.what();
    return PQ_ERR_IO;
  } catch (const json::exception& e) {
    last_error = e.what();
    return PQ_ERR_INPUT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PQ_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return PQ_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw InputError(std::string(what) + " must not be null");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Qubo qubo_from_text(const char* text) {
  require(text, "QUBO text");
  std::istringstream in(text);
  return read_qubo(in);
}

UndirectedGraph interaction_graph(const Qubo& qubo) {
  UndirectedGraph g(qubo.num_vars());
  for (const auto& [a, b] : qubo.interactions()) g.add_edge(a, b);
  return g;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (Vertex v : parse_qubit_list(text)) out.push_back(v);
  return out;
}

json summary_json(const Summary& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"size", r.size},
                    {"mapping", mapping_name(r.mapping)},
                    {"j_int", r.j_int},
                    {"instances", r.instances},
                    {"fraction_solved", r.fraction_solved},
                    {"median_tts_us", r.median_tts_us},
                    {"p35_tts_us", r.p35_tts_us},
                    {"p65_tts_us", r.p65_tts_us ? json(*r.p65_tts_us) : json("indeterminate")},
                    {"median_r", r.median_r}});
  }
  return {{"groups", rows}, {"omitted_groups", s.omitted.size()}, {"malformed_rows", s.malformed}};
}

json best_json(const std::vector<BestJint>& best) {
  json out = json::array();
  for (const auto& b : best) {
    out.push_back({{"size", b.size},
                   {"mapping", mapping_name(b.mapping)},
                   {"best_j_int", b.j_int ? json(*b.j_int) : json("censored")},
                   {"median_tts_us", b.j_int ? json(b.median_tts_us) : json(nullptr)},
                   {"best_j_int_by_r", b.j_int_by_r ? json(*b.j_int_by_r) : json(nullptr)}});
  }
  return out;
}

}  // namespace

extern "C" {

const char* pq_version(void) { return "0.1.0"; }

const char* pq_last_error(void) { return last_error.c_str(); }

void pq_string_free(char* s) { std::free(s); }

pq_status pq_generate(const char* family, size_t n, size_t count, uint64_t seed, int filter_solvable,
                      const char* out_dir, char** manifest_csv) {
  return guard([&] {
    require(family, "family");
    require(out_dir, "output directory");
    const auto set = generate_benchmark(parse_family(family), n, count, seed, filter_solvable != 0);
    write_benchmark(set, out_dir);
    put(manifest_csv, read_text((std::filesystem::path(out_dir) / "manifest.csv").string()));
  });
}

pq_status pq_problem_read(const char* path, pq_problem** out) {
  return guard([&] {
    require(path, "path");
    require(out, "output handle");
    *out = new pq_problem{read_problem_file(path)};
  });
}

void pq_problem_free(pq_problem* p) { delete p; }

pq_status pq_compile(const pq_problem* problem, const char* family, const char* mapping, size_t horizon,
                     int simplify, pq_compiled** out) {
  return guard([&] {
    require(problem, "problem");
    require(mapping, "mapping");
    require(out, "output handle");
    Family fam;
    if (family && *family) {
      fam = parse_family(family);
    } else {
      const auto detected = detect_family(problem->problem);
      if (!detected) throw InputError("cannot detect the problem family; pass it explicitly");
      fam = *detected;
    }
    CompileOptions options;
    if (horizon > 0) options.horizon = horizon;
    options.simplify = simplify != 0;
    *out = new pq_compiled{compile_instance(problem->problem, fam, parse_mapping(mapping), options)};
  });
}

void pq_compiled_free(pq_compiled* c) { delete c; }

size_t pq_compiled_num_vars(const pq_compiled* c) { return c ? c->compiled.qubo.num_vars() : 0; }

pq_status pq_compiled_qubo_text(const pq_compiled* c, char** out) {
  return guard([&] {
    require(c, "compiled instance");
    std::ostringstream s;
    write_qubo(c->compiled.qubo, s);
    put(out, s.str());
  });
}

pq_status pq_compiled_legend_json(const pq_compiled* c, char** out) {
  return guard([&] {
    require(c, "compiled instance");
    put(out, legend_to_json(c->compiled.legend));
  });
}

pq_status pq_compiled_dimacs(const pq_compiled* c, char** out) {
  return guard([&] {
    require(c, "compiled instance");
    if (!c->compiled.cnf) throw InputError("only the cnf mapping has a DIMACS intermediate");
    std::ostringstream s;
    write_dimacs(c->compiled.cnf->planning.cnf, s);
    put(out, s.str());
  });
}

pq_status pq_reduce_dimacs(const char* dimacs, char** qubo_text, char** certificate_json) {
  return guard([&] {
    require(dimacs, "DIMACS text");
    std::istringstream in(dimacs);
    const CnfFormula cnf = read_dimacs(in);
    const ReductionCertificate cert = reduce_to_quadratic(cnf_to_pubo(cnf));
    std::ostringstream q;
    write_qubo(cert.qubo, q);
    put(qubo_text, q.str());
    json subs = json::array();
    for (const auto& s : cert.substitutions) {
      subs.push_back({{"ancilla", s.ancilla}, {"u", s.u}, {"v", s.v}, {"penalty_weight", s.penalty_weight}});
    }
    json j = {{"original_num_vars", cert.original_num_vars},
              {"num_vars", cert.qubo.num_vars()},
              {"substitutions", subs}};
    put(certificate_json, j.dump(2));
  });
}

pq_status pq_chimera_new(size_t M, size_t L, const char* broken, pq_chimera** out) {
  return guard([&] {
    require(out, "output handle");
    *out = new pq_chimera{ChimeraGraph(M, L, parse_qubit_list(str(broken)))};
  });
}

void pq_chimera_free(pq_chimera* c) { delete c; }

size_t pq_chimera_num_usable(const pq_chimera* c) { return c ? c->graph.num_usable() : 0; }

pq_status pq_chimera_edge_list(const pq_chimera* c, char** out) {
  return guard([&] {
    require(c, "hardware graph");
    put(out, c->graph.to_edge_list());
  });
}

pq_status pq_embed(const char* qubo_text, const pq_chimera* hw, size_t tries, size_t runs, uint64_t seed,
                   char** runs_csv, char** best_out) {
  return guard([&] {
    require(hw, "hardware graph");
    if (runs == 0 || tries == 0) throw InputError("runs and tries must be positive");
    const Qubo qubo = qubo_from_text(qubo_text);
    const UndirectedGraph source = interaction_graph(qubo);
    FindEmbeddingOptions options;
    options.tries = tries;
    std::ostringstream csv;
    csv << "run,success,total,average,median,p65,p90,max\n";
    std::optional<Embedding> best;
    std::size_t best_run = 0;
    auto line = [&](const std::string& label, const std::optional<Embedding>& e) {
      csv << label << ',' << (e ? 1 : 0);
      if (e) {
        const auto m = embedding_metrics(*e);
        csv << ',' << m.total << ',' << m.average << ',' << m.median << ',' << m.p65 << ',' << m.p90 << ',' << m.max;
      } else {
        csv << ",,,,,,";
      }
      csv << '\n';
    };
    for (std::size_t r = 0; r < runs; ++r) {
      auto e = find_embedding(source, hw->graph, mix_seed(seed, r), options);
      line(std::to_string(r), e);
      if (e && (!best || e->total_qubits() < best->total_qubits())) {
        best = std::move(e);
        best_run = r;
      }
    }
    line(best ? "best:" + std::to_string(best_run) : std::string("best"), best);
    put(runs_csv, csv.str());
    if (best_out) *best_out = best ? dup(embedding_to_json(*best)) : nullptr;
  });
}

pq_status pq_solve(const char* qubo_text, const char* embedding_json, const pq_chimera* hw, double j_int,
                   const char* protocol_json, double ground_energy, char** stats_json) {
  return guard([&] {
    require(hw, "hardware graph");
    require(embedding_json, "embedding");
    const Qubo qubo = qubo_from_text(qubo_text);
    const Embedding embedding = embedding_from_json(embedding_json);
    const auto check = validate_embedding(interaction_graph(qubo), hw->graph, embedding);
    if (!check) throw InputError("embedding does not fit this QUBO and hardware: " + check.reason);
    if (!(j_int > 0.0)) throw InputError("J_int must be positive");
    AnnealProtocol protocol;
    if (protocol_json && *protocol_json) {
      // Reuse the sweep spec parser for the protocol keys.
      json p = json::parse(protocol_json);
      json wrapper = {{"protocol", p}};
      protocol = SweepSpec::from_json(wrapper.dump()).protocol;
      if (p.contains("seed")) protocol.seed = p["seed"].get<std::uint64_t>();
      if (!p.contains("anneals_per_gauge")) protocol.anneals_per_gauge = AnnealProtocol{}.anneals_per_gauge;
      if (!p.contains("num_gauges")) protocol.num_gauges = AnnealProtocol{}.num_gauges;
    }
    double ground = ground_energy;
    bool exact = false;
    if (std::isnan(ground)) {
      if (qubo.num_vars() <= 26) {
        ground = brute_force_ground(qubo.poly(), 1).energy;
        exact = true;
      } else {
        ground = 0.0;
      }
    }
    const RunStats stats = run_protocol(qubo, embedding, hw->graph, ground, j_int, protocol);
    json j = json::parse(stats.to_json());
    j["j_int"] = j_int;
    j["ground_energy"] = ground;
    j["ground_energy_exact"] = exact;
    put(stats_json, j.dump(2));
  });
}

pq_status pq_sweep(const char* spec_json, const char* kind, char** report_json) {
  return guard([&] {
    require(spec_json, "sweep spec");
    const SweepSpec spec = SweepSpec::from_json(spec_json);
    const std::string k = kind ? kind : "comparison";
    json report;
    report["kind"] = k;
    if (k == "comparison") {
      const auto mc = run_mapping_comparison(spec);
      report["summary"] = summary_json(mc.summary);
      report["best_j_int"] = best_json(mc.best);
    } else if (k == "jint") {
      MappingComparison mc;
      const JintTable t = run_jint_sweep(spec, &mc);
      report["table"] = t.to_csv();
      report["best_j_int"] = best_json(mc.best);
    } else if (k == "error-correction") {
      const auto ec = run_error_correction_comparison(spec);
      const auto& s = ec.stats;
      report["paired"] = {{"pairs", s.pairs},
                          {"improved", s.improved},
                          {"equal", s.equal},
                          {"worse", s.worse},
                          {"rescued", s.rescued},
                          {"median_r_raw", s.median_r_raw},
                          {"median_r_corrected", s.median_r_corrected},
                          {"median_speedup", s.median_speedup ? json(*s.median_speedup) : json(nullptr)},
                          {"sign_test_p", s.sign_test_p}};
    } else {
      throw InputError("unknown sweep kind '" + k + "' (comparison, jint, error-correction)");
    }
    if (!spec.output_dir.empty()) report["output_dir"] = spec.output_dir;
    put(report_json, report.dump(2));
  });
}

pq_status pq_arch_study(size_t max_k, const char* M_list, const char* L_list, size_t runs, uint64_t seed,
                        size_t threads, char** csv) {
  return guard([&] {
    const auto Ms = parse_sizes(str(M_list));
    const auto Ls = parse_sizes(str(L_list));
    if (Ms.empty() || Ls.empty()) throw InputError("M and L lists must be nonempty");
    ArchitectureStudyOptions options;
    options.runs = runs;
    options.seed = seed;
    options.threads = threads;
    put(csv, architecture_csv(run_architecture_study(max_k, Ms, Ls, options)));
  });
}

pq_status pq_summarize(const char* results_csv, int corrected, char** summary_csv, size_t* malformed) {
  return guard([&] {
    require(results_csv, "results CSV");
    std::istringstream in(results_csv);
    SummaryOptions options;
    options.corrected = corrected != 0;
    const Summary s = summarize_csv(in, options);
    std::ostringstream out;
    write_summary_csv(s, out);
    put(summary_csv, out.str());
    if (malformed) *malformed = s.malformed;
  });
}

}  // extern "C"
