/* Copyright 2026 The planqubo Authors

      Licensed under the Apache License, Version 2.0 (the "License");
      you may not use this file except in compliance with the License.
      You may obtain a copy of the License at

          http://www.apache.org/licenses/LICENSE-2.0

      Unless required by applicable law or agreed to in writing, software
      distributed under the License is distributed on an "AS IS" BASIS,
      WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
      See the License for the specific language governing permissions and
      limitations under the License. */

/* C interface to planqubo. Every call returns a status; on failure the
   message is available from pq_last_error() on the same thread. Strings
   handed out through char** must be released with pq_string_free. */

#ifndef PLANQUBO_H
#define PLANQUBO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PQ_API __declspec(dllexport)
#else
#define PQ_API __attribute__((visibility("default")))
#endif

typedef enum {
  PQ_OK = 0,
  PQ_ERR_INPUT = 1,      /* malformed arguments or files */
  PQ_ERR_CAPABILITY = 2, /* beyond what an exact routine supports */
  PQ_ERR_SEMANTIC = 3,   /* a domain rule was violated */
  PQ_ERR_IO = 4,
  PQ_ERR_INTERNAL = 5
} pq_status;

typedef struct pq_problem pq_problem;
typedef struct pq_compiled pq_compiled;
typedef struct pq_chimera pq_chimera;

PQ_API const char* pq_version(void);
PQ_API const char* pq_last_error(void);
PQ_API void pq_string_free(char* s);

/* Writes instance_XXXX.json files and manifest.csv to out_dir; the manifest
   text is also returned. family: "nav"/"navigation"/"sched"/"scheduling". */
PQ_API pq_status pq_generate(const char* family, size_t n, size_t count, uint64_t seed, int filter_solvable,
                             const char* out_dir, char** manifest_csv);

PQ_API pq_status pq_problem_read(const char* path, pq_problem** out);
PQ_API void pq_problem_free(pq_problem* p);

/* family may be NULL (detected from the problem); horizon 0 picks the
   family default. mapping: "timeslice", "cnf" or "direct". */
PQ_API pq_status pq_compile(const pq_problem* problem, const char* family, const char* mapping, size_t horizon,
                            int simplify, pq_compiled** out);
PQ_API void pq_compiled_free(pq_compiled* c);
PQ_API size_t pq_compiled_num_vars(const pq_compiled* c);
PQ_API pq_status pq_compiled_qubo_text(const pq_compiled* c, char** out);
PQ_API pq_status pq_compiled_legend_json(const pq_compiled* c, char** out);
/* CNF mapping only: the intermediate formula in DIMACS form. */
PQ_API pq_status pq_compiled_dimacs(const pq_compiled* c, char** out);

/* DIMACS CNF -> penalty PUBO -> quadratic QUBO. The certificate lists the
   ancilla substitutions. Either output pointer may be NULL. */
PQ_API pq_status pq_reduce_dimacs(const char* dimacs, char** qubo_text, char** certificate_json);

/* broken: comma separated qubit indices, may be NULL or empty. */
PQ_API pq_status pq_chimera_new(size_t M, size_t L, const char* broken, pq_chimera** out);
PQ_API void pq_chimera_free(pq_chimera* c);
PQ_API size_t pq_chimera_num_usable(const pq_chimera* c);
PQ_API pq_status pq_chimera_edge_list(const pq_chimera* c, char** out);

/* Runs the heuristic embedder `runs` times on the QUBO interaction graph.
   runs_csv has one line per run (run,success,total,average,median,p65,p90,
   max) and a final "best" line; best_json is the smallest embedding or
   NULL when every run failed. */
PQ_API pq_status pq_embed(const char* qubo_text, const pq_chimera* hw, size_t tries, size_t runs, uint64_t seed,
                          char** runs_csv, char** best_json);

/* protocol_json may be NULL; keys as in the sweep spec's "protocol" object
   plus "seed". Ground energy NaN: brute force when small enough, else 0. */
PQ_API pq_status pq_solve(const char* qubo_text, const char* embedding_json, const pq_chimera* hw, double j_int,
                          const char* protocol_json, double ground_energy, char** stats_json);

/* kind: "comparison", "jint" or "error-correction". Returns a JSON report;
   CSV files land in the spec's output_dir. */
PQ_API pq_status pq_sweep(const char* spec_json, const char* kind, char** report_json);

/* M_list, L_list: comma separated. Returns the study CSV. */
PQ_API pq_status pq_arch_study(size_t max_k, const char* M_list, const char* L_list, size_t runs, uint64_t seed,
                               size_t threads, char** csv);

/* Summarizes a per-instance results CSV. malformed may be NULL. */
PQ_API pq_status pq_summarize(const char* results_csv, int corrected, char** summary_csv, size_t* malformed);

#ifdef __cplusplus
}
#endif

#endif /* PLANQUBO_H */
