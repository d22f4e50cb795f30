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

#include <cmath>
#include <filesystem>
#include <string>

#include "planqubo/planqubo.h"

namespace {

// Owns a string handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { pq_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("planqubo_capi_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(CApi, VersionAndErrors) {
  EXPECT_STRNE(pq_version(), "");
  pq_chimera* hw = nullptr;
  EXPECT_EQ(pq_chimera_new(8, 4, "1,x", &hw), PQ_ERR_INPUT);
  EXPECT_STRNE(pq_last_error(), "");
  EXPECT_EQ(pq_chimera_new(8, 4, "12,77,301", nullptr), PQ_ERR_INPUT);
}

TEST(CApi, Chimera) {
  pq_chimera* hw = nullptr;
  ASSERT_EQ(pq_chimera_new(8, 4, "12,77,301", &hw), PQ_OK);
  EXPECT_EQ(pq_chimera_num_usable(hw), 509u);
  Text edges;
  ASSERT_EQ(pq_chimera_edge_list(hw, &edges.p), PQ_OK);
  EXPECT_NE(edges.str().find("0 4"), std::string::npos);
  pq_chimera_free(hw);
}

TEST(CApi, GenerateCompileEmbedSolve) {
  const auto dir = scratch("pipeline");
  Text manifest;
  ASSERT_EQ(pq_generate("sched", 5, 2, 3, 1, dir.c_str(), &manifest.p), PQ_OK) << pq_last_error();
  EXPECT_NE(manifest.str().find("instance"), std::string::npos);

  pq_problem* prob = nullptr;
  ASSERT_EQ(pq_problem_read((dir / "instance_0000.json").c_str(), &prob), PQ_OK) << pq_last_error();
  pq_compiled* comp = nullptr;
  ASSERT_EQ(pq_compile(prob, nullptr, "direct", 0, 1, &comp), PQ_OK) << pq_last_error();
  EXPECT_EQ(pq_compiled_num_vars(comp), 15u);
  Text qubo, legend, dimacs;
  ASSERT_EQ(pq_compiled_qubo_text(comp, &qubo.p), PQ_OK);
  ASSERT_EQ(pq_compiled_legend_json(comp, &legend.p), PQ_OK);
  EXPECT_EQ(pq_compiled_dimacs(comp, &dimacs.p), PQ_ERR_INPUT);  // not a CNF compile

  pq_chimera* hw = nullptr;
  ASSERT_EQ(pq_chimera_new(4, 4, "", &hw), PQ_OK);
  Text runs, best;
  ASSERT_EQ(pq_embed(qubo.p, hw, 10, 2, 1, &runs.p, &best.p), PQ_OK) << pq_last_error();
  ASSERT_NE(best.p, nullptr);
  Text stats;
  ASSERT_EQ(pq_solve(qubo.p, best.p, hw, 1.2, "{\"anneals_per_gauge\": 50, \"num_gauges\": 2}", NAN, &stats.p),
            PQ_OK)
      << pq_last_error();
  EXPECT_NE(stats.str().find("\"ground_energy_exact\": true"), std::string::npos);
  EXPECT_EQ(pq_solve(qubo.p, best.p, hw, -1.0, nullptr, 0.0, &stats.p), PQ_ERR_INPUT);

  pq_chimera_free(hw);
  pq_compiled_free(comp);
  pq_problem_free(prob);
  std::filesystem::remove_all(dir);
}

TEST(CApi, CnfAndReduce) {
  const auto dir = scratch("cnf");
  ASSERT_EQ(pq_generate("nav", 3, 1, 5, 1, dir.c_str(), nullptr), PQ_OK) << pq_last_error();
  pq_problem* prob = nullptr;
  ASSERT_EQ(pq_problem_read((dir / "instance_0000.json").c_str(), &prob), PQ_OK);
  pq_compiled* comp = nullptr;
  ASSERT_EQ(pq_compile(prob, "navigation", "cnf", 0, 1, &comp), PQ_OK) << pq_last_error();
  Text dimacs, qubo, cert;
  ASSERT_EQ(pq_compiled_dimacs(comp, &dimacs.p), PQ_OK);
  ASSERT_EQ(pq_reduce_dimacs(dimacs.p, &qubo.p, &cert.p), PQ_OK) << pq_last_error();
  EXPECT_NE(qubo.str().find("p qubo"), std::string::npos);
  EXPECT_NE(cert.str().find("substitutions"), std::string::npos);
  EXPECT_EQ(pq_reduce_dimacs("p cnf x", &qubo.p, nullptr), PQ_ERR_INPUT);
  pq_compiled_free(comp);
  pq_problem_free(prob);
  std::filesystem::remove_all(dir);
}

TEST(CApi, StatusCodes) {
  pq_problem* prob = nullptr;
  EXPECT_EQ(pq_problem_read("/nonexistent/instance.json", &prob), PQ_ERR_IO);
  // Exact solvability filtering is limited to 20 vertices.
  const auto dir = scratch("status");
  EXPECT_EQ(pq_generate("nav", 24, 1, 1, 1, dir.c_str(), nullptr), PQ_ERR_CAPABILITY);
  EXPECT_EQ(pq_generate("rover", 5, 1, 1, 1, dir.c_str(), nullptr), PQ_ERR_INPUT);
  std::filesystem::remove_all(dir);
}

TEST(CApi, Summarize) {
  const std::string csv =
      "size,instance,instance_seed,mapping,j_int,qubo_vars,couplings,embed_successes,embedded,embedding_size,"
      "avg_component,median_component,p65_component,p90_component,max_component,samples,hits_raw,hits_corrected,"
      "r_raw,r_corrected,k_raw,k_corrected,tts_raw_us,tts_corrected_us,censored,invalid_hits\n"
      "8,0,1,direct,1.2,24,40,11,1,60,2.5,2,3,4,5,1000,10,10,0.01,0.01,458,458,9160,9160,0,0\n"
      "garbage\n";
  Text out;
  std::size_t malformed = 0;
  ASSERT_EQ(pq_summarize(csv.c_str(), 0, &out.p, &malformed), PQ_OK) << pq_last_error();
  EXPECT_EQ(malformed, 1u);
  EXPECT_NE(out.str().find("8,direct,1.2"), std::string::npos);
}

TEST(CApi, ArchitectureStudy) {
  Text csv;
  ASSERT_EQ(pq_arch_study(2, "1", "2", 1, 1, 1, &csv.p), PQ_OK) << pq_last_error();
  EXPECT_NE(csv.str().find("1,1,2,1,1,1"), std::string::npos);
}
