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

#include <sstream>

#include "planqubo/bench.hpp"
#include "planqubo/errors.hpp"

using namespace planqubo;

namespace {

InstanceResult row(std::size_t instance, bool solved, double tts = 100.0, double j = 1.2) {
  InstanceResult r;
  r.size = 8;
  r.instance = instance;
  r.instance_seed = 1000 + instance;
  r.j_int = j;
  r.qubo_vars = 24;
  r.couplings = 40;
  r.embed_successes = 11;
  r.embedded = true;
  r.embedding.total = 60;
  r.embedding.average = 2.5;
  r.embedding.median = 2;
  r.embedding.p65 = 3;
  r.embedding.p90 = 4;
  r.embedding.max = 5;
  r.stats.num_samples = 1000;
  if (solved) {
    r.stats.hits_raw = r.stats.hits_corrected = 10;
    r.stats.r_raw = r.stats.r_corrected = 0.01;
    r.stats.tts_raw = r.stats.tts_corrected = TtsResult{false, tts / 20, tts};
  } else {
    r.stats.tts_raw.censored = r.stats.tts_corrected.censored = true;
  }
  return r;
}

std::vector<InstanceResult> batch(std::size_t total, std::size_t censored) {
  std::vector<InstanceResult> rows;
  for (std::size_t i = 0; i < total; ++i) rows.push_back(row(i, i >= censored, 100.0 + static_cast<double>(i)));
  return rows;
}

SweepSpec tiny() {
  auto s = SweepSpec::desk(Family::Scheduling);
  s.sizes = {5};
  s.instances = 2;
  s.j_int_grid = {1.0, 1.5};
  s.protocol.anneals_per_gauge = 40;
  s.protocol.num_gauges = 2;
  s.embed_runs = 2;
  s.mappings = {MappingKind::Direct};
  s.threads = 1;
  return s;
}

}  // namespace

TEST(Summary, HalfRule) {
  auto s = summarize(batch(100, 49));
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(s.rows[0].fraction_solved, 0.51);
  s = summarize(batch(100, 51));
  EXPECT_TRUE(s.rows.empty());
  EXPECT_EQ(s.omitted.size(), 1u);
  EXPECT_TRUE(summarize(batch(100, 50)).rows.empty());
}

TEST(Summary, IndeterminateUpperPercentile) {
  auto s = summarize(batch(100, 0));
  ASSERT_TRUE(s.rows[0].p65_tts_us.has_value());
  // 40 solved would be omitted by the half rule; 60 solved is reported with
  // the 65th percentile undefined.
  s = summarize(batch(100, 40));
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_FALSE(s.rows[0].p65_tts_us.has_value());
  std::ostringstream out;
  write_summary_csv(s, out);
  EXPECT_NE(out.str().find("indeterminate"), std::string::npos);
  s = summarize(batch(100, 35));
  EXPECT_TRUE(s.rows[0].p65_tts_us.has_value());
}

TEST(Summary, Percentiles) {
  // Solved TTS 100..109, nearest rank.
  const auto s = summarize(batch(10, 0));
  EXPECT_DOUBLE_EQ(s.rows[0].median_tts_us, 104.5);
  EXPECT_DOUBLE_EQ(s.rows[0].p35_tts_us, 103.0);
  EXPECT_DOUBLE_EQ(*s.rows[0].p65_tts_us, 106.0);
}

TEST(Summary, UnembeddedCountsAsFailure) {
  auto rows = batch(4, 0);
  rows[0].embedded = false;
  rows[0].stats = RunStats{};
  rows[0].stats.tts_raw.censored = rows[0].stats.tts_corrected.censored = true;
  const auto s = summarize(rows);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].instances, 3u);
  EXPECT_EQ(s.rows[0].embed_failures, 1u);
}

TEST(ResultsCsv, RoundTripAndMalformed) {
  const auto rows = batch(6, 2);
  std::ostringstream out;
  write_results_csv(rows, out);
  std::string text = out.str();
  text += "8,not,a,row\n";
  text += "8,0,1,direct,1.2,24,40,11,1,60,2.5,2,3,4,5,1000,0,0,0,0,,,,,1,0\n";  // consistent censored row
  text += "8,0,1,direct,1.2,24,40,11,1,60,2.5,2,3,4,5,1000,3,3,0,0,,,,,1,0\n";  // hits on a censored row
  std::istringstream in(text);
  std::size_t malformed = 0;
  const auto back = read_results_csv(in, &malformed);
  EXPECT_EQ(back.size(), 7u);
  EXPECT_EQ(malformed, 2u);
  std::ostringstream again;
  write_results_csv(std::vector<InstanceResult>(back.begin(), back.begin() + 6), again);
  EXPECT_EQ(again.str(), out.str());
  std::istringstream in2(text);
  EXPECT_EQ(summarize_csv(in2).malformed, 2u);
}

TEST(BestJint, MinimalMedianTieSmaller) {
  std::vector<InstanceResult> rows;
  for (std::size_t i = 0; i < 3; ++i) {
    rows.push_back(row(i, true, 300, 1.0));
    rows.push_back(row(i, true, 200, 1.2));
    rows.push_back(row(i, true, 200, 1.4));
  }
  const auto best = best_jint(summarize(rows));
  ASSERT_EQ(best.size(), 1u);
  EXPECT_DOUBLE_EQ(*best[0].j_int, 1.2);
}

TEST(JintTable, CensoredColumnAndSingleValue) {
  std::vector<InstanceResult> rows;
  for (std::size_t i = 0; i < 3; ++i) {
    rows.push_back(row(i, true, 100, 1.0));
    auto r = row(i, false, 0, 1.0);
    r.size = 9;
    rows.push_back(r);
  }
  const auto t = jint_table(summarize(rows), MappingKind::Direct, {8, 9}, {1.0});
  ASSERT_EQ(t.cells.size(), 1u);
  ASSERT_EQ(t.censored.size(), 2u);
  EXPECT_FALSE(t.censored[0]);
  EXPECT_TRUE(t.censored[1]);
  EXPECT_EQ(t.best_row[0], 0u);
  EXPECT_NE(t.to_csv().find("censored"), std::string::npos);
}

TEST(Spec, JsonRoundTripAndCheck) {
  auto s = tiny();
  s.mappings = {MappingKind::Cnf, MappingKind::Direct};
  const auto back = SweepSpec::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
  s.j_int_grid.clear();
  EXPECT_THROW(s.check(), InputError);
  EXPECT_THROW(SweepSpec::from_json("[1,2]"), InputError);
}

TEST(Comparison, EmptySizesGiveHeaderOnly) {
  auto s = tiny();
  s.sizes.clear();
  const auto c = run_mapping_comparison(s);
  EXPECT_TRUE(c.rows.empty());
  std::ostringstream out;
  write_results_csv(c.rows, out);
  EXPECT_EQ(out.str(), results_csv_header() + "\n");
}

TEST(Comparison, TinyRunIsDeterministicAndValid) {
  const auto a = run_mapping_comparison(tiny());
  auto spec = tiny();
  spec.threads = 2;
  const auto b = run_mapping_comparison(spec);
  std::ostringstream sa, sb;
  write_results_csv(a.rows, sa);
  write_results_csv(b.rows, sb);
  EXPECT_EQ(sa.str(), sb.str());
  ASSERT_EQ(a.rows.size(), 4u);
  for (const auto& r : a.rows) {
    EXPECT_EQ(r.qubo_vars, 15u);
    EXPECT_EQ(r.invalid_hits, 0u);
    EXPECT_GE(r.stats.hits_corrected, r.stats.hits_raw);
  }
}

TEST(Comparison, DirectMapIsSmallest) {
  auto s = tiny();
  s.sizes = {8};
  s.instances = 1;
  s.j_int_grid = {1.2};
  s.protocol.anneals_per_gauge = 10;
  s.protocol.num_gauges = 1;
  s.mappings = {MappingKind::TimeSlice, MappingKind::Cnf, MappingKind::Direct};
  const auto c = run_mapping_comparison(s);
  ASSERT_EQ(c.rows.size(), 3u);
  std::size_t direct = 0, other = SIZE_MAX;
  for (const auto& r : c.rows) {
    if (r.mapping == MappingKind::Direct) direct = r.qubo_vars;
    else other = std::min(other, r.qubo_vars);
  }
  EXPECT_EQ(direct, 24u);
  EXPECT_LT(direct, other);
}

TEST(Architecture, TrivialAndPigeonhole) {
  ArchitectureStudyOptions o;
  o.runs = 2;
  const auto rows = run_architecture_study(3, {1}, {2}, o);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].k, 1u);
  EXPECT_EQ(rows[0].successes, 2u);
  EXPECT_EQ(rows[0].min_size, 1u);
  EXPECT_EQ(rows[2].k, 3u);  // 9 vertices on 4 qubits
  EXPECT_EQ(rows[2].successes, 0u);
  EXPECT_EQ(rows[2].min_size, 0u);
  EXPECT_GE(largest_reliable_k(rows, 1, 2), 1u);
  EXPECT_LT(largest_reliable_k(rows, 1, 2), 3u);
  EXPECT_NE(architecture_csv(rows).find("k,M,L"), std::string::npos);
}

TEST(ErrorCorrection, PairedStatistics) {
  std::vector<PairedResult> pairs(5);
  for (std::size_t i = 0; i < 5; ++i) {
    pairs[i].r_raw = 0.1;
    pairs[i].r_corrected = i < 4 ? 0.2 : 0.1;
    pairs[i].tts_raw = expected_tts(pairs[i].r_raw, 20);
    pairs[i].tts_corrected = expected_tts(pairs[i].r_corrected, 20);
  }
  pairs[0].r_raw = 0;
  pairs[0].tts_raw = expected_tts(0, 20);
  const auto s = paired_statistics(pairs);
  EXPECT_EQ(s.pairs, 5u);
  EXPECT_EQ(s.improved, 4u);
  EXPECT_EQ(s.equal, 1u);
  EXPECT_EQ(s.worse, 0u);
  EXPECT_EQ(s.rescued, 1u);
  EXPECT_NEAR(s.sign_test_p, 0.125, 1e-12);  // 2 * 0.5^4
  ASSERT_TRUE(s.median_speedup.has_value());
}
