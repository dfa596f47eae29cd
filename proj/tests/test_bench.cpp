/*
Copyright 2026 The gbnlearn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "gbnlearn/bench.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gbnlearn/stats.hpp"
#include "test_support.hpp"

namespace gbnlearn::bench {
namespace {

using testing::error_code_of;

const char* kSmall = R"({
  "graph": {"type": "tree", "n": 10},
  "methods": [{"method": "least_squares", "variance_method": "empirical"}],
  "sample_sizes": [1000],
  "repetitions": 1,
  "base_seed": 3
})";

std::string csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

ResultRow row(const std::string& method, std::size_t m, std::optional<double> kl, bool degenerate = false) {
  ResultRow r;
  r.method = method;
  r.m = m;
  r.kl_total = kl;
  r.degenerate = degenerate;
  return r;
}

TEST(Config, ParsesDefaultsAndNames) {
  const auto cfg = parse_config(R"({
    "graph": {"type": "er", "n": 20, "d": 2},
    "weight_range": [0.5, 1.5],
    "variance": {"type": "uniform", "lo": 0.5, "hi": 2},
    "scenario": {"type": "contaminated", "noise": "cauchy"},
    "methods": [
      {"method": "batch_avg", "batch_extra": 5, "variance_method": "mad"},
      {"method": "batch_avg", "variance_method": "mad"},
      {"name": "robust", "method": "cauchy_est_tree", "variance_method": "mad", "split_fraction": 0.25}
    ],
    "sample_sizes": [100, 200]
  })");
  EXPECT_EQ(cfg.graph.family, GraphSpec::Family::ErdosRenyi);
  EXPECT_EQ(cfg.methods[0].name, "batch_avg+5");
  EXPECT_EQ(cfg.methods[1].name, "batch_avg+20");
  EXPECT_EQ(cfg.methods[2].name, "robust");
  EXPECT_EQ(cfg.methods[2].fit.split_fraction, 0.25);
  EXPECT_EQ(cfg.scenario.contamination.noise_law, NoiseLaw::Cauchy);
  EXPECT_EQ(cfg.scenario.contamination.location, 1000.0);
  EXPECT_EQ(cfg.repetitions, 20u);
  EXPECT_EQ(cfg.weight_lo, 0.5);
}

TEST(Config, Rejections) {
  const char* bad[] = {
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "least_squares", "variance_method": "empirical"}], "sample_sizes": [10], "extra": 1})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "least_squares"}], "sample_sizes": [10]})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "least_squares", "variance_method": "empirical"}], "sample_sizes": [20, 10]})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "least_squares", "variance_method": "empirical"}, {"method": "least_squares", "variance_method": "mad"}], "sample_sizes": [10]})",
      R"({"graph": {"type": "ring", "n": 10}, "methods": [{"method": "least_squares", "variance_method": "empirical"}], "sample_sizes": [10]})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "ols", "variance_method": "empirical"}], "sample_sizes": [10]})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "least_squares", "variance_method": "empirical"}], "sample_sizes": [10], "repetitions": 0})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "batch_med", "batch_extra": 0, "variance_method": "empirical"}], "sample_sizes": [10]})",
      R"({"graph": {"type": "tree", "n": 10}, "scenario": {"type": "contaminated", "node_count": 11}, "methods": [{"method": "least_squares", "variance_method": "empirical"}], "sample_sizes": [10]})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"name": "a/b", "method": "least_squares", "variance_method": "empirical"}], "sample_sizes": [10]})",
      R"({"graph": {"type": "tree", "n": 10}, "methods": [{"method": "least_squares", "variance_method": "empirical"}], "sample_sizes": "10"})",
      R"({"graph": )",
  };
  for (const char* text : bad) {
    EXPECT_EQ(error_code_of([&] { parse_config(text); }), ErrorCode::ConfigInvalid) << text;
  }
  EXPECT_EQ(error_code_of([&] { load_config("/nonexistent/config.json"); }), ErrorCode::IoError);
}

TEST(Run, Cardinality) {
  EXPECT_EQ(run_experiment(parse_config(kSmall)).size(), 1u);
  auto cfg = parse_config(kSmall);
  cfg.repetitions = 3;
  cfg.sample_sizes = {100, 200};
  cfg.methods.push_back({"mad_ls", cfg.methods[0].fit});
  cfg.methods.back().fit.variance_method = VarianceMethod::Mad;
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 12u);
  // Sorted by (method position, m, rep).
  EXPECT_EQ(rows[0].method, "least_squares");
  EXPECT_EQ(rows[5].method, "least_squares");
  EXPECT_EQ(rows[5].m, 200u);
  EXPECT_EQ(rows[5].rep, 2u);
  EXPECT_EQ(rows[6].method, "mad_ls");
  EXPECT_EQ(rows[0].seed, repetition_seed(3, 0));
}

TEST(Run, ByteIdenticalCsv) {
  auto cfg = parse_config(kSmall);
  cfg.repetitions = 2;
  EXPECT_EQ(csv(run_experiment(cfg)), csv(run_experiment(cfg)));
}

TEST(Run, NestedPrefixes) {
  // The m = 200 row must equal a fit on the first 200 rows of the m = 400 data.
  auto cfg = parse_config(kSmall);
  cfg.sample_sizes = {200, 400};
  const auto both = run_experiment(cfg);
  cfg.sample_sizes = {400};
  const auto large = run_experiment(cfg);
  EXPECT_EQ(both[1].kl_total, large[0].kl_total);
  EXPECT_NE(both[0].kl_total, both[1].kl_total);
}

TEST(Run, ConsistencyOnTrees) {
  auto cfg = parse_config(R"({
    "graph": {"type": "tree", "n": 50},
    "methods": [{"method": "least_squares", "variance_method": "empirical"}],
    "sample_sizes": [1000, 4000],
    "repetitions": 20
  })");
  const auto rows = run_experiment(cfg);
  std::vector<double> small;
  std::vector<double> large;
  for (const auto& r : rows) (r.m == 1000 ? small : large).push_back(*r.kl_total);
  EXPECT_LT(stats::median(large), stats::median(small));
}

TEST(Run, ScenariosProduceRows) {
  for (const char* scenario : {R"({"type": "contaminated"})", R"({"type": "ill_conditioned", "node_count": 2})",
                               R"({"type": "agnostic", "remove_edges": 4})"}) {
    const std::string text = std::string(R"({"graph": {"type": "tree", "n": 30}, "scenario": )") + scenario +
                             R"(, "methods": [{"method": "cauchy_est_tree", "variance_method": "mad"},
                                              {"method": "empirical_mle", "variance_method": "empirical"}],
                                "sample_sizes": [500], "repetitions": 2})";
    const auto rows = run_experiment(parse_config(text));
    ASSERT_EQ(rows.size(), 4u) << scenario;
    for (const auto& r : rows) {
      if (!r.degenerate) {
        EXPECT_GE(*r.kl_total, 0.0);
      }
    }
  }
}

TEST(Run, NumericalFailuresBecomeDegenerateRows) {
  // Ill-conditioned node 1 is a near copy of node 0 scaled, so any node with
  // both as parents sees a singular parent block under cauchy_est.
  auto cfg = parse_config(R"({
    "graph": {"type": "er", "n": 6, "d": 6},
    "scenario": {"type": "ill_conditioned", "nodes": [1], "variance": 1e-30},
    "methods": [{"method": "cauchy_est", "variance_method": "empirical"}],
    "sample_sizes": [200],
    "repetitions": 3
  })");
  const auto rows = run_experiment(cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.degenerate);
    EXPECT_FALSE(r.kl_total.has_value());
  }
}

TEST(Summarize, Examples) {
  auto s = summarize({row("a", 10, 0.4)});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(*s[0].mean_kl, 0.4);
  EXPECT_DOUBLE_EQ(*s[0].median_kl, 0.4);
  EXPECT_DOUBLE_EQ(*s[0].iqr_kl, 0.0);

  s = summarize({row("a", 10, 0.1), row("a", 10, 0.2), row("a", 10, 0.9)});
  EXPECT_DOUBLE_EQ(*s[0].median_kl, 0.2);
  EXPECT_NEAR(*s[0].mean_kl, 0.4, 1e-15);

  s = summarize({row("a", 10, std::nullopt, true), row("a", 10, std::nullopt, true)});
  EXPECT_FALSE(s[0].mean_kl.has_value());
  EXPECT_FALSE(s[0].median_kl.has_value());
  EXPECT_EQ(s[0].degenerate_count, 2u);

  EXPECT_EQ(error_code_of([] { summarize({}); }), ErrorCode::EmptyInput);
}

TEST(Summarize, CellOrderAndExclusion) {
  const auto s = summarize({row("b", 20, 1.0), row("b", 10, 2.0), row("a", 10, 3.0), row("a", 10, 5.0, true)});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].method, "b");
  EXPECT_EQ(s[0].m, 10u);
  EXPECT_EQ(s[2].method, "a");
  EXPECT_EQ(*s[2].mean_kl, 3.0);
  EXPECT_EQ(s[2].degenerate_count, 1u);
}

TEST(Outputs, WritesAllFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "gbnlearn_test_bench";
  std::filesystem::remove_all(dir);
  auto cfg = parse_config(kSmall);
  cfg.sample_sizes = {100, 200};
  write_outputs(dir, run_experiment(cfg));
  for (const char* f : {"results.csv", "summary.csv", "plot_least_squares.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream results(dir / "results.csv");
  std::string header;
  std::getline(results, header);
  EXPECT_EQ(header, kResultsHeader);
  std::ifstream plot(dir / "plot_least_squares.csv");
  std::string line;
  int lines = 0;
  while (std::getline(plot, line)) ++lines;
  EXPECT_EQ(lines, 3);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace gbnlearn::bench
