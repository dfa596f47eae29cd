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

// Exercises the shared library through its C header only.

#include "gbnlearn/gbnlearn.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

TEST(CApi, DagLifecycleAndErrors) {
  const size_t parents[] = {0, 1};
  const size_t children[] = {1, 0};
  gbn_dag_t* dag = nullptr;
  EXPECT_EQ(gbn_dag_create(&dag, 2, parents, children, 2), GBN_ERROR_CYCLE_DETECTED);
  EXPECT_EQ(dag, nullptr);
  EXPECT_NE(std::string(gbn_last_error()).find("cycle"), std::string::npos);

  ASSERT_EQ(gbn_dag_create(&dag, 3, parents, children, 1), GBN_OK);
  EXPECT_STREQ(gbn_last_error(), "");
  size_t n = 0;
  size_t e = 0;
  int poly = 0;
  EXPECT_EQ(gbn_dag_node_count(dag, &n), GBN_OK);
  EXPECT_EQ(gbn_dag_edge_count(dag, &e), GBN_OK);
  EXPECT_EQ(gbn_dag_is_polytree(dag, &poly), GBN_OK);
  EXPECT_EQ(n, 3u);
  EXPECT_EQ(e, 1u);
  EXPECT_EQ(poly, 1);

  size_t order[3];
  EXPECT_EQ(gbn_dag_topological_order(dag, order, 2), GBN_ERROR_BUFFER_TOO_SMALL);
  EXPECT_EQ(gbn_dag_topological_order(dag, order, 3), GBN_OK);
  EXPECT_EQ(order[0], 0u);
  EXPECT_EQ(order[1], 1u);
  EXPECT_EQ(order[2], 2u);

  EXPECT_EQ(gbn_dag_node_count(nullptr, &n), GBN_ERROR_NULL_POINTER);
  EXPECT_EQ(gbn_dag_create(&dag, 2, nullptr, nullptr, 1), GBN_ERROR_NULL_POINTER);
  gbn_dag_destroy(dag);
  gbn_dag_destroy(nullptr);
}

TEST(CApi, GeneratorsAndEdgeRemoval) {
  gbn_dag_t* tree = nullptr;
  ASSERT_EQ(gbn_dag_random_tree(&tree, 100, 5), GBN_OK);
  gbn_dag_t* cut = nullptr;
  ASSERT_EQ(gbn_dag_remove_random_edges(&cut, tree, 4, 6), GBN_OK);
  size_t e = 0;
  gbn_dag_edge_count(cut, &e);
  EXPECT_EQ(e, 95u);
  gbn_dag_t* er = nullptr;
  EXPECT_EQ(gbn_dag_random_er(&er, 10, 0.0, 1), GBN_ERROR_INVALID_ARGUMENT);
  EXPECT_EQ(gbn_dag_random_tree(&er, 1, 1), GBN_ERROR_INVALID_ARGUMENT);
  gbn_dag_destroy(cut);
  gbn_dag_destroy(tree);
}

TEST(CApi, ModelSampleFitEval) {
  gbn_dag_t* dag = nullptr;
  ASSERT_EQ(gbn_dag_random_er(&dag, 20, 3.0, 11), GBN_OK);
  gbn_model_t* truth = nullptr;
  ASSERT_EQ(gbn_model_random(&truth, dag, 1.0, 2.0, nullptr, 12), GBN_OK);

  gbn_samples_t* samples = nullptr;
  ASSERT_EQ(gbn_samples_generate(&samples, truth, 20000, 13, nullptr), GBN_OK);
  size_t m = 0;
  size_t n = 0;
  gbn_samples_shape(samples, &m, &n);
  EXPECT_EQ(m, 20000u);
  EXPECT_EQ(n, 20u);

  gbn_fit_config cfg;
  gbn_fit_config_default(&cfg);
  EXPECT_EQ(cfg.method, GBN_METHOD_LEAST_SQUARES);
  gbn_model_t* est = nullptr;
  ASSERT_EQ(gbn_fit(&est, dag, samples, &cfg), GBN_OK) << gbn_last_error();

  gbn_eval_report report;
  std::vector<double> per_node(20);
  ASSERT_EQ(gbn_eval(truth, est, &report, per_node.data(), per_node.size()), GBN_OK);
  EXPECT_GT(report.kl_total, 0.0);
  EXPECT_LT(report.kl_total, 0.05);
  double sum = 0.0;
  for (double t : per_node) sum += t;
  EXPECT_EQ(sum, report.kl_total);
  EXPECT_EQ(gbn_eval(truth, est, &report, per_node.data(), 3), GBN_ERROR_BUFFER_TOO_SMALL);

  gbn_eval_report cov_report;
  ASSERT_EQ(gbn_eval_covariance(truth, est, &cov_report), GBN_OK);
  EXPECT_NEAR(cov_report.kl_total, report.kl_total, 1e-8 * std::max(1.0, report.kl_total));

  ASSERT_EQ(gbn_eval(truth, truth, &report, nullptr, 0), GBN_OK);
  EXPECT_EQ(report.kl_total, 0.0);
  EXPECT_EQ(report.tv_upper, 0.0);

  gbn_model_destroy(est);
  gbn_samples_destroy(samples);
  gbn_model_destroy(truth);
  gbn_dag_destroy(dag);
}

TEST(CApi, ChainCovarianceAndCoefficients) {
  const size_t parents[] = {0};
  const size_t children[] = {1};
  gbn_dag_t* dag = nullptr;
  ASSERT_EQ(gbn_dag_create(&dag, 2, parents, children, 1), GBN_OK);
  gbn_model_t* model = nullptr;
  ASSERT_EQ(gbn_model_random(&model, dag, 1.0, 2.0, nullptr, 3), GBN_OK);
  double a = 0.0;
  size_t len = 0;
  ASSERT_EQ(gbn_model_coefficients(model, 1, &a, 1, &len), GBN_OK);
  EXPECT_EQ(len, 1u);
  EXPECT_EQ(gbn_model_coefficients(model, 0, nullptr, 0, &len), GBN_OK);
  EXPECT_EQ(len, 0u);
  EXPECT_EQ(gbn_model_coefficients(model, 9, &a, 1, &len), GBN_ERROR_INVALID_INDEX);
  double cov[4];
  ASSERT_EQ(gbn_model_covariance(model, cov, 4), GBN_OK);
  EXPECT_DOUBLE_EQ(cov[1], a);
  EXPECT_DOUBLE_EQ(cov[3], a * a + 1.0);
  gbn_model_destroy(model);
  gbn_dag_destroy(dag);
}

TEST(CApi, NumericalFailuresAreClassified) {
  // Duplicate parent values make the CauchyEst covariance singular.
  const size_t parents[] = {0, 1};
  const size_t children[] = {2, 2};
  gbn_dag_t* dag = nullptr;
  ASSERT_EQ(gbn_dag_create(&dag, 3, parents, children, 2), GBN_OK);
  std::vector<double> data;
  for (int r = 0; r < 40; ++r) {
    const double x = r % 7 - 3.0;
    data.insert(data.end(), {x, x, x + 0.5 * (r % 3)});
  }
  gbn_samples_t* samples = nullptr;
  ASSERT_EQ(gbn_samples_create(&samples, 40, 3, data.data()), GBN_OK);
  gbn_fit_config cfg;
  gbn_fit_config_default(&cfg);
  ASSERT_EQ(gbn_method_from_name("cauchy_est", &cfg.method), GBN_OK);
  gbn_model_t* est = nullptr;
  const int rc = gbn_fit(&est, dag, samples, &cfg);
  EXPECT_EQ(rc, GBN_ERROR_CHOLESKY_FAILED);
  EXPECT_TRUE(gbn_error_is_numerical(rc));
  EXPECT_STREQ(gbn_error_name(rc), "CholeskyFailed");
  EXPECT_EQ(est, nullptr);
  EXPECT_FALSE(gbn_error_is_numerical(GBN_ERROR_CONFIG_INVALID));
  EXPECT_EQ(gbn_method_from_name("nope", &cfg.method), GBN_ERROR_INVALID_ARGUMENT);
  gbn_samples_destroy(samples);
  gbn_dag_destroy(dag);
}

TEST(CApi, DegenerateFitStillReturnsModel) {
  const size_t parents[] = {0};
  const size_t children[] = {1};
  gbn_dag_t* dag = nullptr;
  ASSERT_EQ(gbn_dag_create(&dag, 2, parents, children, 1), GBN_OK);
  std::vector<double> data;
  for (int r = 1; r <= 20; ++r) data.insert(data.end(), {double(r), 3.0 * r});
  gbn_samples_t* samples = nullptr;
  ASSERT_EQ(gbn_samples_create(&samples, 20, 2, data.data()), GBN_OK);
  gbn_fit_config cfg;
  gbn_fit_config_default(&cfg);
  gbn_model_t* est = nullptr;
  EXPECT_EQ(gbn_fit(&est, dag, samples, &cfg), GBN_ERROR_DEGENERATE_FIT);
  ASSERT_NE(est, nullptr);
  double v = 0.0;
  gbn_model_variance(est, 1, &v);
  EXPECT_EQ(v, 1e-300);
  gbn_model_destroy(est);
  gbn_samples_destroy(samples);
  gbn_dag_destroy(dag);
}

TEST(CApi, FilesAndBench) {
  const auto dir = std::filesystem::temp_directory_path() / "gbnlearn_test_capi";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  gbn_dag_t* dag = nullptr;
  ASSERT_EQ(gbn_dag_random_tree(&dag, 8, 1), GBN_OK);
  gbn_model_t* model = nullptr;
  ASSERT_EQ(gbn_model_random(&model, dag, 1.0, 2.0, nullptr, 2), GBN_OK);
  gbn_contamination_spec spec{0.1, 2, GBN_NOISE_CAUCHY, 1000.0, 1.0, 7};
  gbn_samples_t* samples = nullptr;
  ASSERT_EQ(gbn_samples_generate(&samples, model, 50, 3, &spec), GBN_OK);

  const std::string mpath = (dir / "model.txt").string();
  const std::string spath = (dir / "samples.csv").string();
  ASSERT_EQ(gbn_model_save(model, mpath.c_str()), GBN_OK);
  ASSERT_EQ(gbn_samples_save(samples, spath.c_str()), GBN_OK);
  gbn_model_t* loaded = nullptr;
  ASSERT_EQ(gbn_model_load(&loaded, mpath.c_str()), GBN_OK);
  gbn_eval_report report;
  ASSERT_EQ(gbn_eval(model, loaded, &report, nullptr, 0), GBN_OK);
  EXPECT_EQ(report.kl_total, 0.0);
  gbn_samples_t* back = nullptr;
  ASSERT_EQ(gbn_samples_load(&back, spath.c_str()), GBN_OK);
  std::vector<double> a(400);
  std::vector<double> b(400);
  gbn_samples_copy(samples, a.data(), a.size());
  gbn_samples_copy(back, b.data(), b.size());
  EXPECT_EQ(a, b);
  EXPECT_EQ(gbn_model_load(&loaded, (dir / "missing.txt").string().c_str()), GBN_ERROR_IO);

  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"graph": {"type": "tree", "n": 10},
    "methods": [{"method": "least_squares", "variance_method": "empirical"}],
    "sample_sizes": [200], "repetitions": 2})";
  const auto out = (dir / "out").string();
  ASSERT_EQ(gbn_bench_run(cfg.string().c_str(), out.c_str(), 1, 99), GBN_OK) << gbn_last_error();
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "results.csv"));
  std::ofstream(dir / "bad.json") << R"({"graph": {}})";
  EXPECT_EQ(gbn_bench_run((dir / "bad.json").string().c_str(), out.c_str(), 0, 0), GBN_ERROR_CONFIG_INVALID);

  gbn_samples_destroy(back);
  gbn_model_destroy(loaded);
  gbn_samples_destroy(samples);
  gbn_model_destroy(model);
  gbn_dag_destroy(dag);
  std::filesystem::remove_all(dir);
}

}  // namespace
