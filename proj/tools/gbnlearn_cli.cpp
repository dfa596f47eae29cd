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

// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 usage error, 2 data/config error, 3 numerical
// failure of a single fit or evaluation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gbnlearn/gbnlearn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct DagDeleter {
  void operator()(gbn_dag_t* p) const { gbn_dag_destroy(p); }
};
struct ModelDeleter {
  void operator()(gbn_model_t* p) const { gbn_model_destroy(p); }
};
struct SamplesDeleter {
  void operator()(gbn_samples_t* p) const { gbn_samples_destroy(p); }
};
using DagPtr = std::unique_ptr<gbn_dag_t, DagDeleter>;
using ModelPtr = std::unique_ptr<gbn_model_t, ModelDeleter>;
using SamplesPtr = std::unique_ptr<gbn_samples_t, SamplesDeleter>;

// Thrown to unwind with an exit code once the diagnostic has been printed.
struct Exit {
  int code;
};

void check(int rc, const std::string& context) {
  if (rc == GBN_OK) return;
  std::cerr << "gbnlearn: " << context << ": " << gbn_error_name(rc) << ": " << gbn_last_error() << '\n';
  throw Exit{gbn_error_is_numerical(rc) ? kExitNumerical : kExitData};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct GenerateArgs {
  std::string graph = "tree";
  std::size_t n = 100;
  double d = 5.0;
  std::size_t m = 1000;
  std::uint64_t seed = 0;
  double weight_lo = 1.0;
  double weight_hi = 2.0;
  std::vector<std::size_t> ill_nodes;
  double ill_variance = 1e-20;
  double contaminate_fraction = 0.0;
  std::size_t contaminate_nodes = 0;
  std::string noise = "gaussian";
  std::string out_dir = ".";
};

int run_generate(const GenerateArgs& a) {
  gbn_dag_t* raw_dag = nullptr;
  if (a.graph == "tree") {
    check(gbn_dag_random_tree(&raw_dag, a.n, a.seed), "random tree");
  } else {
    check(gbn_dag_random_er(&raw_dag, a.n, a.d, a.seed), "random ER graph");
  }
  DagPtr dag(raw_dag);

  gbn_variance_spec variances{};
  variances.kind = GBN_VARIANCE_UNIT;
  if (!a.ill_nodes.empty()) {
    variances.kind = GBN_VARIANCE_ILL_CONDITIONED;
    variances.ill_nodes = a.ill_nodes.data();
    variances.ill_node_count = a.ill_nodes.size();
    variances.tiny_variance = a.ill_variance;
  }
  gbn_model_t* raw_model = nullptr;
  check(gbn_model_random(&raw_model, dag.get(), a.weight_lo, a.weight_hi, &variances, a.seed + 1), "random model");
  ModelPtr model(raw_model);

  gbn_samples_t* raw_samples = nullptr;
  if (a.contaminate_fraction > 0.0 && a.contaminate_nodes > 0) {
    gbn_contamination_spec spec{};
    spec.sample_fraction = a.contaminate_fraction;
    spec.node_count = a.contaminate_nodes;
    spec.noise_law = a.noise == "cauchy" ? GBN_NOISE_CAUCHY : GBN_NOISE_GAUSSIAN;
    spec.location = 1000.0;
    spec.scale = 1.0;
    spec.seed = a.seed + 3;
    check(gbn_samples_generate(&raw_samples, model.get(), a.m, a.seed + 2, &spec), "sampling");
  } else {
    check(gbn_samples_generate(&raw_samples, model.get(), a.m, a.seed + 2, nullptr), "sampling");
  }
  SamplesPtr samples(raw_samples);

  const std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto dag_path = (dir / "dag.txt").string();
  const auto model_path = (dir / "model.txt").string();
  const auto samples_path = (dir / "samples.csv").string();
  check(gbn_dag_save(dag.get(), dag_path.c_str()), "writing DAG");
  check(gbn_model_save(model.get(), model_path.c_str()), "writing model");
  check(gbn_samples_save(samples.get(), samples_path.c_str()), "writing samples");
  std::cout << "wrote " << dag_path << ", " << model_path << ", " << samples_path << '\n';
  return kExitOk;
}

struct FitArgs {
  std::string dag;
  std::string samples;
  std::string method = "least_squares";
  std::size_t batch_extra = 20;
  double split = 0.5;
  std::string variance_method = "empirical";
  std::string out = "fitted.txt";
};

int run_fit(const FitArgs& a) {
  gbn_fit_config config;
  gbn_fit_config_default(&config);
  check(gbn_method_from_name(a.method.c_str(), &config.method), "method");
  config.batch_extra = a.batch_extra;
  config.split_fraction = a.split;
  config.variance_method = a.variance_method == "mad" ? GBN_VARIANCE_MAD : GBN_VARIANCE_EMPIRICAL;

  gbn_dag_t* raw_dag = nullptr;
  check(gbn_dag_load(&raw_dag, a.dag.c_str()), "reading DAG");
  DagPtr dag(raw_dag);
  gbn_samples_t* raw_samples = nullptr;
  check(gbn_samples_load(&raw_samples, a.samples.c_str()), "reading samples");
  SamplesPtr samples(raw_samples);

  gbn_model_t* raw_model = nullptr;
  const int rc = gbn_fit(&raw_model, dag.get(), samples.get(), &config);
  ModelPtr model(raw_model);
  if (rc == GBN_ERROR_DEGENERATE_FIT && model) {
    // The floored model is still written so it can be inspected.
    check(gbn_model_save(model.get(), a.out.c_str()), "writing model");
  }
  check(rc, "fit");
  check(gbn_model_save(model.get(), a.out.c_str()), "writing model");
  std::cout << "wrote " << a.out << '\n';
  return kExitOk;
}

struct EvalArgs {
  std::string truth;
  std::string estimate;
  bool per_node = false;
  bool covariance = false;
};

int run_eval(const EvalArgs& a) {
  gbn_model_t* raw_truth = nullptr;
  check(gbn_model_load(&raw_truth, a.truth.c_str()), "reading " + a.truth);
  ModelPtr truth(raw_truth);
  gbn_model_t* raw_est = nullptr;
  check(gbn_model_load(&raw_est, a.estimate.c_str()), "reading " + a.estimate);
  ModelPtr estimate(raw_est);

  gbn_eval_report report{};
  if (a.covariance) {
    check(gbn_eval_covariance(truth.get(), estimate.get(), &report), "evaluation");
  } else {
    std::size_t n = 0;
    check(gbn_model_node_count(truth.get(), &n), "evaluation");
    std::vector<double> terms(n);
    check(gbn_eval(truth.get(), estimate.get(), &report, terms.data(), terms.size()), "evaluation");
    if (a.per_node) {
      for (std::size_t i = 0; i < n; ++i) std::cout << "dcp " << i << ' ' << fmt(terms[i]) << '\n';
    }
  }
  std::cout << "kl_total " << fmt(report.kl_total) << '\n';
  std::cout << "tv_upper " << fmt(report.tv_upper) << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a, bool seed_given) {
  std::string out_dir = a.out_dir;
  if (out_dir.empty()) {
    const char* env = std::getenv("GBNLEARN_OUT_DIR");
    out_dir = env != nullptr && *env != '\0' ? env : "bench_out";
  }
  const int rc = gbn_bench_run(a.config.c_str(), out_dir.c_str(), seed_given ? 1 : 0, a.seed);
  if (rc != GBN_OK) {
    std::cerr << "gbnlearn: bench: " << gbn_error_name(rc) << ": " << gbn_last_error() << '\n';
    return kExitData;
  }
  std::cout << "wrote " << out_dir << "/results.csv and " << out_dir << "/summary.csv\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gbnlearn: parameter learning for Gaussian Bayesian networks"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a random network and write dag.txt, model.txt, samples.csv");
  generate->add_option("--graph", gen.graph, "Graph family")->check(CLI::IsMember({"tree", "er"}));
  generate->add_option("--n", gen.n, "Node count");
  generate->add_option("--d", gen.d, "Expected degree (er)");
  generate->add_option("--m", gen.m, "Sample count");
  generate->add_option("--seed", gen.seed, "Seed");
  generate->add_option("--weight-lo", gen.weight_lo, "Smallest coefficient magnitude");
  generate->add_option("--weight-hi", gen.weight_hi, "Coefficient magnitude upper bound (exclusive)");
  generate->add_option("--ill-nodes", gen.ill_nodes, "Nodes given tiny noise variance");
  generate->add_option("--ill-variance", gen.ill_variance, "Noise variance of ill-conditioned nodes");
  generate->add_option("--contaminate-fraction", gen.contaminate_fraction, "Fraction of contaminated rows");
  generate->add_option("--contaminate-nodes", gen.contaminate_nodes, "Number of contaminated nodes");
  generate->add_option("--noise", gen.noise, "Contaminating law")->check(CLI::IsMember({"gaussian", "cauchy"}));
  generate->add_option("--out-dir", gen.out_dir, "Output directory");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to samples on a known DAG");
  fit_cmd->add_option("--dag", fit.dag, "DAG file")->required();
  fit_cmd->add_option("--samples", fit.samples, "Samples file")->required();
  fit_cmd->add_option("--method", fit.method, "Coefficient estimator")
      ->check(CLI::IsMember({"least_squares", "batch_avg", "batch_med", "cauchy_est", "cauchy_est_tree"}));
  fit_cmd->add_option("--batch-extra", fit.batch_extra, "Batch size is p + this value");
  fit_cmd->add_option("--split", fit.split, "Fraction of rows used for coefficients");
  fit_cmd->add_option("--variance-method", fit.variance_method, "Variance estimator")
      ->check(CLI::IsMember({"empirical", "mad"}));
  fit_cmd->add_option("--out", fit.out, "Output model file");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "KL divergence of an estimate from a true model");
  eval->add_option("truth", ev.truth, "True model file")->required();
  eval->add_option("estimate", ev.estimate, "Estimated model file")->required();
  eval->add_flag("--per-node", ev.per_node, "Print each node's term");
  eval->add_flag("--covariance", ev.covariance, "Compare joint covariances (structures may differ)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a JSON-configured experiment sweep");
  bench_cmd->add_option("--config", bench.config, "Experiment config (JSON)")->required();
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory (default: $GBNLEARN_OUT_DIR or bench_out)");
  auto* seed_opt = bench_cmd->add_option("--seed", bench.seed, "Override base_seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*fit_cmd) return run_fit(fit);
    if (*eval) return run_eval(ev);
    if (*bench_cmd) return run_bench(bench, seed_opt->count() > 0);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
