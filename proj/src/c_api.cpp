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

#include "gbnlearn/gbnlearn.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "gbnlearn/bench.hpp"
#include "gbnlearn/dag.hpp"
#include "gbnlearn/datagen.hpp"
#include "gbnlearn/error.hpp"
#include "gbnlearn/estimators.hpp"
#include "gbnlearn/gbn.hpp"
#include "gbnlearn/io.hpp"

struct gbn_dag_struct {
  gbnlearn::Dag value;
};

struct gbn_model_struct {
  gbnlearn::GaussianBayesNet value;
};

struct gbn_samples_struct {
  gbnlearn::SampleMatrix value;
};

namespace {

using gbnlearn::ErrorCode;

thread_local std::string g_last_error;

int to_c_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidIndex:
    case ErrorCode::NoParents:
      return GBN_ERROR_INVALID_INDEX;
    case ErrorCode::CycleDetected:
      return GBN_ERROR_CYCLE_DETECTED;
    case ErrorCode::StructureMismatch:
      return GBN_ERROR_STRUCTURE_MISMATCH;
    case ErrorCode::InsufficientSamples:
    case ErrorCode::BatchTooSmall:
      return GBN_ERROR_INSUFFICIENT_SAMPLES;
    case ErrorCode::RankDeficient:
      return GBN_ERROR_RANK_DEFICIENT;
    case ErrorCode::CholeskyFailed:
      return GBN_ERROR_CHOLESKY_FAILED;
    case ErrorCode::NotPositiveDefinite:
      return GBN_ERROR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::NonPositiveVariance:
      return GBN_ERROR_NON_POSITIVE_VARIANCE;
    case ErrorCode::ConfigInvalid:
    case ErrorCode::InvalidSpec:
      return GBN_ERROR_CONFIG_INVALID;
    case ErrorCode::ParseError:
      return GBN_ERROR_PARSE;
    case ErrorCode::IoError:
      return GBN_ERROR_IO;
    case ErrorCode::SelfLoop:
    case ErrorCode::DuplicateEdge:
    case ErrorCode::InvalidSize:
    case ErrorCode::InvalidParameter:
    case ErrorCode::NotEnoughEdges:
    case ErrorCode::InvalidRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EmptyInput:
      return GBN_ERROR_INVALID_ARGUMENT;
  }
  return GBN_ERROR_UNKNOWN;
}

int fail(int code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

template <typename F>
int guard(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const gbnlearn::Error& e) {
    return fail(to_c_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GBN_ERROR_UNKNOWN, "out of memory");
  } catch (const std::exception& e) {
    return fail(GBN_ERROR_UNKNOWN, e.what());
  } catch (...) {
    return fail(GBN_ERROR_UNKNOWN, "unknown exception");
  }
}

#define GBN_REQUIRE(ptr)                                                  \
  do {                                                                    \
    if ((ptr) == nullptr) return fail(GBN_ERROR_NULL_POINTER, #ptr " is NULL"); \
  } while (0)

int check_capacity(std::size_t capacity, std::size_t needed) {
  if (capacity < needed) {
    return fail(GBN_ERROR_BUFFER_TOO_SMALL,
                "buffer holds " + std::to_string(capacity) + ", need " + std::to_string(needed));
  }
  return GBN_OK;
}

}  // namespace

extern "C" {

const char* gbn_last_error(void) { return g_last_error.c_str(); }

const char* gbn_error_name(int code) {
  switch (code) {
    case GBN_OK: return "OK";
    case GBN_ERROR_NULL_POINTER: return "NullPointer";
    case GBN_ERROR_INVALID_ARGUMENT: return "InvalidArgument";
    case GBN_ERROR_INVALID_INDEX: return "InvalidIndex";
    case GBN_ERROR_CYCLE_DETECTED: return "CycleDetected";
    case GBN_ERROR_STRUCTURE_MISMATCH: return "StructureMismatch";
    case GBN_ERROR_INSUFFICIENT_SAMPLES: return "InsufficientSamples";
    case GBN_ERROR_RANK_DEFICIENT: return "RankDeficient";
    case GBN_ERROR_CHOLESKY_FAILED: return "CholeskyFailed";
    case GBN_ERROR_NOT_POSITIVE_DEFINITE: return "NotPositiveDefinite";
    case GBN_ERROR_NON_POSITIVE_VARIANCE: return "NonPositiveVariance";
    case GBN_ERROR_CONFIG_INVALID: return "ConfigInvalid";
    case GBN_ERROR_PARSE: return "ParseError";
    case GBN_ERROR_IO: return "IoError";
    case GBN_ERROR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case GBN_ERROR_DEGENERATE_FIT: return "DegenerateFit";
    default: return "Unknown";
  }
}

int gbn_error_is_numerical(int code) {
  return code == GBN_ERROR_RANK_DEFICIENT || code == GBN_ERROR_CHOLESKY_FAILED ||
         code == GBN_ERROR_NOT_POSITIVE_DEFINITE || code == GBN_ERROR_NON_POSITIVE_VARIANCE ||
         code == GBN_ERROR_DEGENERATE_FIT;
}

/* ---- DAG ---- */

int gbn_dag_create(gbn_dag_t** out, size_t n, const size_t* parents, const size_t* children, size_t edge_count) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    if (edge_count > 0) {
      GBN_REQUIRE(parents);
      GBN_REQUIRE(children);
    }
    std::vector<gbnlearn::Edge> edges(edge_count);
    for (size_t k = 0; k < edge_count; ++k) edges[k] = {parents[k], children[k]};
    *out = new gbn_dag_struct{gbnlearn::Dag(n, edges)};
    return GBN_OK;
  });
}

int gbn_dag_random_tree(gbn_dag_t** out, size_t n, uint64_t seed) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    gbnlearn::Rng rng(seed);
    *out = new gbn_dag_struct{gbnlearn::random_tree_dag(n, rng)};
    return GBN_OK;
  });
}

int gbn_dag_random_er(gbn_dag_t** out, size_t n, double expected_degree, uint64_t seed) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    gbnlearn::Rng rng(seed);
    *out = new gbn_dag_struct{gbnlearn::random_er_dag(n, expected_degree, rng)};
    return GBN_OK;
  });
}

int gbn_dag_remove_random_edges(gbn_dag_t** out, const gbn_dag_t* dag, size_t k, uint64_t seed) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(dag);
    gbnlearn::Rng rng(seed);
    *out = new gbn_dag_struct{gbnlearn::remove_random_edges(dag->value, k, rng)};
    return GBN_OK;
  });
}

int gbn_dag_load(gbn_dag_t** out, const char* path) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(path);
    *out = new gbn_dag_struct{gbnlearn::io::load_dag(path)};
    return GBN_OK;
  });
}

int gbn_dag_save(const gbn_dag_t* dag, const char* path) {
  return guard([&]() -> int {
    GBN_REQUIRE(dag);
    GBN_REQUIRE(path);
    gbnlearn::io::save_dag(path, dag->value);
    return GBN_OK;
  });
}

void gbn_dag_destroy(gbn_dag_t* dag) { delete dag; }

int gbn_dag_node_count(const gbn_dag_t* dag, size_t* out) {
  return guard([&]() -> int {
    GBN_REQUIRE(dag);
    GBN_REQUIRE(out);
    *out = dag->value.node_count();
    return GBN_OK;
  });
}

int gbn_dag_edge_count(const gbn_dag_t* dag, size_t* out) {
  return guard([&]() -> int {
    GBN_REQUIRE(dag);
    GBN_REQUIRE(out);
    *out = dag->value.edge_count();
    return GBN_OK;
  });
}

int gbn_dag_is_polytree(const gbn_dag_t* dag, int* out) {
  return guard([&]() -> int {
    GBN_REQUIRE(dag);
    GBN_REQUIRE(out);
    *out = gbnlearn::is_polytree(dag->value) ? 1 : 0;
    return GBN_OK;
  });
}

int gbn_dag_topological_order(const gbn_dag_t* dag, size_t* order, size_t capacity) {
  return guard([&]() -> int {
    GBN_REQUIRE(dag);
    GBN_REQUIRE(order);
    const auto topo = dag->value.topological_order();
    if (int rc = check_capacity(capacity, topo.size()); rc != GBN_OK) return rc;
    std::copy(topo.begin(), topo.end(), order);
    return GBN_OK;
  });
}

/* ---- Model ---- */

int gbn_model_random(gbn_model_t** out, const gbn_dag_t* dag, double weight_lo, double weight_hi,
                     const gbn_variance_spec* variances, uint64_t seed) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(dag);
    gbnlearn::VarianceSpec spec;
    if (variances != nullptr) {
      switch (variances->kind) {
        case GBN_VARIANCE_UNIT:
          break;
        case GBN_VARIANCE_UNIFORM:
          spec = gbnlearn::VarianceSpec::uniform_range(variances->lo, variances->hi);
          break;
        case GBN_VARIANCE_ILL_CONDITIONED: {
          if (variances->ill_node_count > 0) GBN_REQUIRE(variances->ill_nodes);
          std::vector<gbnlearn::NodeId> nodes(variances->ill_nodes,
                                              variances->ill_nodes + variances->ill_node_count);
          const double tiny = variances->tiny_variance > 0.0 ? variances->tiny_variance : 1e-20;
          spec = gbnlearn::VarianceSpec::ill_conditioned(std::move(nodes), tiny);
          break;
        }
        default:
          return fail(GBN_ERROR_INVALID_ARGUMENT, "unknown variance kind " + std::to_string(variances->kind));
      }
    }
    gbnlearn::Rng rng(seed);
    *out = new gbn_model_struct{gbnlearn::random_gbn(dag->value, weight_lo, weight_hi, spec, rng)};
    return GBN_OK;
  });
}

int gbn_model_load(gbn_model_t** out, const char* path) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(path);
    *out = new gbn_model_struct{gbnlearn::io::load_model(path)};
    return GBN_OK;
  });
}

int gbn_model_save(const gbn_model_t* model, const char* path) {
  return guard([&]() -> int {
    GBN_REQUIRE(model);
    GBN_REQUIRE(path);
    gbnlearn::io::save_model(path, model->value);
    return GBN_OK;
  });
}

void gbn_model_destroy(gbn_model_t* model) { delete model; }

int gbn_model_node_count(const gbn_model_t* model, size_t* out) {
  return guard([&]() -> int {
    GBN_REQUIRE(model);
    GBN_REQUIRE(out);
    *out = model->value.node_count();
    return GBN_OK;
  });
}

int gbn_model_variance(const gbn_model_t* model, size_t node, double* out) {
  return guard([&]() -> int {
    GBN_REQUIRE(model);
    GBN_REQUIRE(out);
    if (node >= model->value.node_count()) return fail(GBN_ERROR_INVALID_INDEX, "node out of range");
    *out = model->value.variance(node);
    return GBN_OK;
  });
}

int gbn_model_coefficients(const gbn_model_t* model, size_t node, double* coefficients, size_t capacity,
                           size_t* len) {
  return guard([&]() -> int {
    GBN_REQUIRE(model);
    GBN_REQUIRE(len);
    if (node >= model->value.node_count()) return fail(GBN_ERROR_INVALID_INDEX, "node out of range");
    const auto& a = model->value.coefficients(node);
    *len = static_cast<size_t>(a.size());
    if (a.size() == 0) return GBN_OK;
    GBN_REQUIRE(coefficients);
    if (int rc = check_capacity(capacity, *len); rc != GBN_OK) return rc;
    std::memcpy(coefficients, a.data(), sizeof(double) * *len);
    return GBN_OK;
  });
}

int gbn_model_dag(const gbn_model_t* model, gbn_dag_t** out) {
  return guard([&]() -> int {
    GBN_REQUIRE(model);
    GBN_REQUIRE(out);
    *out = new gbn_dag_struct{model->value.dag()};
    return GBN_OK;
  });
}

int gbn_model_covariance(const gbn_model_t* model, double* out, size_t capacity) {
  return guard([&]() -> int {
    GBN_REQUIRE(model);
    GBN_REQUIRE(out);
    const Eigen::MatrixXd sigma = gbnlearn::covariance(model->value);
    const auto n = static_cast<size_t>(sigma.rows());
    if (int rc = check_capacity(capacity, n * n); rc != GBN_OK) return rc;
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < n; ++c) out[r * n + c] = sigma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    return GBN_OK;
  });
}

/* ---- Samples ---- */

int gbn_samples_generate(gbn_samples_t** out, const gbn_model_t* model, size_t m, uint64_t seed,
                         const gbn_contamination_spec* contamination) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(model);
    if (m < 1) return fail(GBN_ERROR_INVALID_ARGUMENT, "m must be positive");
    gbnlearn::Rng rng(seed);
    if (contamination == nullptr) {
      *out = new gbn_samples_struct{gbnlearn::sample(model->value, m, rng)};
      return GBN_OK;
    }
    gbnlearn::ContaminationSpec spec;
    spec.sample_fraction = contamination->sample_fraction;
    spec.node_count = contamination->node_count;
    if (contamination->noise_law != GBN_NOISE_GAUSSIAN && contamination->noise_law != GBN_NOISE_CAUCHY) {
      return fail(GBN_ERROR_INVALID_ARGUMENT, "unknown noise law");
    }
    spec.noise_law = contamination->noise_law == GBN_NOISE_GAUSSIAN ? gbnlearn::NoiseLaw::Gaussian
                                                                     : gbnlearn::NoiseLaw::Cauchy;
    spec.location = contamination->location;
    spec.scale = contamination->scale;
    spec.seed = contamination->seed;
    *out = new gbn_samples_struct{gbnlearn::contaminated_sample(model->value, m, spec, rng)};
    return GBN_OK;
  });
}

int gbn_samples_create(gbn_samples_t** out, size_t m, size_t n, const double* row_major) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(row_major);
    gbnlearn::SampleMatrix data(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (size_t r = 0; r < m; ++r) {
      for (size_t c = 0; c < n; ++c) {
        const double v = row_major[r * n + c];
        if (std::isnan(v)) return fail(GBN_ERROR_INVALID_ARGUMENT, "samples may not contain NaN");
        data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      }
    }
    *out = new gbn_samples_struct{std::move(data)};
    return GBN_OK;
  });
}

int gbn_samples_load(gbn_samples_t** out, const char* path) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(path);
    *out = new gbn_samples_struct{gbnlearn::io::load_samples(path)};
    return GBN_OK;
  });
}

int gbn_samples_save(const gbn_samples_t* samples, const char* path) {
  return guard([&]() -> int {
    GBN_REQUIRE(samples);
    GBN_REQUIRE(path);
    gbnlearn::io::save_samples(path, samples->value);
    return GBN_OK;
  });
}

void gbn_samples_destroy(gbn_samples_t* samples) { delete samples; }

int gbn_samples_shape(const gbn_samples_t* samples, size_t* m, size_t* n) {
  return guard([&]() -> int {
    GBN_REQUIRE(samples);
    GBN_REQUIRE(m);
    GBN_REQUIRE(n);
    *m = static_cast<size_t>(samples->value.rows());
    *n = static_cast<size_t>(samples->value.cols());
    return GBN_OK;
  });
}

int gbn_samples_copy(const gbn_samples_t* samples, double* row_major, size_t capacity) {
  return guard([&]() -> int {
    GBN_REQUIRE(samples);
    GBN_REQUIRE(row_major);
    const auto& d = samples->value;
    const auto m = static_cast<size_t>(d.rows());
    const auto n = static_cast<size_t>(d.cols());
    if (int rc = check_capacity(capacity, m * n); rc != GBN_OK) return rc;
    for (size_t r = 0; r < m; ++r) {
      for (size_t c = 0; c < n; ++c) row_major[r * n + c] = d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    return GBN_OK;
  });
}

/* ---- Fitting ---- */

void gbn_fit_config_default(gbn_fit_config* config) {
  if (config == nullptr) return;
  const gbnlearn::FitConfig defaults;
  config->method = GBN_METHOD_LEAST_SQUARES;
  config->batch_extra = defaults.batch_extra;
  config->split_fraction = defaults.split_fraction;
  config->variance_method = GBN_VARIANCE_EMPIRICAL;
}

int gbn_method_from_name(const char* name, int* out) {
  return guard([&]() -> int {
    GBN_REQUIRE(name);
    GBN_REQUIRE(out);
    const auto m = gbnlearn::parse_coefficient_method(name);
    if (!m || *m == gbnlearn::CoefficientMethod::EmpiricalMle) {
      return fail(GBN_ERROR_INVALID_ARGUMENT, std::string("unknown fitting method '") + name + "'");
    }
    *out = static_cast<int>(*m);
    return GBN_OK;
  });
}

int gbn_fit(gbn_model_t** out, const gbn_dag_t* dag, const gbn_samples_t* samples, const gbn_fit_config* config) {
  return guard([&]() -> int {
    GBN_REQUIRE(out);
    GBN_REQUIRE(dag);
    GBN_REQUIRE(samples);
    GBN_REQUIRE(config);
    *out = nullptr;
    if (config->method < GBN_METHOD_LEAST_SQUARES || config->method > GBN_METHOD_CAUCHY_EST_TREE) {
      return fail(GBN_ERROR_INVALID_ARGUMENT, "unknown method " + std::to_string(config->method));
    }
    if (config->variance_method != GBN_VARIANCE_EMPIRICAL && config->variance_method != GBN_VARIANCE_MAD) {
      return fail(GBN_ERROR_INVALID_ARGUMENT, "unknown variance method");
    }
    gbnlearn::FitConfig cfg;
    cfg.method = static_cast<gbnlearn::CoefficientMethod>(config->method);
    cfg.batch_extra = config->batch_extra;
    cfg.split_fraction = config->split_fraction;
    cfg.variance_method = config->variance_method == GBN_VARIANCE_EMPIRICAL ? gbnlearn::VarianceMethod::Empirical
                                                                             : gbnlearn::VarianceMethod::Mad;
    auto result = gbnlearn::fit(dag->value, samples->value, cfg);
    const bool degenerate = result.any_degenerate();
    std::string flagged;
    for (size_t i = 0; i < result.degenerate.size(); ++i) {
      if (result.degenerate[i]) flagged += (flagged.empty() ? "" : ", ") + std::to_string(i);
    }
    *out = new gbn_model_struct{std::move(result.model)};
    if (degenerate) {
      return fail(GBN_ERROR_DEGENERATE_FIT, "recovered variance was non-positive at node(s) " + flagged +
                                                "; floored at 1e-300");
    }
    return GBN_OK;
  });
}

/* ---- Evaluation ---- */

int gbn_eval(const gbn_model_t* truth, const gbn_model_t* estimate, gbn_eval_report* report, double* per_node,
             size_t capacity) {
  return guard([&]() -> int {
    GBN_REQUIRE(truth);
    GBN_REQUIRE(estimate);
    GBN_REQUIRE(report);
    const auto r = gbnlearn::kl_divergence(truth->value, estimate->value);
    if (per_node != nullptr) {
      if (int rc = check_capacity(capacity, r.per_node_dcp.size()); rc != GBN_OK) return rc;
      std::copy(r.per_node_dcp.begin(), r.per_node_dcp.end(), per_node);
    }
    report->kl_total = r.kl_total;
    report->tv_upper = r.tv_upper;
    return GBN_OK;
  });
}

int gbn_eval_covariance(const gbn_model_t* truth, const gbn_model_t* estimate, gbn_eval_report* report) {
  return guard([&]() -> int {
    GBN_REQUIRE(truth);
    GBN_REQUIRE(estimate);
    GBN_REQUIRE(report);
    if (truth->value.node_count() != estimate->value.node_count()) {
      return fail(GBN_ERROR_STRUCTURE_MISMATCH, "models have different node counts");
    }
    const double kl = gbnlearn::gaussian_kl(gbnlearn::covariance(truth->value), gbnlearn::covariance(estimate->value));
    report->kl_total = kl;
    report->tv_upper = gbnlearn::pinsker_tv_bound(kl);
    return GBN_OK;
  });
}

/* ---- Benchmark ---- */

int gbn_bench_run(const char* config_path, const char* out_dir, int has_seed_override, uint64_t seed_override) {
  return guard([&]() -> int {
    GBN_REQUIRE(config_path);
    GBN_REQUIRE(out_dir);
    auto config = gbnlearn::bench::load_config(config_path);
    if (has_seed_override != 0) config.base_seed = seed_override;
    const auto rows = gbnlearn::bench::run_experiment(config);
    gbnlearn::bench::write_outputs(out_dir, rows);
    return GBN_OK;
  });
}

}  // extern "C"
