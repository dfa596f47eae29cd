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

#ifndef GBNLEARN_H_
#define GBNLEARN_H_

/*
 * C interface to gbnlearn: parameter learning for Gaussian Bayesian
 * networks with known structure.
 *
 * Every function returns an error code (GBN_OK on success). Objects are
 * opaque handles created by *_create/_load/_random functions and released
 * with the matching *_destroy function; destroy accepts NULL. After a
 * failure, gbn_last_error() returns a description that stays valid until
 * the next call on the same thread.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GBN_API __declspec(dllexport)
#else
#define GBN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum gbn_error_code {
  GBN_OK = 0,
  GBN_ERROR_NULL_POINTER = -1,
  GBN_ERROR_INVALID_ARGUMENT = -2,
  GBN_ERROR_INVALID_INDEX = -3,
  GBN_ERROR_CYCLE_DETECTED = -4,
  GBN_ERROR_STRUCTURE_MISMATCH = -5,
  GBN_ERROR_INSUFFICIENT_SAMPLES = -6,
  GBN_ERROR_RANK_DEFICIENT = -7,
  GBN_ERROR_CHOLESKY_FAILED = -8,
  GBN_ERROR_NOT_POSITIVE_DEFINITE = -9,
  GBN_ERROR_NON_POSITIVE_VARIANCE = -10,
  GBN_ERROR_CONFIG_INVALID = -11,
  GBN_ERROR_PARSE = -12,
  GBN_ERROR_IO = -13,
  GBN_ERROR_BUFFER_TOO_SMALL = -14,
  GBN_ERROR_DEGENERATE_FIT = -15,
  GBN_ERROR_UNKNOWN = -99
};

typedef struct gbn_dag_struct gbn_dag_t;
typedef struct gbn_model_struct gbn_model_t;
typedef struct gbn_samples_struct gbn_samples_t;

GBN_API const char* gbn_last_error(void);
GBN_API const char* gbn_error_name(int code);
/* Nonzero for failures caused by the data's numerics (singular systems,
   failed factorizations, degenerate fits). */
GBN_API int gbn_error_is_numerical(int code);

/* ---- DAG -------------------------------------------------------------- */

GBN_API int gbn_dag_create(gbn_dag_t** out, size_t n, const size_t* parents, const size_t* children,
                           size_t edge_count);
GBN_API int gbn_dag_random_tree(gbn_dag_t** out, size_t n, uint64_t seed);
GBN_API int gbn_dag_random_er(gbn_dag_t** out, size_t n, double expected_degree, uint64_t seed);
GBN_API int gbn_dag_remove_random_edges(gbn_dag_t** out, const gbn_dag_t* dag, size_t k, uint64_t seed);
GBN_API int gbn_dag_load(gbn_dag_t** out, const char* path);
GBN_API int gbn_dag_save(const gbn_dag_t* dag, const char* path);
GBN_API void gbn_dag_destroy(gbn_dag_t* dag);

GBN_API int gbn_dag_node_count(const gbn_dag_t* dag, size_t* out);
GBN_API int gbn_dag_edge_count(const gbn_dag_t* dag, size_t* out);
GBN_API int gbn_dag_is_polytree(const gbn_dag_t* dag, int* out);
/* Writes n node indices. */
GBN_API int gbn_dag_topological_order(const gbn_dag_t* dag, size_t* order, size_t capacity);

/* ---- Model ------------------------------------------------------------ */

enum gbn_variance_kind { GBN_VARIANCE_UNIT = 0, GBN_VARIANCE_UNIFORM = 1, GBN_VARIANCE_ILL_CONDITIONED = 2 };

typedef struct gbn_variance_spec {
  int kind;                 /* gbn_variance_kind */
  double lo, hi;            /* GBN_VARIANCE_UNIFORM */
  const size_t* ill_nodes;  /* GBN_VARIANCE_ILL_CONDITIONED */
  size_t ill_node_count;
  double tiny_variance;     /* 0 selects 1e-20 */
} gbn_variance_spec;

/* variances may be NULL for unit noise. */
GBN_API int gbn_model_random(gbn_model_t** out, const gbn_dag_t* dag, double weight_lo, double weight_hi,
                             const gbn_variance_spec* variances, uint64_t seed);
GBN_API int gbn_model_load(gbn_model_t** out, const char* path);
GBN_API int gbn_model_save(const gbn_model_t* model, const char* path);
GBN_API void gbn_model_destroy(gbn_model_t* model);

GBN_API int gbn_model_node_count(const gbn_model_t* model, size_t* out);
GBN_API int gbn_model_variance(const gbn_model_t* model, size_t node, double* out);
/* Coefficients aligned with the node's ascending parent list; *len receives p. */
GBN_API int gbn_model_coefficients(const gbn_model_t* model, size_t node, double* coefficients, size_t capacity,
                                   size_t* len);
/* New DAG handle holding the model's structure. */
GBN_API int gbn_model_dag(const gbn_model_t* model, gbn_dag_t** out);
/* Row-major n x n exact covariance. */
GBN_API int gbn_model_covariance(const gbn_model_t* model, double* out, size_t capacity);

/* ---- Samples ---------------------------------------------------------- */

enum gbn_noise_law { GBN_NOISE_GAUSSIAN = 0, GBN_NOISE_CAUCHY = 1 };

typedef struct gbn_contamination_spec {
  double sample_fraction; /* rows affected, e.g. 0.05 */
  size_t node_count;      /* nodes affected, e.g. 5 */
  int noise_law;          /* gbn_noise_law */
  double location;        /* e.g. 1000 */
  double scale;           /* e.g. 1 */
  uint64_t seed;
} gbn_contamination_spec;

/* contamination may be NULL for clean sampling. */
GBN_API int gbn_samples_generate(gbn_samples_t** out, const gbn_model_t* model, size_t m, uint64_t seed,
                                 const gbn_contamination_spec* contamination);
GBN_API int gbn_samples_create(gbn_samples_t** out, size_t m, size_t n, const double* row_major);
GBN_API int gbn_samples_load(gbn_samples_t** out, const char* path);
GBN_API int gbn_samples_save(const gbn_samples_t* samples, const char* path);
GBN_API void gbn_samples_destroy(gbn_samples_t* samples);
GBN_API int gbn_samples_shape(const gbn_samples_t* samples, size_t* m, size_t* n);
GBN_API int gbn_samples_copy(const gbn_samples_t* samples, double* row_major, size_t capacity);

/* ---- Fitting ---------------------------------------------------------- */

enum gbn_method {
  GBN_METHOD_LEAST_SQUARES = 0,
  GBN_METHOD_BATCH_AVG = 1,
  GBN_METHOD_BATCH_MED = 2,
  GBN_METHOD_CAUCHY_EST = 3,
  GBN_METHOD_CAUCHY_EST_TREE = 4
};

enum gbn_variance_method { GBN_VARIANCE_EMPIRICAL = 0, GBN_VARIANCE_MAD = 1 };

typedef struct gbn_fit_config {
  int method;            /* gbn_method */
  size_t batch_extra;    /* batch size p + batch_extra for batch methods */
  double split_fraction; /* rows used for coefficients, in (0, 1) */
  int variance_method;   /* gbn_variance_method */
} gbn_fit_config;

GBN_API void gbn_fit_config_default(gbn_fit_config* config);
GBN_API int gbn_method_from_name(const char* name, int* out);

/* Returns GBN_ERROR_DEGENERATE_FIT (and still stores the model, with floored
   variances) when some recovered variance was non-positive. */
GBN_API int gbn_fit(gbn_model_t** out, const gbn_dag_t* dag, const gbn_samples_t* samples,
                    const gbn_fit_config* config);

/* ---- Evaluation ------------------------------------------------------- */

typedef struct gbn_eval_report {
  double kl_total;
  double tv_upper;
} gbn_eval_report;

/* Decomposed KL(truth || estimate); models must share a DAG. per_node may be
   NULL; otherwise it receives n terms. */
GBN_API int gbn_eval(const gbn_model_t* truth, const gbn_model_t* estimate, gbn_eval_report* report,
                     double* per_node, size_t capacity);
/* KL between the two models' joint covariances; structures may differ. */
GBN_API int gbn_eval_covariance(const gbn_model_t* truth, const gbn_model_t* estimate, gbn_eval_report* report);

/* ---- Benchmark -------------------------------------------------------- */

/* Runs the JSON-configured experiment and writes results.csv, summary.csv
   and plot_<method>.csv into out_dir. seed_override is used when
   has_seed_override is nonzero. */
GBN_API int gbn_bench_run(const char* config_path, const char* out_dir, int has_seed_override,
                          uint64_t seed_override);

#ifdef __cplusplus
}
#endif

#endif /* GBNLEARN_H_ */
