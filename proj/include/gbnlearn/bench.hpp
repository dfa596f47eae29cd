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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gbnlearn/datagen.hpp"
#include "gbnlearn/estimators.hpp"
#include "gbnlearn/gbn.hpp"

namespace gbnlearn::bench {

struct GraphSpec {
  enum class Family { Tree, ErdosRenyi };
  Family family = Family::Tree;
  std::size_t n = 100;
  double expected_degree = 1.0;  // ER only
};

struct Scenario {
  enum class Kind { Clean, Contaminated, IllConditioned, Agnostic };
  Kind kind = Kind::Clean;
  ContaminationSpec contamination;          // Contaminated
  std::vector<NodeId> ill_nodes;            // IllConditioned: explicit nodes, or
  std::size_t ill_node_count = 3;           //   this many random nodes when empty
  double ill_variance = 1e-20;
  std::size_t removed_edges = 0;            // Agnostic
};

struct MethodSpec {
  std::string name;  // unique label used in every output file
  FitConfig fit;
};

struct ExperimentConfig {
  GraphSpec graph;
  double weight_lo = 1.0;
  double weight_hi = 2.0;
  VarianceSpec variances;
  Scenario scenario;
  std::vector<MethodSpec> methods;
  std::vector<std::size_t> sample_sizes;
  std::size_t repetitions = 20;
  std::uint64_t base_seed = 0;
  /// Wall-clock timings make results.csv non-reproducible, so they are
  /// written as 0 unless requested.
  bool record_timing = false;

  /// Throws ConfigInvalid.
  void validate() const;
};

/// Parses the JSON config document; unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRow {
  std::string method;
  std::string graph;
  std::size_t n = 0;
  double d = 0.0;
  std::string scenario;
  std::size_t m = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> kl_total;  // empty when degenerate
  std::optional<double> tv_upper;
  double fit_wall_ms = 0.0;
  bool degenerate = false;
};

/// Seed of repetition r.
std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t rep);

/// Rows ordered by (method position in the config, m, rep).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

struct SummaryRow {
  std::string method;
  std::size_t m = 0;
  std::optional<double> mean_kl;  // empty when every row of the cell is degenerate
  std::optional<double> median_kl;
  std::optional<double> iqr_kl;
  std::size_t degenerate_count = 0;
};

/// Per (method, m) aggregates over the non-degenerate rows. Throws
/// EmptyInput on an empty row set.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

inline constexpr std::string_view kResultsHeader =
    "method,graph,n,d,scenario,m,rep,seed,kl_total,tv_upper,fit_wall_ms,degenerate";
inline constexpr std::string_view kSummaryHeader = "method,m,mean_kl,median_kl,iqr_kl,degenerate_count";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// results.csv, summary.csv and one plot_<method>.csv (m, median_kl) per method.
void write_outputs(const std::filesystem::path& directory, const std::vector<ResultRow>& rows);

}  // namespace gbnlearn::bench
