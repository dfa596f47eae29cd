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

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gbnlearn/dag.hpp"
#include "gbnlearn/gbn.hpp"

namespace gbnlearn {

enum class CoefficientMethod {
  LeastSquares,
  BatchAvg,
  BatchMed,
  CauchyEst,
  CauchyEstTree,
  EmpiricalMle,
};

enum class VarianceMethod { Empirical, Mad };

std::string_view to_string(CoefficientMethod method) noexcept;
std::string_view to_string(VarianceMethod method) noexcept;
std::optional<CoefficientMethod> parse_coefficient_method(std::string_view name) noexcept;
std::optional<VarianceMethod> parse_variance_method(std::string_view name) noexcept;

struct FitConfig {
  CoefficientMethod method = CoefficientMethod::LeastSquares;
  /// Batch methods use k = p + batch_extra rows per batch at a node with p parents.
  std::size_t batch_extra = 20;
  /// Fraction of rows (leading) used for coefficients; the rest estimate variances.
  double split_fraction = 0.5;
  VarianceMethod variance_method = VarianceMethod::Empirical;
  /// Kept for reproducibility records. Every partition in this library is a
  /// deterministic function of row order, so no estimator consumes it.
  std::uint64_t seed = 0;

  /// Throws ConfigInvalid.
  void validate() const;
};

using CoefficientEstimates = std::vector<Eigen::VectorXd>;

/// argmin ||X a - y||_2 via column-pivoted QR. RankDeficient when a pivot of
/// R falls below 1e-12 of the largest; InsufficientSamples when rows < cols.
Eigen::VectorXd least_squares_node(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target);

enum class Aggregator { Mean, CoordinateMedian };

struct BatchOutcome {
  Eigen::VectorXd estimate;
  std::size_t batches_used = 0;
  std::size_t batches_skipped = 0;  // rank-deficient batches
};

/// Least squares on b = floor(rows / k) consecutive disjoint batches of k
/// rows (remainder dropped), combined by mean or coordinate-wise median.
BatchOutcome batch_least_squares(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target,
                                 std::size_t batch_size, Aggregator aggregator);

/// Solves the square system built from exactly p samples. A numerically
/// singular system falls back to the minimum-norm least-squares solution.
Eigen::VectorXd batch_solve(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target);

/// Coordinate-wise median of per-batch square solves (batches of p rows).
Eigen::VectorXd cauchy_est_tree_node(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target);

/// Median of the whitened batch solves L^T a_s with M_hat = X^T X / rows = L L^T,
/// mapped back through (L^T)^{-1}. CholeskyFailed when M_hat is not
/// numerically positive definite.
Eigen::VectorXd cauchy_est_node(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target);

/// Zero-mean second moment X^T X / m.
Eigen::MatrixXd empirical_mle(const SampleMatrix& data);

/// Coefficient phase for every node with p >= 1; roots get an empty vector.
CoefficientEstimates estimate_coefficients(const Dag& dag, const SampleMatrix& data,
                                           const FitConfig& config);

/// Mean squared residual per node (roots: mean square of the node itself).
std::vector<double> variance_recovery(const Dag& dag, const SampleMatrix& data,
                                      const CoefficientEstimates& coefficients);

/// (1.4826 * median |x - median(x)|)^2
double mad_variance(std::span<const double> residuals);

/// MAD variance of the residuals, per node.
std::vector<double> mad_variance_recovery(const Dag& dag, const SampleMatrix& data,
                                          const CoefficientEstimates& coefficients);

/// Floor substituted for a non-positive recovered variance.
inline constexpr double kDegenerateVarianceFloor = 1e-300;

struct FitResult {
  GaussianBayesNet model;
  std::vector<bool> degenerate;  // variance floored at this node
  std::size_t coefficient_rows = 0;
  std::size_t variance_rows = 0;

  bool any_degenerate() const noexcept;
};

/// Two-phase recovery: coefficients from the leading floor(split * m) rows,
/// variances from the remaining rows.
FitResult fit(const Dag& dag, const SampleMatrix& data, const FitConfig& config);

/// Parent block and target column of node i over a row range.
Eigen::MatrixXd parent_block(const SampleMatrix& data, const Dag& dag, NodeId i,
                             Eigen::Index first_row, Eigen::Index rows);

}  // namespace gbnlearn
