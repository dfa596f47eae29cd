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
#include <vector>

#include "gbnlearn/dag.hpp"
#include "gbnlearn/rng.hpp"

namespace gbnlearn {

/// m x n observations; row r is one joint draw of (X_0, ..., X_{n-1}).
using SampleMatrix = Eigen::MatrixXd;

/// Linear Gaussian structural equation model on a fixed DAG:
///   X_i = sum_{j in parents(i)} a_{i<-j} X_j + eta_i,  eta_i ~ N(0, sigma_i^2).
///
/// coefficients(i) is aligned with dag().parents(i).
class GaussianBayesNet {
 public:
  /// Throws DimensionMismatch if a coefficient vector does not match the
  /// parent count, NonPositiveVariance unless every variance is > 0.
  GaussianBayesNet(Dag dag, std::vector<Eigen::VectorXd> coefficients,
                   std::vector<double> variances);

  const Dag& dag() const noexcept { return dag_; }
  std::size_t node_count() const noexcept { return dag_.node_count(); }
  const Eigen::VectorXd& coefficients(NodeId i) const { return coefficients_.at(i); }
  double variance(NodeId i) const { return variances_.at(i); }
  const std::vector<double>& variances() const noexcept { return variances_; }

  /// Strictly "upper" weight matrix B with B(j, i) = a_{i<-j}, so X = B^T X + eta.
  Eigen::MatrixXd weight_matrix() const;

 private:
  Dag dag_;
  std::vector<Eigen::VectorXd> coefficients_;
  std::vector<double> variances_;
};

struct VarianceSpec {
  enum class Kind { Unit, UniformRange, IllConditioned };
  Kind kind = Kind::Unit;
  double lo = 1.0;  // UniformRange bounds
  double hi = 1.0;
  std::vector<NodeId> ill_nodes;  // IllConditioned targets
  double tiny_variance = 1e-20;

  static VarianceSpec unit() { return {}; }
  static VarianceSpec uniform_range(double a, double b) {
    return {Kind::UniformRange, a, b, {}, 1e-20};
  }
  static VarianceSpec ill_conditioned(std::vector<NodeId> nodes, double tiny = 1e-20) {
    return {Kind::IllConditioned, 1.0, 1.0, std::move(nodes), tiny};
  }
};

/// Coefficient magnitudes uniform on [lo, hi) with a uniform random sign.
GaussianBayesNet random_gbn(const Dag& dag, double lo, double hi, const VarianceSpec& variances,
                            Rng& rng);

enum class NoiseLaw { Gaussian, Cauchy };

/// Cells whose structural noise is replaced by a gross-error law.
struct ContaminationTargets {
  std::vector<std::size_t> rows;
  std::vector<NodeId> nodes;
  NoiseLaw law = NoiseLaw::Gaussian;
  double location = 1000.0;
  double scale = 1.0;  // standard deviation (Gaussian) or scale (Cauchy)
  std::uint64_t seed = 0;
};

/// Forward sampling in topological order. A N(0, sigma_i^2) draw is taken
/// from `rng` for every cell, contaminated or not, so the clean noise stream
/// is unchanged by contamination; replacement draws come from a separate
/// stream seeded by targets->seed and propagate to descendants.
SampleMatrix sample(const GaussianBayesNet& gbn, std::size_t m, Rng& rng,
                    const ContaminationTargets* contamination = nullptr);

/// Exact covariance (I - B^T)^{-1} D (I - B)^{-1}.
Eigen::MatrixXd covariance(const GaussianBayesNet& gbn);

/// Covariance of the parents of node i. Throws NoParents when p_i = 0.
Eigen::MatrixXd parent_covariance(const GaussianBayesNet& gbn, NodeId i);
Eigen::MatrixXd parent_covariance(const Eigen::MatrixXd& full_covariance, const Dag& dag, NodeId i);

struct NodeParams {
  Eigen::VectorXd coefficients;
  double variance;
};

/// Per-node conditional KL term
///   ln(sigma_hat/sigma) + (sigma^2 - sigma_hat^2)/(2 sigma_hat^2) + D^T M D/(2 sigma_hat^2),
/// D = A_hat - A, M the true parent covariance.
double dcp(const NodeParams& truth, const NodeParams& estimate, const Eigen::MatrixXd& parent_cov);

struct EvalReport {
  std::vector<double> per_node_dcp;
  double kl_total = 0.0;
  double tv_upper = 0.0;
};

/// Decomposed KL(truth || estimate); both models must share the DAG.
EvalReport kl_divergence(const GaussianBayesNet& truth, const GaussianBayesNet& estimate);

/// Pinsker bound min(1, sqrt(max(kl, 0) / 2)).
double pinsker_tv_bound(double kl);

/// Zero-mean Gaussian KL(N(0, sigma_p) || N(0, sigma_q)) via Cholesky
/// log-determinants. Throws NotPositiveDefinite, DimensionMismatch.
double gaussian_kl(const Eigen::MatrixXd& sigma_p, const Eigen::MatrixXd& sigma_q);

/// Per-node predicates of the KL budget argument, for a target epsilon:
///   coefficient:  |D^T M D| <= sigma^2 * eps * p_i / (n d_avg)
///   variance:     (1 - s) sigma^2 <= sigma_hat^2 <= (1 + s) sigma^2,  s = sqrt(eps p_i / (n d_avg))
/// Root nodes have a zero budget, so the variance bracket collapses to equality there.
struct BudgetCheck {
  std::vector<bool> coefficient_ok;
  std::vector<bool> variance_ok;
};
BudgetCheck check_kl_budget(const GaussianBayesNet& truth, const GaussianBayesNet& estimate,
                            double epsilon);

}  // namespace gbnlearn
