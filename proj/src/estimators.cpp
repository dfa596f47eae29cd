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

#include "gbnlearn/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gbnlearn/error.hpp"
#include "gbnlearn/stats.hpp"

namespace gbnlearn {

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kMadScale = 1.4826;

std::string rows_msg(Eigen::Index have, std::size_t need) {
  return std::to_string(have) + " rows available, " + std::to_string(need) + " required";
}

Eigen::VectorXd coordinate_median(const std::vector<Eigen::VectorXd>& solutions) {
  const Eigen::Index p = solutions.front().size();
  Eigen::VectorXd out(p);
  std::vector<double> column(solutions.size());
  for (Eigen::Index c = 0; c < p; ++c) {
    for (std::size_t s = 0; s < solutions.size(); ++s) column[s] = solutions[s](c);
    out(c) = stats::median_inplace(column);
  }
  return out;
}

// Square solves over floor(rows / p) consecutive batches of p rows.
std::vector<Eigen::VectorXd> square_batch_solutions(const Eigen::MatrixXd& parents,
                                                    const Eigen::VectorXd& target) {
  const Eigen::Index p = parents.cols();
  const Eigen::Index batches = p > 0 ? parents.rows() / p : 0;
  if (batches < 1) {
    throw Error(ErrorCode::InsufficientSamples, "need at least one batch of p rows: " +
                                                    rows_msg(parents.rows(), static_cast<std::size_t>(p)));
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(batches));
  for (Eigen::Index s = 0; s < batches; ++s) {
    out.push_back(batch_solve(parents.middleRows(s * p, p), target.segment(s * p, p)));
  }
  return out;
}

void check_shapes(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target) {
  if (parents.rows() != target.size()) {
    throw Error(ErrorCode::DimensionMismatch, "parent block has " + std::to_string(parents.rows()) +
                                                  " rows, target has " + std::to_string(target.size()));
  }
}

}  // namespace

std::string_view to_string(CoefficientMethod method) noexcept {
  switch (method) {
    case CoefficientMethod::LeastSquares: return "least_squares";
    case CoefficientMethod::BatchAvg: return "batch_avg";
    case CoefficientMethod::BatchMed: return "batch_med";
    case CoefficientMethod::CauchyEst: return "cauchy_est";
    case CoefficientMethod::CauchyEstTree: return "cauchy_est_tree";
    case CoefficientMethod::EmpiricalMle: return "empirical_mle";
  }
  return "unknown";
}

std::string_view to_string(VarianceMethod method) noexcept {
  return method == VarianceMethod::Empirical ? "empirical" : "mad";
}

std::optional<CoefficientMethod> parse_coefficient_method(std::string_view name) noexcept {
  for (auto m : {CoefficientMethod::LeastSquares, CoefficientMethod::BatchAvg, CoefficientMethod::BatchMed,
                 CoefficientMethod::CauchyEst, CoefficientMethod::CauchyEstTree,
                 CoefficientMethod::EmpiricalMle}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<VarianceMethod> parse_variance_method(std::string_view name) noexcept {
  if (name == "empirical") return VarianceMethod::Empirical;
  if (name == "mad") return VarianceMethod::Mad;
  return std::nullopt;
}

void FitConfig::validate() const {
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "split_fraction must lie in (0, 1)");
  }
  const bool batched = method == CoefficientMethod::BatchAvg || method == CoefficientMethod::BatchMed;
  if (batched && batch_extra < 1) {
    throw Error(ErrorCode::ConfigInvalid, "batch methods need batch_extra >= 1 so that k > p");
  }
}

Eigen::VectorXd least_squares_node(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target) {
  check_shapes(parents, target);
  const Eigen::Index p = parents.cols();
  if (parents.rows() < p) {
    throw Error(ErrorCode::InsufficientSamples, rows_msg(parents.rows(), static_cast<std::size_t>(p)));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(parents);
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < p) {
    throw Error(ErrorCode::RankDeficient, "parent block has numerical rank " + std::to_string(qr.rank()) +
                                              " < " + std::to_string(p));
  }
  return qr.solve(target);
}

BatchOutcome batch_least_squares(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target,
                                 std::size_t batch_size, Aggregator aggregator) {
  check_shapes(parents, target);
  const auto p = static_cast<std::size_t>(parents.cols());
  if (batch_size <= p) {
    throw Error(ErrorCode::BatchTooSmall, "batch size " + std::to_string(batch_size) +
                                              " must exceed parent count " + std::to_string(p));
  }
  const auto k = static_cast<Eigen::Index>(batch_size);
  const Eigen::Index batches = parents.rows() / k;
  if (batches < 1) {
    throw Error(ErrorCode::InsufficientSamples, rows_msg(parents.rows(), batch_size));
  }

  BatchOutcome outcome;
  std::vector<Eigen::VectorXd> solutions;
  solutions.reserve(static_cast<std::size_t>(batches));
  for (Eigen::Index s = 0; s < batches; ++s) {
    try {
      solutions.push_back(least_squares_node(parents.middleRows(s * k, k), target.segment(s * k, k)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      ++outcome.batches_skipped;
    }
  }
  if (solutions.empty()) {
    throw Error(ErrorCode::RankDeficient, "all " + std::to_string(batches) + " batches were rank deficient");
  }
  outcome.batches_used = solutions.size();

  if (aggregator == Aggregator::Mean) {
    Eigen::VectorXd sum = solutions.front();
    for (std::size_t s = 1; s < solutions.size(); ++s) sum += solutions[s];
    outcome.estimate = sum / static_cast<double>(solutions.size());
  } else {
    outcome.estimate = coordinate_median(solutions);
  }
  return outcome;
}

Eigen::VectorXd batch_solve(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target) {
  check_shapes(parents, target);
  if (parents.rows() != parents.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "batch system must be square");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(parents);
  // rcond estimate at machine precision marks the system as singular.
  const double rcond = lu.rcond();
  if (rcond > std::numeric_limits<double>::epsilon() * static_cast<double>(parents.rows())) {
    Eigen::VectorXd x = lu.solve(target);
    if (x.allFinite()) return x;
  }
  return parents.completeOrthogonalDecomposition().solve(target);
}

Eigen::VectorXd cauchy_est_tree_node(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target) {
  check_shapes(parents, target);
  return coordinate_median(square_batch_solutions(parents, target));
}

Eigen::VectorXd cauchy_est_node(const Eigen::MatrixXd& parents, const Eigen::VectorXd& target) {
  check_shapes(parents, target);
  const Eigen::Index p = parents.cols();
  if (parents.rows() < p + 1) {
    throw Error(ErrorCode::InsufficientSamples, rows_msg(parents.rows(), static_cast<std::size_t>(p + 1)));
  }
  const Eigen::MatrixXd moment =
      (parents.transpose() * parents) / static_cast<double>(parents.rows());
  const Eigen::LLT<Eigen::MatrixXd> llt(moment);
  const double scale = moment.diagonal().maxCoeff();
  bool ok = llt.info() == Eigen::Success && scale > 0.0 && std::isfinite(scale);
  if (ok) {
    const auto diag = llt.matrixLLT().diagonal();
    const double floor = 16.0 * static_cast<double>(p) * std::numeric_limits<double>::epsilon() * scale;
    for (Eigen::Index i = 0; i < p && ok; ++i) ok = diag(i) * diag(i) > floor;
  }
  if (!ok) {
    throw Error(ErrorCode::CholeskyFailed, "empirical parent covariance is not numerically positive definite");
  }
  const Eigen::MatrixXd upper = llt.matrixU();  // L^T

  auto solutions = square_batch_solutions(parents, target);
  for (auto& s : solutions) s = upper * s;
  const Eigen::VectorXd med = coordinate_median(solutions);
  return upper.triangularView<Eigen::Upper>().solve(med);
}

Eigen::MatrixXd empirical_mle(const SampleMatrix& data) {
  if (data.rows() < 1) throw Error(ErrorCode::InsufficientSamples, "empirical covariance needs m >= 1");
  return (data.transpose() * data) / static_cast<double>(data.rows());
}

Eigen::MatrixXd parent_block(const SampleMatrix& data, const Dag& dag, NodeId i, Eigen::Index first_row,
                             Eigen::Index rows) {
  const auto ps = dag.parents(i);
  Eigen::MatrixXd block(rows, static_cast<Eigen::Index>(ps.size()));
  for (std::size_t k = 0; k < ps.size(); ++k) {
    block.col(static_cast<Eigen::Index>(k)) =
        data.col(static_cast<Eigen::Index>(ps[k])).segment(first_row, rows);
  }
  return block;
}

CoefficientEstimates estimate_coefficients(const Dag& dag, const SampleMatrix& data, const FitConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(data.cols()) != dag.node_count()) {
    throw Error(ErrorCode::DimensionMismatch, "data has " + std::to_string(data.cols()) +
                                                  " columns for a " + std::to_string(dag.node_count()) +
                                                  "-node DAG");
  }
  if (config.method == CoefficientMethod::EmpiricalMle) {
    throw Error(ErrorCode::ConfigInvalid,
                "empirical_mle yields a covariance matrix, not per-node coefficients");
  }
  const Eigen::Index rows = data.rows();
  CoefficientEstimates out(dag.node_count());
  for (NodeId i = 0; i < dag.node_count(); ++i) {
    const std::size_t p = dag.in_degree(i);
    if (p == 0) continue;
    const Eigen::MatrixXd x = parent_block(data, dag, i, 0, rows);
    const Eigen::VectorXd y = data.col(static_cast<Eigen::Index>(i));
    try {
      switch (config.method) {
        case CoefficientMethod::LeastSquares:
          out[i] = least_squares_node(x, y);
          break;
        case CoefficientMethod::BatchAvg:
        case CoefficientMethod::BatchMed:
          out[i] = batch_least_squares(x, y, p + config.batch_extra,
                                       config.method == CoefficientMethod::BatchAvg ? Aggregator::Mean
                                                                                    : Aggregator::CoordinateMedian)
                       .estimate;
          break;
        case CoefficientMethod::CauchyEst:
          out[i] = cauchy_est_node(x, y);
          break;
        case CoefficientMethod::CauchyEstTree:
          out[i] = cauchy_est_tree_node(x, y);
          break;
        case CoefficientMethod::EmpiricalMle:
          break;
      }
    } catch (const Error& e) {
      throw Error(e.code(), "node " + std::to_string(i) + " (p=" + std::to_string(p) + "): " + e.detail());
    }
    if (!out[i].allFinite()) {
      throw Error(ErrorCode::RankDeficient, "node " + std::to_string(i) + ": non-finite coefficient estimate");
    }
  }
  return out;
}

namespace {

Eigen::VectorXd residuals(const Dag& dag, const SampleMatrix& data, const CoefficientEstimates& coefficients,
                          NodeId i) {
  Eigen::VectorXd r = data.col(static_cast<Eigen::Index>(i));
  if (dag.in_degree(i) > 0) {
    r -= parent_block(data, dag, i, 0, data.rows()) * coefficients.at(i);
  }
  return r;
}

void check_recovery_inputs(const Dag& dag, const SampleMatrix& data, const CoefficientEstimates& coefficients) {
  if (data.rows() < 1) throw Error(ErrorCode::InsufficientSamples, "variance recovery needs m2 >= 1");
  if (static_cast<std::size_t>(data.cols()) != dag.node_count() || coefficients.size() != dag.node_count()) {
    throw Error(ErrorCode::DimensionMismatch, "variance recovery inputs disagree on node count");
  }
  for (NodeId i = 0; i < dag.node_count(); ++i) {
    if (static_cast<std::size_t>(coefficients[i].size()) != dag.in_degree(i)) {
      throw Error(ErrorCode::DimensionMismatch, "coefficient vector of node " + std::to_string(i) +
                                                    " does not match its parent count");
    }
  }
}

}  // namespace

std::vector<double> variance_recovery(const Dag& dag, const SampleMatrix& data,
                                      const CoefficientEstimates& coefficients) {
  check_recovery_inputs(dag, data, coefficients);
  std::vector<double> out(dag.node_count());
  for (NodeId i = 0; i < dag.node_count(); ++i) {
    out[i] = residuals(dag, data, coefficients, i).squaredNorm() / static_cast<double>(data.rows());
  }
  return out;
}

double mad_variance(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InsufficientSamples, "MAD needs at least one residual");
  std::vector<double> work(values.begin(), values.end());
  const double centre = stats::median_inplace(work);
  for (std::size_t k = 0; k < values.size(); ++k) work[k] = std::abs(values[k] - centre);
  const double sigma = kMadScale * stats::median_inplace(work);
  return sigma * sigma;
}

std::vector<double> mad_variance_recovery(const Dag& dag, const SampleMatrix& data,
                                          const CoefficientEstimates& coefficients) {
  check_recovery_inputs(dag, data, coefficients);
  std::vector<double> out(dag.node_count());
  for (NodeId i = 0; i < dag.node_count(); ++i) {
    const Eigen::VectorXd r = residuals(dag, data, coefficients, i);
    out[i] = mad_variance(std::span<const double>(r.data(), static_cast<std::size_t>(r.size())));
  }
  return out;
}

bool FitResult::any_degenerate() const noexcept {
  for (bool d : degenerate) {
    if (d) return true;
  }
  return false;
}

FitResult fit(const Dag& dag, const SampleMatrix& data, const FitConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(data.cols()) != dag.node_count()) {
    throw Error(ErrorCode::DimensionMismatch, "data has " + std::to_string(data.cols()) +
                                                  " columns for a " + std::to_string(dag.node_count()) +
                                                  "-node DAG");
  }
  const Eigen::Index m = data.rows();
  const auto m1 = static_cast<Eigen::Index>(std::floor(config.split_fraction * static_cast<double>(m)));
  const Eigen::Index m2 = m - m1;
  if (m2 < 1) throw Error(ErrorCode::InsufficientSamples, "no rows left for variance recovery");

  // Per-method row requirement, reported with the first offending node.
  for (NodeId i = 0; i < dag.node_count(); ++i) {
    const std::size_t p = dag.in_degree(i);
    if (p == 0) continue;
    std::size_t need = p;
    switch (config.method) {
      case CoefficientMethod::BatchAvg:
      case CoefficientMethod::BatchMed:
        need = p + config.batch_extra;
        break;
      case CoefficientMethod::CauchyEst:
        need = p + 1;
        break;
      default:
        break;
    }
    if (static_cast<std::size_t>(m1) < need) {
      throw Error(ErrorCode::InsufficientSamples,
                  "node " + std::to_string(i) + ": " + rows_msg(m1, need) + " for " +
                      std::string(to_string(config.method)));
    }
  }

  const SampleMatrix coefficient_rows = data.topRows(m1);
  const SampleMatrix variance_rows = data.bottomRows(m2);
  const auto coefficients = estimate_coefficients(dag, coefficient_rows, config);
  auto variances = config.variance_method == VarianceMethod::Empirical
                       ? variance_recovery(dag, variance_rows, coefficients)
                       : mad_variance_recovery(dag, variance_rows, coefficients);

  std::vector<bool> degenerate(dag.node_count(), false);
  for (NodeId i = 0; i < dag.node_count(); ++i) {
    if (!(variances[i] > 0.0) || !std::isfinite(variances[i])) {
      variances[i] = kDegenerateVarianceFloor;
      degenerate[i] = true;
    }
  }
  return FitResult{GaussianBayesNet(dag, coefficients, std::move(variances)), std::move(degenerate),
                   static_cast<std::size_t>(m1), static_cast<std::size_t>(m2)};
}

}  // namespace gbnlearn
