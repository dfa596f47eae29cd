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

#include "gbnlearn/gbn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gbnlearn/error.hpp"

namespace gbnlearn {

namespace {

// ln det of an SPD matrix, or nullopt when the Cholesky factorization fails.
std::optional<double> log_det_spd(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto diag = llt.matrixLLT().diagonal();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0) || !std::isfinite(diag(i))) return std::nullopt;
    acc += std::log(diag(i));
  }
  return 2.0 * acc;
}

}  // namespace

GaussianBayesNet::GaussianBayesNet(Dag dag, std::vector<Eigen::VectorXd> coefficients,
                                   std::vector<double> variances)
    : dag_(std::move(dag)), coefficients_(std::move(coefficients)), variances_(std::move(variances)) {
  const std::size_t n = dag_.node_count();
  if (coefficients_.size() != n || variances_.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "model arrays do not match node count " + std::to_string(n));
  }
  for (NodeId i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(coefficients_[i].size()) != dag_.in_degree(i)) {
      throw Error(ErrorCode::DimensionMismatch,
                  "node " + std::to_string(i) + " has " + std::to_string(dag_.in_degree(i)) +
                      " parents but " + std::to_string(coefficients_[i].size()) + " coefficients");
    }
    if (!(variances_[i] > 0.0) || !std::isfinite(variances_[i])) {
      throw Error(ErrorCode::NonPositiveVariance,
                  "node " + std::to_string(i) + " variance " + std::to_string(variances_[i]));
    }
  }
}

Eigen::MatrixXd GaussianBayesNet::weight_matrix() const {
  const auto n = static_cast<Eigen::Index>(node_count());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (NodeId i = 0; i < node_count(); ++i) {
    const auto ps = dag_.parents(i);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      b(static_cast<Eigen::Index>(ps[k]), static_cast<Eigen::Index>(i)) =
          coefficients_[i](static_cast<Eigen::Index>(k));
    }
  }
  return b;
}

GaussianBayesNet random_gbn(const Dag& dag, double lo, double hi, const VarianceSpec& variances,
                            Rng& rng) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::InvalidRange, "weight range must satisfy 0 < lo < hi");
  }
  const std::size_t n = dag.node_count();
  std::vector<Eigen::VectorXd> coeffs(n);
  for (NodeId i = 0; i < n; ++i) {
    coeffs[i].resize(static_cast<Eigen::Index>(dag.in_degree(i)));
    for (Eigen::Index k = 0; k < coeffs[i].size(); ++k) {
      const double sign = rng.coin() ? -1.0 : 1.0;
      coeffs[i](k) = sign * rng.uniform(lo, hi);
    }
  }

  std::vector<double> sigma2(n, 1.0);
  switch (variances.kind) {
    case VarianceSpec::Kind::Unit:
      break;
    case VarianceSpec::Kind::UniformRange:
      if (!(variances.lo > 0.0) || variances.hi < variances.lo) {
        throw Error(ErrorCode::InvalidRange, "variance range must satisfy 0 < lo <= hi");
      }
      for (auto& v : sigma2) v = rng.uniform(variances.lo, variances.hi);
      break;
    case VarianceSpec::Kind::IllConditioned:
      if (!(variances.tiny_variance > 0.0)) {
        throw Error(ErrorCode::InvalidRange, "ill-conditioned variance must be positive");
      }
      for (NodeId v : variances.ill_nodes) {
        if (v >= n) throw Error(ErrorCode::InvalidIndex, "ill-conditioned node out of range");
        sigma2[v] = variances.tiny_variance;
      }
      break;
  }
  return GaussianBayesNet(dag, std::move(coeffs), std::move(sigma2));
}

SampleMatrix sample(const GaussianBayesNet& gbn, std::size_t m, Rng& rng,
                    const ContaminationTargets* contamination) {
  const std::size_t n = gbn.node_count();
  SampleMatrix data(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));

  std::vector<bool> hit_row(m, false);
  std::vector<bool> hit_node(n, false);
  std::optional<Rng> gross;
  if (contamination != nullptr) {
    for (std::size_t r : contamination->rows) {
      if (r >= m) throw Error(ErrorCode::InvalidIndex, "contaminated row out of range");
      hit_row[r] = true;
    }
    for (NodeId v : contamination->nodes) {
      if (v >= n) throw Error(ErrorCode::InvalidIndex, "contaminated node out of range");
      hit_node[v] = true;
    }
    gross.emplace(contamination->seed);
  }

  std::vector<double> stddev(n);
  for (NodeId i = 0; i < n; ++i) stddev[i] = std::sqrt(gbn.variance(i));

  const auto order = gbn.dag().topological_order();
  for (std::size_t r = 0; r < m; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    for (NodeId i : order) {
      double noise = rng.normal() * stddev[i];
      if (hit_row[r] && hit_node[i]) {
        noise = contamination->law == NoiseLaw::Gaussian
                    ? gross->normal(contamination->location, contamination->scale)
                    : gross->cauchy(contamination->location, contamination->scale);
      }
      const auto ps = gbn.dag().parents(i);
      const auto& a = gbn.coefficients(i);
      double value = noise;
      for (std::size_t k = 0; k < ps.size(); ++k) {
        value += a(static_cast<Eigen::Index>(k)) * data(row, static_cast<Eigen::Index>(ps[k]));
      }
      data(row, static_cast<Eigen::Index>(i)) = value;
    }
  }
  return data;
}

Eigen::MatrixXd covariance(const GaussianBayesNet& gbn) {
  // Row-by-row in topological order: Cov(X_i, X_k) = sum_j a_{i<-j} Cov(X_j, X_k)
  // for every k placed before i, and Var(X_i) = A^T M A + sigma_i^2.
  const std::size_t n = gbn.node_count();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto order = gbn.dag().topological_order();
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto i = static_cast<Eigen::Index>(order[pos]);
    const auto ps = gbn.dag().parents(order[pos]);
    const auto& a = gbn.coefficients(order[pos]);
    for (std::size_t prev = 0; prev < pos; ++prev) {
      const auto k = static_cast<Eigen::Index>(order[prev]);
      double c = 0.0;
      for (std::size_t t = 0; t < ps.size(); ++t) {
        c += a(static_cast<Eigen::Index>(t)) * sigma(static_cast<Eigen::Index>(ps[t]), k);
      }
      sigma(i, k) = c;
      sigma(k, i) = c;
    }
    double v = gbn.variance(order[pos]);
    for (std::size_t s = 0; s < ps.size(); ++s) {
      for (std::size_t t = 0; t < ps.size(); ++t) {
        v += a(static_cast<Eigen::Index>(s)) * a(static_cast<Eigen::Index>(t)) *
             sigma(static_cast<Eigen::Index>(ps[s]), static_cast<Eigen::Index>(ps[t]));
      }
    }
    sigma(i, i) = v;
  }
  return sigma;
}

Eigen::MatrixXd parent_covariance(const Eigen::MatrixXd& full_covariance, const Dag& dag, NodeId i) {
  const auto ps = dag.parents(i);
  if (ps.empty()) throw Error(ErrorCode::NoParents, "node " + std::to_string(i) + " has no parents");
  const auto p = static_cast<Eigen::Index>(ps.size());
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index s = 0; s < p; ++s) {
    for (Eigen::Index t = 0; t < p; ++t) {
      m(s, t) = full_covariance(static_cast<Eigen::Index>(ps[static_cast<std::size_t>(s)]),
                                static_cast<Eigen::Index>(ps[static_cast<std::size_t>(t)]));
    }
  }
  return m;
}

Eigen::MatrixXd parent_covariance(const GaussianBayesNet& gbn, NodeId i) {
  return parent_covariance(covariance(gbn), gbn.dag(), i);
}

double dcp(const NodeParams& truth, const NodeParams& estimate, const Eigen::MatrixXd& parent_cov) {
  if (!(truth.variance > 0.0) || !(estimate.variance > 0.0)) {
    throw Error(ErrorCode::NonPositiveVariance, "d_CP needs strictly positive variances");
  }
  const auto p = truth.coefficients.size();
  if (estimate.coefficients.size() != p || (p > 0 && (parent_cov.rows() != p || parent_cov.cols() != p))) {
    throw Error(ErrorCode::DimensionMismatch, "d_CP operands disagree on the parent count");
  }
  const double ratio = truth.variance / estimate.variance;
  double value = 0.5 * (-std::log(ratio)) + 0.5 * (ratio - 1.0);
  if (p > 0) {
    const Eigen::VectorXd delta = estimate.coefficients - truth.coefficients;
    value += delta.dot(parent_cov * delta) / (2.0 * estimate.variance);
  }
  return value;
}

double pinsker_tv_bound(double kl) { return std::min(1.0, std::sqrt(std::max(kl, 0.0) / 2.0)); }

EvalReport kl_divergence(const GaussianBayesNet& truth, const GaussianBayesNet& estimate) {
  if (!(truth.dag() == estimate.dag())) {
    throw Error(ErrorCode::StructureMismatch, "decomposed KL needs both models on the same DAG");
  }
  const std::size_t n = truth.node_count();
  const Eigen::MatrixXd sigma = covariance(truth);
  EvalReport report;
  report.per_node_dcp.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    const NodeParams t{truth.coefficients(i), truth.variance(i)};
    const NodeParams e{estimate.coefficients(i), estimate.variance(i)};
    const Eigen::MatrixXd m =
        truth.dag().in_degree(i) > 0 ? parent_covariance(sigma, truth.dag(), i) : Eigen::MatrixXd();
    report.per_node_dcp[i] = dcp(t, e, m);
  }
  double total = 0.0;
  for (double term : report.per_node_dcp) total += term;
  report.kl_total = total;
  report.tv_upper = pinsker_tv_bound(std::max(total, -1e-12));
  return report;
}

double gaussian_kl(const Eigen::MatrixXd& sigma_p, const Eigen::MatrixXd& sigma_q) {
  if (sigma_p.rows() != sigma_p.cols() || sigma_q.rows() != sigma_q.cols() ||
      sigma_p.rows() != sigma_q.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "gaussian_kl needs two square matrices of equal size");
  }
  const Eigen::LLT<Eigen::MatrixXd> lp(sigma_p);
  const Eigen::LLT<Eigen::MatrixXd> lq(sigma_q);
  const auto log_det_p = log_det_spd(lp);
  const auto log_det_q = log_det_spd(lq);
  if (!log_det_p || !log_det_q) {
    throw Error(ErrorCode::NotPositiveDefinite, "covariance is not positive definite");
  }
  // tr(Sq^{-1} Sp) = ||Lq^{-1} Lp||_F^2
  const Eigen::MatrixXd lp_mat = lp.matrixL();
  const Eigen::MatrixXd w = lq.matrixL().solve(lp_mat);
  const double trace = w.squaredNorm();
  const double n = static_cast<double>(sigma_p.rows());
  return 0.5 * (trace - n + *log_det_q - *log_det_p);
}

BudgetCheck check_kl_budget(const GaussianBayesNet& truth, const GaussianBayesNet& estimate,
                            double epsilon) {
  if (!(truth.dag() == estimate.dag())) {
    throw Error(ErrorCode::StructureMismatch, "budget check needs both models on the same DAG");
  }
  const std::size_t n = truth.node_count();
  const Eigen::MatrixXd sigma = covariance(truth);
  const double total_parents = static_cast<double>(truth.dag().edge_count());
  BudgetCheck out{std::vector<bool>(n), std::vector<bool>(n)};
  for (NodeId i = 0; i < n; ++i) {
    const double p = static_cast<double>(truth.dag().in_degree(i));
    const double share = total_parents > 0.0 ? epsilon * p / total_parents : 0.0;
    const double s2 = truth.variance(i);
    double quad = 0.0;
    if (p > 0) {
      const Eigen::VectorXd delta = estimate.coefficients(i) - truth.coefficients(i);
      quad = delta.dot(parent_covariance(sigma, truth.dag(), i) * delta);
    }
    out.coefficient_ok[i] = std::abs(quad) <= s2 * share;
    const double slack = std::sqrt(share);
    const double v = estimate.variance(i);
    out.variance_ok[i] = (1.0 - slack) * s2 <= v && v <= (1.0 + slack) * s2;
  }
  return out;
}

}  // namespace gbnlearn
