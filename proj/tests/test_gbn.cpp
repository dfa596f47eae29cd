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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gbnlearn/estimators.hpp"
#include "gbnlearn/stats.hpp"
#include "test_support.hpp"

namespace gbnlearn {
namespace {

using testing::error_code_of;

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

GaussianBayesNet chain(double a, double s0 = 1.0, double s1 = 1.0) {
  const std::vector<Edge> e{{0, 1}};
  return GaussianBayesNet(build_dag(2, e), {Eigen::VectorXd(), vec({a})}, {s0, s1});
}

TEST(Model, RejectsInvalidParameters) {
  const std::vector<Edge> e{{0, 1}};
  const Dag dag = build_dag(2, e);
  EXPECT_EQ(error_code_of([&] { GaussianBayesNet(dag, {Eigen::VectorXd(), vec({1, 2})}, {1, 1}); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(error_code_of([&] { GaussianBayesNet(dag, {Eigen::VectorXd(), vec({1})}, {1, 0}); }),
            ErrorCode::NonPositiveVariance);
  EXPECT_EQ(error_code_of([&] { GaussianBayesNet(dag, {Eigen::VectorXd(), vec({1})}, {1}); }),
            ErrorCode::DimensionMismatch);
}

TEST(Model, RandomWeightsInRange) {
  Rng rng(11);
  const Dag dag = random_er_dag(40, 4.0, rng);
  const GaussianBayesNet gbn = random_gbn(dag, 0.5, 2.0, VarianceSpec::uniform_range(0.5, 3.0), rng);
  for (NodeId i = 0; i < gbn.node_count(); ++i) {
    for (Eigen::Index k = 0; k < gbn.coefficients(i).size(); ++k) {
      const double a = std::abs(gbn.coefficients(i)(k));
      EXPECT_GE(a, 0.5);
      EXPECT_LT(a, 2.0);
    }
    EXPECT_GE(gbn.variance(i), 0.5);
    EXPECT_LE(gbn.variance(i), 3.0);
  }
}

TEST(Model, IllConditionedNodes) {
  Rng rng(2);
  const Dag dag = random_tree_dag(10, rng);
  const auto gbn = random_gbn(dag, 1.0, 2.0, VarianceSpec::ill_conditioned({3, 7}), rng);
  for (NodeId i = 0; i < 10; ++i) EXPECT_EQ(gbn.variance(i), (i == 3 || i == 7) ? 1e-20 : 1.0);
}

TEST(Sample, NearDegenerateRoot) {
  const GaussianBayesNet gbn(build_dag(1, {}), {Eigen::VectorXd()}, {1e-30});
  Rng rng(1);
  const SampleMatrix x = sample(gbn, 1000, rng);
  EXPECT_LE(x.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Sample, ChainVariance) {
  Rng rng(123);
  const SampleMatrix x = sample(chain(2.0), 1000000, rng);
  const double var = x.col(1).squaredNorm() / static_cast<double>(x.rows());
  EXPECT_NEAR(var, 5.0, 0.05);
}

TEST(Sample, Deterministic) {
  Rng g(5);
  const auto gbn = random_gbn(random_er_dag(20, 3.0, g), 1.0, 2.0, VarianceSpec::unit(), g);
  Rng a(99);
  Rng b(99);
  const SampleMatrix xa = sample(gbn, 200, a);
  const SampleMatrix xb = sample(gbn, 200, b);
  EXPECT_TRUE((xa.array() == xb.array()).all());
}

TEST(Sample, EmpiricalCovarianceEnvelope) {
  Rng g(8);
  const auto gbn = random_gbn(random_tree_dag(10, g), 0.5, 1.0, VarianceSpec::unit(), g);
  const Eigen::MatrixXd sigma = covariance(gbn);
  const std::size_t m = 20000;
  std::vector<double> errs;
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    Rng rng(seed);
    errs.push_back((empirical_mle(sample(gbn, m, rng)) - sigma).norm());
  }
  EXPECT_LE(stats::median(errs), 10.0 * 10.0 / std::sqrt(static_cast<double>(m)));
}

TEST(Covariance, IndependentNodes) {
  const GaussianBayesNet gbn(build_dag(3, {}), {Eigen::VectorXd(), Eigen::VectorXd(), Eigen::VectorXd()},
                             {1.0, 2.0, 3.0});
  const Eigen::MatrixXd s = covariance(gbn);
  EXPECT_TRUE(s.isApprox(Eigen::Vector3d(1, 2, 3).asDiagonal().toDenseMatrix()));
}

TEST(Covariance, Chain) {
  Eigen::Matrix2d want;
  want << 1, 2, 2, 5;
  EXPECT_TRUE(covariance(chain(2.0)).isApprox(want, 1e-15));
}

TEST(Covariance, MatchesDenseInverseAndIsPd) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const Dag dag = testing::random_small_dag(rng, 12);
    const auto gbn = random_gbn(dag, 0.5, 2.0, VarianceSpec::uniform_range(0.2, 2.0), rng);
    const Eigen::MatrixXd s = covariance(gbn);
    const Eigen::MatrixXd want = testing::dense_covariance(gbn);
    EXPECT_LE((s - want).norm(), 1e-9 * std::max(1.0, want.norm())) << "seed " << seed;
    EXPECT_TRUE(s.isApprox(s.transpose()));
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(s).info(), Eigen::Success);
  }
}

TEST(ParentCovariance, Examples) {
  // 0 -> 1 with a = 2, both feeding node 2.
  const std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}};
  const GaussianBayesNet gbn(build_dag(3, e), {Eigen::VectorXd(), vec({2.0}), vec({1.0, 1.0})}, {1, 1, 1});
  Eigen::Matrix2d want;
  want << 1, 2, 2, 5;
  EXPECT_TRUE(parent_covariance(gbn, 2).isApprox(want, 1e-15));
  EXPECT_EQ(parent_covariance(gbn, 1).rows(), 1);
  EXPECT_DOUBLE_EQ(parent_covariance(gbn, 1)(0, 0), 1.0);
  EXPECT_EQ(error_code_of([&] { parent_covariance(gbn, 0); }), ErrorCode::NoParents);
}

TEST(ParentCovariance, PolytreeParentsUncorrelated) {
  const std::vector<Edge> star{{0, 3}, {1, 3}, {2, 3}};
  Rng rng(4);
  const auto gbn = random_gbn(build_dag(4, star), 1.0, 2.0, VarianceSpec::uniform_range(0.5, 2.0), rng);
  const Eigen::MatrixXd m = parent_covariance(gbn, 3);
  EXPECT_TRUE(m.isApprox(Eigen::MatrixXd(m.diagonal().asDiagonal())));
}

TEST(Dcp, Examples) {
  const Eigen::MatrixXd none(0, 0);
  EXPECT_EQ(dcp({Eigen::VectorXd(), 1.0}, {Eigen::VectorXd(), 1.0}, none), 0.0);
  EXPECT_NEAR(dcp({Eigen::VectorXd(), 1.0}, {Eigen::VectorXd(), 4.0}, none), std::log(2.0) - 3.0 / 8.0, 1e-15);
  EXPECT_NEAR(dcp({Eigen::VectorXd(), 1.0}, {Eigen::VectorXd(), 4.0}, none), 0.318147, 1e-6);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  EXPECT_NEAR(dcp({vec({1.0}), 1.0}, {vec({1.1}), 1.0}, one), 0.005, 1e-15);
}

TEST(Dcp, Errors) {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  EXPECT_EQ(error_code_of([&] { dcp({vec({1.0}), 1.0}, {vec({1.0, 2.0}), 1.0}, one); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(error_code_of([&] { dcp({vec({1.0}), 1.0}, {vec({1.0}), 0.0}, one); }),
            ErrorCode::NonPositiveVariance);
}

TEST(KlDivergence, IdenticalModelsExactlyZero) {
  Rng rng(3);
  const auto gbn = random_gbn(random_er_dag(30, 4.0, rng), 1.0, 2.0, VarianceSpec::unit(), rng);
  const EvalReport r = kl_divergence(gbn, gbn);
  EXPECT_EQ(r.kl_total, 0.0);
  EXPECT_EQ(r.tv_upper, 0.0);
  for (double t : r.per_node_dcp) EXPECT_EQ(t, 0.0);
}

TEST(KlDivergence, SinglePerturbedCoefficient) {
  const double delta = 0.3;
  const auto truth = chain(2.0, 1.5);
  const auto est = chain(2.0 + delta, 1.5);
  EXPECT_NEAR(kl_divergence(truth, est).kl_total, delta * delta * 1.5 / 2.0, 1e-15);
}

TEST(KlDivergence, StructureMismatch) {
  const auto a = chain(1.0);
  const GaussianBayesNet b(build_dag(2, {}), {Eigen::VectorXd(), Eigen::VectorXd()}, {1, 1});
  EXPECT_EQ(error_code_of([&] { kl_divergence(a, b); }), ErrorCode::StructureMismatch);
}

TEST(KlDivergence, OracleEquivalenceAndPinsker) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const Dag dag = testing::random_small_dag(rng);
    const auto truth = random_gbn(dag, 0.5, 2.0, VarianceSpec::uniform_range(0.5, 2.0), rng);
    const auto est = testing::perturb(truth, 0.3, rng);
    const EvalReport r = kl_divergence(truth, est);
    const double oracle = gaussian_kl(covariance(truth), covariance(est));
    ASSERT_LE(std::abs(r.kl_total - oracle), 1e-8 * std::max(1.0, r.kl_total)) << "seed " << seed;
    EXPECT_GE(r.kl_total, -1e-12);
    EXPECT_DOUBLE_EQ(r.tv_upper, std::min(1.0, std::sqrt(std::max(r.kl_total, 0.0) / 2.0)));
    double sum = 0.0;
    for (double t : r.per_node_dcp) sum += t;
    EXPECT_EQ(sum, r.kl_total);
  }
}

TEST(GaussianKl, Examples) {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(gaussian_kl(i2, i2), 0.0);
  EXPECT_NEAR(gaussian_kl(Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::MatrixXd::Constant(1, 1, 4.0)), 0.318147,
              1e-6);
  EXPECT_NEAR(gaussian_kl(i2, 2.0 * i2), std::log(2.0) - 0.5, 1e-15);
  EXPECT_NEAR(gaussian_kl(i2, 2.0 * i2), 0.193147, 1e-6);
}

TEST(GaussianKl, RejectsIndefinite) {
  Eigen::Matrix2d bad;
  bad << 1, 2, 2, 1;
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(error_code_of([&] { gaussian_kl(bad, i2); }), ErrorCode::NotPositiveDefinite);
  EXPECT_EQ(error_code_of([&] { gaussian_kl(i2, bad); }), ErrorCode::NotPositiveDefinite);
}

TEST(Pinsker, ClampsAndCaps) {
  EXPECT_EQ(pinsker_tv_bound(0.0), 0.0);
  EXPECT_EQ(pinsker_tv_bound(-1e-13), 0.0);
  EXPECT_DOUBLE_EQ(pinsker_tv_bound(0.5), 0.5);
  EXPECT_EQ(pinsker_tv_bound(10.0), 1.0);
}

TEST(Budget, ExactEstimatePassesEverywhere) {
  Rng rng(6);
  const auto gbn = random_gbn(random_tree_dag(20, rng), 1.0, 2.0, VarianceSpec::unit(), rng);
  const BudgetCheck c = check_kl_budget(gbn, gbn, 0.5);
  for (NodeId i = 0; i < 20; ++i) {
    EXPECT_TRUE(c.coefficient_ok[i]);
    EXPECT_TRUE(c.variance_ok[i]);
  }
}

TEST(Budget, FlagsLargeErrors) {
  const auto truth = chain(2.0);
  const auto est = testing::with_variances(chain(3.0), {1.0, 2.0});
  const BudgetCheck c = check_kl_budget(truth, est, 0.5);
  EXPECT_FALSE(c.coefficient_ok[1]);
  EXPECT_FALSE(c.variance_ok[1]);
}

}  // namespace
}  // namespace gbnlearn
