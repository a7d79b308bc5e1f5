#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "maid/fista.hpp"
#include "maid/image.hpp"
#include "maid/problems/logistic.hpp"
#include "maid/problems/quadratic.hpp"
#include "maid/problems/robust_loss.hpp"
#include "maid/problems/tv_denoise.hpp"
#include "maid/random.hpp"
#include "oracles.hpp"

namespace maid {
namespace {

using testing::LeastSquaresOracle;
using testing::numeric_gradient;
using testing::rel_error;

QuadraticBilevel paper_quadratic(std::uint64_t seed) {
  return QuadraticBilevel::synthesize({.rows = 1000, .n = 10, .d = 10, .noise = 0.01, .seed = seed});
}

TEST(Quadratic, OracleAgreesWithIndependentLeastSquares) {
  const QuadraticBilevel problem = paper_quadratic(1);
  const LeastSquaresOracle oracle(problem);
  Rng rng(2);
  for (int draw = 0; draw < 5; ++draw) {
    const ParamVector theta = standard_normal(10, rng);
    EXPECT_LE(rel_error(problem.exact_lower_solution(theta), oracle.x_hat(theta)), 1e-10);
    EXPECT_NEAR(problem.exact_upper_value(theta), oracle.f(theta), 1e-9 * oracle.f(theta));
    EXPECT_LE(rel_error(problem.exact_hypergradient(theta), oracle.grad_f(theta)), 1e-9);
  }
}

TEST(Quadratic, HypergradientMatchesFiniteDifferences) {
  const QuadraticBilevel problem = paper_quadratic(3);
  const LeastSquaresOracle oracle(problem);
  Rng rng(4);
  for (int draw = 0; draw < 5; ++draw) {
    const ParamVector theta = standard_normal(10, rng);
    const ParamVector fd = numeric_gradient([&](const Eigen::VectorXd& t) { return oracle.f(t); }, theta, 1e-4);
    EXPECT_LE(rel_error(problem.exact_hypergradient(theta), fd), 1e-6);
  }
}

TEST(Quadratic, ConsistentInstanceReproducesPlantedState) {
  Rng rng(5);
  const Eigen::MatrixXd A1 = Eigen::MatrixXd::Random(40, 4);
  const Eigen::MatrixXd A2 = Eigen::MatrixXd::Random(40, 4);
  const Eigen::MatrixXd A3 = Eigen::MatrixXd::Random(40, 3);
  const Eigen::VectorXd x0 = standard_normal(4, rng);
  const Eigen::VectorXd theta = standard_normal(3, rng);
  const Eigen::VectorXd b2 = A2 * x0 + A3 * theta;
  const QuadraticBilevel problem(A1, A2, A3, Eigen::VectorXd::Zero(40), b2);
  EXPECT_LE((problem.exact_lower_solution(theta) - x0).norm(), 1e-10);
  EXPECT_LE(problem.lower_grad(x0, theta).norm(), 1e-10);
}

TEST(Quadratic, ScalarInstance) {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const QuadraticBilevel problem(one, one, one, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1));
  for (double t : {-2.0, 0.5, 3.0}) {
    const ParamVector theta = ParamVector::Constant(1, t);
    EXPECT_DOUBLE_EQ(problem.exact_lower_solution(theta)[0], -t);
    EXPECT_DOUBLE_EQ(problem.exact_upper_value(theta), t * t);
    EXPECT_DOUBLE_EQ(problem.exact_hypergradient(theta)[0], 2.0 * t);
  }
  EXPECT_DOUBLE_EQ(problem.mu(ParamVector::Zero(1)), 2.0);
  EXPECT_DOUBLE_EQ(problem.lip_lower(ParamVector::Zero(1)), 2.0);
  EXPECT_DOUBLE_EQ(problem.lip_upper_grad(), 2.0);
}

TEST(Quadratic, ConstantsAreExtremeEigenvalues) {
  const QuadraticBilevel problem = paper_quadratic(6);
  const LeastSquaresOracle oracle(problem);
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(oracle.hessian()).eigenvalues();
  const Eigen::VectorXd upper = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(oracle.upper_hessian()).eigenvalues();
  const ParamVector theta = ParamVector::Zero(10);
  EXPECT_NEAR(problem.mu(theta), eig(0), 1e-9 * eig(0));
  EXPECT_NEAR(problem.lip_lower(theta), eig(9), 1e-9 * eig(9));
  EXPECT_NEAR(problem.lip_upper_grad(), upper(9), 1e-9 * upper(9));
}

TEST(Quadratic, RejectsRankDeficientLowerLevel) {
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Random(20, 3);
  A2.col(2) = A2.col(1);
  EXPECT_THROW(QuadraticBilevel(Eigen::MatrixXd::Random(20, 3), A2, Eigen::MatrixXd::Random(20, 2),
                                Eigen::VectorXd::Zero(20), Eigen::VectorXd::Zero(20)),
               ConfigError);
}

TEST(Quadratic, SynthesisIsSeeded) {
  EXPECT_EQ(paper_quadratic(9).b2(), paper_quadratic(9).b2());
  EXPECT_NE(paper_quadratic(9).b2(), paper_quadratic(10).b2());
  const QuadraticBilevel q = paper_quadratic(9);
  EXPECT_GE(q.A1().minCoeff(), 0.0);
  EXPECT_LE(q.A1().maxCoeff(), 1.0);
}

TEST(TvDenoise, ConstantImageGradientIsDataTerm) {
  Image flat(10, 9);
  flat.pixels.setConstant(0.4);
  Image noisy(10, 9);
  Rng rng(1);
  noisy.pixels = standard_normal(90, rng);
  TVDenoise tv({noisy}, {flat});
  ParamVector theta(2);
  theta << 0.3, -1.0;
  const StateVector grad = tv.lower_grad(flat.pixels, theta);
  EXPECT_LE((grad - (flat.pixels - noisy.pixels)).norm(), 1e-14);
}

TEST(TvDenoise, TinyWeightReturnsInput) {
  TvDataset data = synth_tv_dataset(16, 12, 1, 0.1, 2);
  TVDenoise tv(data.noisy, data.ground_truth);
  ParamVector theta(2);
  theta << -30.0, -2.0;
  Budget budget(std::nullopt);
  const LowerState s = fista_solve(tv, theta, StateVector::Zero(tv.dims().n), 1e-10, budget);
  EXPECT_LE((s.x_tilde - tv.noisy()).norm(), 1e-8);
}

TEST(TvDenoise, DeclaredLipschitzDominatesHessian) {
  TvDataset data = synth_tv_dataset(16, 16, 2, 0.1, 3);
  TVDenoise tv(data.noisy, data.ground_truth);
  Rng rng(4);
  for (int draw = 0; draw < 10; ++draw) {
    ParamVector theta = standard_normal(2, rng);
    const StateVector x = standard_normal(tv.dims().n, rng);
    const StateVector v = random_unit_vector(tv.dims().n, rng);
    const double rq = v.dot(tv.lower_hvp(x, theta, v));
    EXPECT_GE(rq, tv.mu(theta) * (1.0 - 1e-12));
    EXPECT_LE(rq, tv.lip_lower(theta));
  }
  ParamVector theta(2);
  theta << 0.5, -1.5;
  EXPECT_DOUBLE_EQ(tv.lip_lower(theta), 1.0 + 8.0 * std::exp(0.5) / std::exp(-1.5));
}

TEST(TvDenoise, UpperLossIsMeanHalfSquaredError) {
  TvDataset data = synth_tv_dataset(8, 8, 3, 0.1, 5);
  TVDenoise tv(data.noisy, data.ground_truth);
  double expected = 0.0;
  for (int t = 0; t < 3; ++t) expected += 0.5 * (data.noisy[t].pixels - data.ground_truth[t].pixels).squaredNorm();
  EXPECT_NEAR(tv.upper_value(tv.noisy()), expected / 3.0, 1e-12);
  EXPECT_EQ(tv.unstack(tv.noisy())[1].pixels, data.noisy[1].pixels);
}

TEST(TvDataset, NoiseFreeMatchesTruth) {
  TvDataset data = synth_tv_dataset(12, 12, 3, 0.0, 6);
  for (int t = 0; t < 3; ++t) EXPECT_EQ(data.noisy[t].pixels, data.ground_truth[t].pixels);
}

TEST(TvDataset, PiecewiseConstantInUnitRange) {
  TvDataset data = synth_tv_dataset(32, 32, 4, 0.1, 7);
  for (const Image& img : data.ground_truth) {
    EXPECT_GE(img.pixels.minCoeff(), 0.0);
    EXPECT_LE(img.pixels.maxCoeff(), 1.0);
    int changes = 0;
    for (int r = 0; r < img.height; ++r)
      for (int c = 0; c + 1 < img.width; ++c) changes += img.at(r, c) != img.at(r, c + 1);
    EXPECT_LT(changes, img.height * img.width / 4);
  }
}

TEST(TvDataset, NoiseStatisticsAndPsnr) {
  TvDataset data = synth_tv_dataset(96, 96, 10, 0.1, 8);
  double sum = 0.0, sum_sq = 0.0, count = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd noise = data.noisy[t].pixels - data.ground_truth[t].pixels;
    sum += noise.sum();
    sum_sq += noise.squaredNorm();
    count += static_cast<double>(noise.size());
    EXPECT_NEAR(psnr(data.noisy[t].pixels, data.ground_truth[t].pixels), 20.0, 1.5);
  }
  const double mean = sum / count;
  const double std_dev = std::sqrt(sum_sq / count - mean * mean);
  EXPECT_GE(std_dev, 0.095);
  EXPECT_LE(std_dev, 0.105);
}

TEST(TvDataset, SeededAndValidated) {
  EXPECT_EQ(synth_tv_dataset(8, 8, 1, 0.1, 3).noisy[0].pixels, synth_tv_dataset(8, 8, 1, 0.1, 3).noisy[0].pixels);
  EXPECT_THROW(synth_tv_dataset(7, 8, 1, 0.1, 3), ConfigError);
}

TEST(Psnr, KnownValues) {
  const Eigen::VectorXd a = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(4, 0.1);
  EXPECT_NEAR(psnr(b, a), 20.0, 1e-12);
  EXPECT_TRUE(std::isinf(psnr(a, a)));
}

TEST(RobustLoss, BoundedAndNonConvexFlag) {
  TvDataset data = synth_tv_dataset(8, 8, 2, 0.1, 9);
  auto tv = std::make_shared<TVDenoise>(data.noisy, data.ground_truth);
  RobustLossWrapper robust(tv, tv->truth(), 2);
  EXPECT_FALSE(robust.upper_is_convex());
  EXPECT_DOUBLE_EQ(robust.lip_upper_grad(), 1.0);
  Rng rng(10);
  for (double scale : {0.0, 0.01, 1.0, 100.0, 1e6}) {
    const double g = robust.upper_value(tv->truth() + scale * standard_normal(tv->dims().n, rng));
    EXPECT_GE(g, 0.0);
    EXPECT_LT(g, 1.0);
  }
  EXPECT_EQ(robust.upper_value(tv->truth()), 0.0);
}

TEST(RobustLoss, MatchesPerBlockFormula) {
  TvDataset data = synth_tv_dataset(8, 8, 2, 0.1, 11);
  auto tv = std::make_shared<TVDenoise>(data.noisy, data.ground_truth);
  RobustLossWrapper robust(tv, tv->truth(), 2);
  double expected = 0.0;
  for (int t = 0; t < 2; ++t) {
    const double s = (data.noisy[t].pixels - data.ground_truth[t].pixels).squaredNorm();
    expected += s / (1.0 + s);
  }
  EXPECT_NEAR(robust.upper_value(tv->noisy()), expected / 2.0, 1e-14);
}

class LogisticFixture : public ::testing::Test {
 protected:
  LogisticFixture()
      : train_(synth_classification(20, 3, 4, 2.0, 12, 0)),
        val_(synth_classification(15, 3, 4, 2.0, 12, 1)),
        problem_(train_, val_) {}
  ClassificationData train_, val_;
  LogisticBilevel problem_;
};

TEST_F(LogisticFixture, ZeroWeightsGiveClassBalanceGradient) {
  const StateVector x = StateVector::Zero(12);
  const ParamVector theta = ParamVector::Constant(12, 0.7);
  // ∂/∂x_{kl} Σⱼ Ψ = Σⱼ a_{jk}(1/q − [bⱼ = l]) at uniform softmax.
  StateVector expected = StateVector::Zero(12);
  for (int j = 0; j < 20; ++j)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 4; ++l)
        expected[k * 4 + l] += train_.features(j, k) * (0.25 - (train_.labels[j] == l ? 1.0 : 0.0));
  EXPECT_LE((problem_.lower_grad(x, theta) - expected).norm(), 1e-12);
  EXPECT_EQ(problem_.mixed_jvp_transpose(x, theta, StateVector::Ones(12)), ParamVector::Zero(12));
  EXPECT_NEAR(problem_.lower_value(x, theta), 20.0 * std::log(4.0), 1e-12);
}

TEST_F(LogisticFixture, MixedDerivativeIsDiagonal) {
  Rng rng(13);
  const StateVector x = standard_normal(12, rng);
  const ParamVector theta = standard_normal(12, rng);
  const ParamVector w = standard_normal(12, rng);
  const StateVector expected = theta.array().exp() * x.array() * w.array();
  EXPECT_LE((problem_.mixed_jvp(x, theta, w) - expected).norm(), 1e-14);
}

TEST_F(LogisticFixture, RayleighQuotientAboveMu) {
  Rng rng(14);
  for (int draw = 0; draw < 10; ++draw) {
    const ParamVector theta = standard_normal(12, rng);
    const StateVector x = standard_normal(12, rng);
    const StateVector v = random_unit_vector(12, rng);
    const double rq = v.dot(problem_.lower_hvp(x, theta, v));
    EXPECT_GE(rq, problem_.mu(theta) * (1.0 - 1e-12));
    EXPECT_LE(rq, problem_.lip_lower(theta));
    EXPECT_DOUBLE_EQ(problem_.mu(theta), std::exp(theta.minCoeff()));
  }
}

TEST(Logistic, RejectsBadLabels) {
  ClassificationData train = synth_classification(10, 2, 3, 1.0, 1, 0);
  ClassificationData val = synth_classification(10, 2, 3, 1.0, 1, 1);
  train.labels[0] = 3;
  EXPECT_THROW(LogisticBilevel(train, val), ConfigError);
}

TEST(Logistic, SplitsShareCenters) {
  const ClassificationData a = synth_classification(400, 2, 2, 4.0, 3, 0);
  const ClassificationData b = synth_classification(400, 2, 2, 4.0, 3, 1);
  auto class_mean = [](const ClassificationData& d, int label) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d.features.cols());
    int n = 0;
    for (std::size_t j = 0; j < d.labels.size(); ++j)
      if (d.labels[j] == label) {
        m += d.features.row(static_cast<Eigen::Index>(j)).transpose();
        ++n;
      }
    return Eigen::VectorXd(m / n);
  };
  EXPECT_LE((class_mean(a, 0) - class_mean(b, 0)).norm(), 0.5);
  EXPECT_NE(a.features, b.features);
}

}  // namespace
}  // namespace maid
