#include <gtest/gtest.h>

#include <limits>
#include <memory>

#include "maid/derivative_check.hpp"
#include "maid/image.hpp"
#include "maid/problems/logistic.hpp"
#include "maid/problems/quadratic.hpp"
#include "maid/problems/robust_loss.hpp"
#include "maid/problems/tv_denoise.hpp"
#include "maid/random.hpp"
#include "toy_problems.hpp"

namespace maid {
namespace {

using testing::FlippedHvp;
using testing::IsotropicQuadratic;

std::shared_ptr<QuadraticBilevel> small_quadratic(std::uint64_t seed = 1) {
  QuadraticBilevel::Synthesis s;
  s.rows = 200;
  s.seed = seed;
  return std::make_shared<QuadraticBilevel>(QuadraticBilevel::synthesize(s));
}

std::shared_ptr<TVDenoise> small_tv(std::uint64_t seed = 2) {
  TvDataset data = synth_tv_dataset(12, 10, 2, 0.1, seed);
  return std::make_shared<TVDenoise>(data.noisy, data.ground_truth);
}

TEST(CheckDerivatives, IdentityHessianIsExact) {
  const int n = 6;
  IsotropicQuadratic toy(1.0, Eigen::MatrixXd::Zero(n, 2), Eigen::VectorXd::Zero(n),
                         Eigen::VectorXd::Zero(n));
  Rng rng(4);
  const DerivativeReport r =
      check_derivatives(toy, standard_normal(2, rng), standard_normal(n, rng), 10, 9);
  EXPECT_LE(r.lower_hvp, 1e-9);
  EXPECT_EQ(r.hvp_symmetry, 0.0);
  EXPECT_NEAR(r.rayleigh_min, 1.0, 1e-14);
  EXPECT_NEAR(r.rayleigh_max, 1.0, 1e-14);
}

TEST(CheckDerivatives, QuadraticWithinOneMicro) {
  auto q = small_quadratic();
  Rng rng(5);
  for (int draw = 0; draw < 5; ++draw) {
    const ParamVector theta = standard_normal(10, rng);
    const StateVector x = standard_normal(10, rng);
    const DerivativeReport r = check_derivatives(*q, theta, x, 10, 100 + draw);
    EXPECT_LE(r.max_error(), 1e-6) << r.worst_check();
    EXPECT_TRUE(r.constants_consistent());
  }
}

TEST(CheckDerivatives, TvAtPaperStartingPoint) {
  auto tv = small_tv();
  Rng rng(6);
  ParamVector theta(2);
  theta << -5.0, -5.0;
  const StateVector x = tv->noisy() + 0.05 * standard_normal(tv->dims().n, rng);
  const DerivativeReport r = check_derivatives(*tv, theta, x, 10, 17);
  EXPECT_LE(r.max_error(), 1e-5) << r.worst_check();
  EXPECT_TRUE(r.constants_consistent());
}

TEST(CheckDerivatives, WholeZooAtTenDraws) {
  auto tv = small_tv();
  std::vector<std::pair<std::string, ProblemPtr>> zoo{
      {"quadratic", small_quadratic()},
      {"tv", tv},
      {"tv-robust", std::make_shared<RobustLossWrapper>(tv, tv->truth(), 2)},
      {"logistic", std::make_shared<LogisticBilevel>(synth_classification(20, 3, 3, 2.0, 8, 0),
                                                     synth_classification(15, 3, 3, 2.0, 8, 1))},
  };
  for (const auto& [name, problem] : zoo) {
    Rng rng(derive_seed(21, name));
    for (int draw = 0; draw < 10; ++draw) {
      ParamVector theta = 0.5 * standard_normal(problem->dims().d, rng);
      if (name.rfind("tv", 0) == 0) theta.array() -= 2.0;
      const StateVector x = problem->initial_state(theta) + 0.1 * standard_normal(problem->dims().n, rng);
      const DerivativeReport r = check_derivatives(*problem, theta, x, 1, derive_seed(22, name, draw));
      EXPECT_LE(r.max_error(), 1e-5) << name << " draw " << draw << ": " << r.worst_check();
      EXPECT_TRUE(r.constants_consistent())
          << name << " rayleigh [" << r.rayleigh_min << ", " << r.rayleigh_max << "] vs [" << r.mu
          << ", " << r.lip << "]";
    }
  }
}

TEST(CheckDerivatives, FlippedHvpIsCaught) {
  FlippedHvp bad(small_quadratic());
  Rng rng(7);
  const DerivativeReport r = check_derivatives(bad, standard_normal(10, rng), standard_normal(10, rng), 3, 1);
  EXPECT_GT(r.lower_hvp, 1.0);
  EXPECT_EQ(r.worst_check(), "lower_hvp");
  EXPECT_FALSE(r.constants_consistent());
}

TEST(CheckDerivatives, DeterministicGivenSeed) {
  auto tv = small_tv();
  ParamVector theta(2);
  theta << -1.0, -2.0;
  const DerivativeReport a = check_derivatives(*tv, theta, tv->noisy(), 4, 33);
  const DerivativeReport b = check_derivatives(*tv, theta, tv->noisy(), 4, 33);
  EXPECT_EQ(a.lower_hvp, b.lower_hvp);
  EXPECT_EQ(a.mixed_jvp, b.mixed_jvp);
  EXPECT_EQ(a.rayleigh_max, b.rayleigh_max);
}

TEST(CheckDerivatives, NonFiniteEvaluationNamesOperation) {
  auto q = small_quadratic();
  ParamVector theta = ParamVector::Zero(10);
  StateVector x = StateVector::Zero(10);
  x[0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(check_derivatives(*q, theta, x, 1, 0), NumericalError);

  // Finite inputs whose upper loss overflows.
  StateVector huge = StateVector::Constant(10, 1e300);
  try {
    check_derivatives(*q, theta, huge, 1, 0);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("lower_"), std::string::npos) << e.what();
  }
}

TEST(FdStep, ScalesWithInfinityNorm) {
  Eigen::VectorXd p(3);
  p << 1.0, -4.0, 2.0;
  EXPECT_DOUBLE_EQ(fd_step(p), 5e-6);
  EXPECT_DOUBLE_EQ(fd_step(Eigen::VectorXd::Zero(2)), 1e-6);
}

}  // namespace
}  // namespace maid
