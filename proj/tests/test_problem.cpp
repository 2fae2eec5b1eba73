#include "canondual/problem.hpp"

#include <gtest/gtest.h>

#include "canondual/dual.hpp"
#include "support/instances.hpp"

namespace canondual {
namespace {

using testing::Rng;

TEST(Lambda, KnownInstanceAtUnitVector) {
  const auto p = testing::quadratic_log_problem();
  const VectorXd xi = lambda(p, Eigen::Vector2d(1.0, 0.0));
  ASSERT_EQ(xi.size(), 1);
  EXPECT_DOUBLE_EQ(xi[0], 2.5);
}

TEST(Lambda, ZeroInputGivesZero) {
  Rng rng(1);
  const auto p = testing::random_well_problem(rng, 3, 2);
  EXPECT_EQ(lambda(p, VectorXd::Zero(3)), VectorXd::Zero(2));
}

TEST(Lambda, MatchesPathIntegralOfGradient) {
  // Lambda(x) - Lambda(0) = int_0^1 grad_lambda(t x)^T x dt, by Simpson.
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MatrixXd> bm;
    std::vector<VectorXd> bv;
    for (int k = 0; k < 2; ++k) {
      bm.push_back(testing::random_symmetric(rng, 3, -2.0, 2.0));
      bv.push_back(testing::random_vector(rng, 3, -1.0, 1.0));
    }
    const auto p = CanonicalProblem::create(
        MatrixXd::Identity(3, 3), bm, bv, VectorXd::Zero(3),
        std::make_shared<QuadraticWellFamily>(VectorXd::Ones(2), VectorXd::Zero(2)));
    const VectorXd x = testing::random_vector(rng, 3, -2.0, 2.0);
    const int steps = 64;
    VectorXd integral = VectorXd::Zero(2);
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      integral += w * grad_lambda(p, t * x).transpose() * x;
    }
    integral /= 3.0 * steps;
    EXPECT_LT((lambda(p, x) - integral).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GradLambda, KnownInstanceAtUnitVector) {
  const auto p = testing::quadratic_log_problem();
  const MatrixXd j = grad_lambda(p, Eigen::Vector2d(1.0, 0.0));
  ASSERT_EQ(j.rows(), 2);
  ASSERT_EQ(j.cols(), 1);
  EXPECT_DOUBLE_EQ(j(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(j(1, 0), 0.0);
}

TEST(GradLambda, ZeroWhenLinearTermsVanish) {
  const auto p = testing::quadratic_log_problem();
  EXPECT_EQ(grad_lambda(p, VectorXd::Zero(2)), MatrixXd::Zero(2, 1));
}

TEST(GradLambda, MatchesCentralDifferences) {
  Rng rng(3);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_well_problem(rng, 4, 3);
    const VectorXd x = testing::random_vector(rng, 4, -1.0, 1.0);
    const MatrixXd j = grad_lambda(p, x);
    for (int i = 0; i < 4; ++i) {
      VectorXd e = VectorXd::Zero(4);
      e[i] = h;
      const VectorXd fd = (lambda(p, x + e) - lambda(p, x - e)) / (2 * h);
      EXPECT_LT((j.row(i).transpose() - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(PrimalValue, KnownGlobalMinimizerIsStationary) {
  const auto p = testing::quadratic_log_problem();
  const VectorXd x = testing::x_global();
  EXPECT_LT(primal_gradient(p, x).norm(), 1e-6);
  VectorXd s(1);
  s << testing::kSigmaGlobal;
  EXPECT_NEAR(primal_value(p, x), dual_value(p, s), 1e-8);
}

TEST(PrimalValue, CenteredWellsVanishAtOrigin) {
  const auto p = CanonicalProblem::create(
      MatrixXd::Identity(2, 2), {MatrixXd::Identity(2, 2)}, {VectorXd::Zero(2)},
      VectorXd::Zero(2),
      std::make_shared<QuadraticWellFamily>(VectorXd::Ones(1), VectorXd::Zero(1)));
  EXPECT_EQ(primal_value(p, VectorXd::Zero(2)), 0.0);
}

TEST(PrimalValue, GradientMatchesCentralDifferences) {
  Rng rng(4);
  const double h = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    const bool log = trial % 2 == 0;
    const auto p = log ? testing::random_log_problem(rng, 3, 2)
                       : testing::random_well_problem(rng, 3, 2);
    const VectorXd x = testing::random_vector(rng, 3, -1.0, 1.0);
    const VectorXd g = primal_gradient(p, x);
    VectorXd fd(3);
    for (int i = 0; i < 3; ++i) {
      VectorXd e = VectorXd::Zero(3);
      e[i] = h;
      fd[i] = (primal_value(p, x + e) - primal_value(p, x - e)) / (2 * h);
    }
    EXPECT_LE((g - fd).norm(), 1e-5 * (1.0 + g.norm())) << "trial " << trial;
  }
}

TEST(PrimalHessian, SaddleInertiaAtLocalDualMinimum) {
  const auto p = testing::quadratic_log_problem();
  VectorXd s(1);
  s << testing::kSigmaLocalMin;
  const VectorXd x = primal_recovery(p, s).x;
  const VectorXd sigma = p.v().gradient(lambda(p, x));
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(primal_hessian(p, x, sigma));
  EXPECT_GT(es.eigenvalues()[1], 1e-6);
  EXPECT_LT(es.eigenvalues()[0], -1e-6);
}

TEST(PrimalHessian, EqualsAWhenGeometryIsTrivial) {
  Rng rng(5);
  const MatrixXd a = testing::random_symmetric(rng, 3, 0.5, 2.0);
  const auto p = CanonicalProblem::create(
      a, {MatrixXd::Zero(3, 3)}, {VectorXd::Zero(3)}, VectorXd::Ones(3),
      std::make_shared<QuadraticWellFamily>(VectorXd::Ones(1), VectorXd::Ones(1)));
  const VectorXd x = testing::random_vector(rng, 3, -1.0, 1.0);
  EXPECT_LT((primal_hessian_direct(p, x) - a).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PrimalHessian, MatchesDifferencesOfGradient) {
  Rng rng(6);
  const double h = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    const bool log = trial % 2 == 0;
    const auto p = log ? testing::random_log_problem(rng, 3, 2)
                       : testing::random_well_problem(rng, 3, 2);
    const VectorXd x = testing::random_vector(rng, 3, -1.0, 1.0);
    const VectorXd sigma = p.v().gradient(lambda(p, x));
    const MatrixXd hess = primal_hessian(p, x, sigma);
    EXPECT_LT((hess - primal_hessian_direct(p, x)).cwiseAbs().maxCoeff(), 1e-10);
    for (int i = 0; i < 3; ++i) {
      VectorXd e = VectorXd::Zero(3);
      e[i] = h;
      const VectorXd fd = (primal_gradient(p, x + e) - primal_gradient(p, x - e)) / (2 * h);
      EXPECT_LT((hess.col(i) - fd).cwiseAbs().maxCoeff(), 1e-4) << "trial " << trial;
    }
  }
}

TEST(PrimalHessian, RejectsInconsistentDualImage) {
  const auto p = testing::quadratic_log_problem();
  const VectorXd x = Eigen::Vector2d(0.3, 0.2);
  VectorXd sigma = p.v().gradient(lambda(p, x));
  sigma[0] += 1e-3;
  try {
    primal_hessian(p, x, sigma);
    FAIL() << "expected ConsistencyError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kConsistencyError);
  }
}

TEST(CanonicalProblem, RejectsMismatchedBlocks) {
  try {
    CanonicalProblem::create(MatrixXd::Identity(2, 2), {MatrixXd::Identity(3, 3)},
                             {VectorXd::Zero(2)}, VectorXd::Zero(2),
                             std::make_shared<LogBarrierFamily>(VectorXd::Ones(1)));
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDimensionMismatch);
  }
  EXPECT_THROW(CanonicalProblem::create(MatrixXd::Identity(2, 2), {MatrixXd::Identity(2, 2)},
                                        {VectorXd::Zero(2)}, VectorXd::Zero(2),
                                        std::make_shared<LogBarrierFamily>(VectorXd::Ones(2))),
               Error);
}

TEST(CanonicalProblem, SymmetrizesNearlySymmetricInput) {
  MatrixXd a = MatrixXd::Identity(2, 2);
  a(0, 1) = 0.5;
  a(1, 0) = 0.5 + 1e-12;
  const auto p = CanonicalProblem::create(a, {MatrixXd::Identity(2, 2)}, {VectorXd::Zero(2)},
                                          VectorXd::Zero(2),
                                          std::make_shared<LogBarrierFamily>(VectorXd::Ones(1)));
  EXPECT_EQ(p.a(), p.a().transpose());
  a(1, 0) = 0.6;
  EXPECT_THROW(CanonicalProblem::create(a, {MatrixXd::Identity(2, 2)}, {VectorXd::Zero(2)},
                                        VectorXd::Zero(2),
                                        std::make_shared<LogBarrierFamily>(VectorXd::Ones(1))),
               Error);
}

TEST(LogBarrierFamily, DomainsAndConjugate) {
  LogBarrierFamily v(Eigen::Vector2d(1.0, 2.0));
  EXPECT_TRUE(v.in_domain(Eigen::Vector2d(-0.5, -1.5)));
  EXPECT_FALSE(v.in_domain(Eigen::Vector2d(-1.0, 0.0)));
  EXPECT_TRUE(v.in_dual_domain(Eigen::Vector2d(-3.0, -0.1)));
  EXPECT_FALSE(v.in_dual_domain(Eigen::Vector2d(-1.0, 0.0)));
  EXPECT_THROW(v.value(Eigen::Vector2d(-2.0, 0.0)), Error);
  // V*(s) = sum(-1 - d s - log(-s)); at s = -1/d this is log(d).
  EXPECT_NEAR(v.conjugate_value(Eigen::Vector2d(-1.0, -0.5)), std::log(2.0), 1e-15);
  EXPECT_THROW(LogBarrierFamily(Eigen::Vector2d(1.0, -1.0)), Error);
}

TEST(QuadraticWellFamily, ConjugateOfWell) {
  QuadraticWellFamily v(Eigen::Vector2d(2.0, 0.5), Eigen::Vector2d(1.0, -1.0));
  const Eigen::Vector2d s(0.4, -0.2);
  // V*(s) = s^2 / (2 alpha) + lambda s.
  EXPECT_NEAR(v.conjugate_value(s), 0.16 / 4 + 0.4 + 0.04 / 1 + 0.2, 1e-15);
  EXPECT_THROW(QuadraticWellFamily(Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(0.0, 0.0)), Error);
}

}  // namespace
}  // namespace canondual
