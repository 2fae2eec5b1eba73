#include "canondual/dual.hpp"

#include <gtest/gtest.h>

#include "support/instances.hpp"

namespace canondual {
namespace {

using testing::Rng;

VectorXd s1(double v) {
  VectorXd s(1);
  s << v;
  return s;
}

// Pure quadratic instance: f = 0, b = 0, log family.
CanonicalProblem homogeneous_log_problem() {
  MatrixXd a = MatrixXd::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  MatrixXd b = MatrixXd::Zero(2, 2);
  b.diagonal() << 5.0, 4.0;
  return CanonicalProblem::create(a, {b}, {VectorXd::Zero(2)}, VectorXd::Zero(2),
                                  std::make_shared<LogBarrierFamily>(VectorXd::Ones(1)));
}

TEST(GOf, SingularAtEdgeOfPositiveRegion) {
  const auto p = testing::quadratic_log_problem();
  const MatrixXd g = G_of(p, s1(-0.2));
  EXPECT_NEAR(g(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(g(1, 1), 1.2, 1e-15);
  EXPECT_EQ(g(0, 1), 0.0);
  // f has a component along the null direction of G, so -0.2 is not in S_a.
  const RegionLabel r = classify_region(p, s1(-0.2));
  EXPECT_NEAR(r.min_eig, 0.0, 1e-12);
  EXPECT_EQ(r.tag, RegionTag::kOutsideSa);
}

TEST(GOf, IdentityAtZero) {
  Rng rng(10);
  const auto p = testing::random_well_problem(rng, 3, 2);
  EXPECT_EQ(G_of(p, VectorXd::Zero(2)), p.a());
  EXPECT_EQ(F_of(p, VectorXd::Zero(2)), p.f());
}

TEST(GOf, MatchesNaiveSummation) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 5;
    const int m = 1 + trial % 4;
    const auto p = testing::random_well_problem(rng, n, m);
    const VectorXd s = testing::random_vector(rng, m, -2.0, 2.0);
    MatrixXd g(n, n);
    VectorXd f(n);
    for (int i = 0; i < n; ++i) {
      f[i] = p.f()[i];
      for (int k = 0; k < m; ++k) f[i] -= s[k] * p.b_vec(k)[i];
      for (int j = 0; j < n; ++j) {
        g(i, j) = p.a()(i, j);
        for (int k = 0; k < m; ++k) g(i, j) += s[k] * p.b_mat(k)(i, j);
      }
    }
    EXPECT_LT((G_of(p, s) - g).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((F_of(p, s) - f).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(XiTotal, AgreesWithBothValuesAtGlobalPair) {
  const auto p = testing::quadratic_log_problem();
  const VectorXd s = s1(testing::kSigmaGlobal);
  const VectorXd x = primal_recovery(p, s).x;
  EXPECT_LT((x - testing::x_global()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(xi_total(p, x, s), primal_value(p, x), 1e-8);
  EXPECT_NEAR(xi_total(p, x, s), dual_value(p, s), 1e-8);
}

TEST(XiTotal, OriginGivesNegativeConjugate) {
  const auto p = testing::quadratic_log_problem();
  const VectorXd s = s1(-0.4);
  EXPECT_DOUBLE_EQ(xi_total(p, VectorXd::Zero(2), s), -p.v().conjugate_value(s));
}

TEST(XiTotal, EqualsPrimalOnCanonicalManifold) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const bool log = trial % 2 == 0;
    const auto p = log ? testing::random_log_problem(rng, 3, 2)
                       : testing::random_well_problem(rng, 3, 2);
    const VectorXd x = testing::random_vector(rng, 3, -1.0, 1.0);
    const VectorXd s = p.v().gradient(lambda(p, x));
    const double pi = primal_value(p, x);
    EXPECT_NEAR(xi_total(p, x, s), pi, 1e-10 * (1.0 + std::abs(pi)));
  }
}

TEST(Gap, SignFollowsRegion) {
  const auto p = testing::quadratic_log_problem();
  Rng rng(13);
  EXPECT_EQ(gap(p, VectorXd::Zero(2), s1(testing::kSigmaGlobal)), 0.0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(G_of(p, s1(testing::kSigmaLocalMax)));
  ASSERT_LT(es.eigenvalues().maxCoeff(), 0.0);
  for (int i = 0; i < 20; ++i) {
    const VectorXd x = testing::random_vector(rng, 2, -1.0, 1.0);
    EXPECT_GT(gap(p, x, s1(testing::kSigmaGlobal)), 0.0);
    EXPECT_LT(gap(p, x, s1(testing::kSigmaLocalMax)), 0.0);
  }
}

TEST(DualValue, StationaryAtGlobalCriticalPoint) {
  const auto p = testing::quadratic_log_problem();
  EXPECT_LT(std::abs(dual_gradient(p, s1(testing::kSigmaGlobal))[0]), 1e-6);
  // Closed form of the derivative for this instance.
  auto slope = [](double s) {
    return 0.5 * (1.25 / ((1 + 5 * s) * (1 + 5 * s)) + 0.04 / ((2 + 4 * s) * (2 + 4 * s))) +
           1.0 + 1.0 / s;
  };
  for (double s : {-0.1, -0.35, -0.7, -0.9}) {
    EXPECT_NEAR(dual_gradient(p, s1(s))[0], slope(s), 1e-10 * (1.0 + std::abs(slope(s))));
  }
}

TEST(DualValue, HomogeneousCaseIsNegativeConjugate) {
  const auto p = homogeneous_log_problem();
  for (double s : {-0.05, -0.3, -0.9, -3.0}) {
    EXPECT_DOUBLE_EQ(dual_value(p, s1(s)), -p.v().conjugate_value(s1(s)));
  }
}

TEST(DualValue, GradientMatchesCentralDifferences) {
  Rng rng(14);
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const bool log = trial % 2 == 0;
    const int n = 2 + trial % 3;
    const int m = 1 + trial % 3;
    const auto p = log ? testing::random_log_problem(rng, n, m)
                       : testing::random_well_problem(rng, n, m);
    const VectorXd s = log ? testing::random_vector(rng, m, -0.1, -0.01)
                           : testing::random_vector(rng, m, -0.2, 0.5);
    const RegionLabel r = classify_region(p, s);
    if (std::min(std::abs(r.min_eig), std::abs(r.max_eig)) < 0.1) continue;
    const VectorXd g = dual_gradient(p, s);
    VectorXd fd(m);
    for (int k = 0; k < m; ++k) {
      VectorXd e = VectorXd::Zero(m);
      e[k] = h;
      fd[k] = (dual_value(p, s + e) - dual_value(p, s - e)) / (2 * h);
    }
    EXPECT_LE((g - fd).norm(), 1e-5 * (1.0 + g.norm())) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(DualHessian, PositiveAtLocalDualMinimum) {
  const auto p = testing::quadratic_log_problem();
  EXPECT_GT(dual_hessian(p, s1(testing::kSigmaLocalMin))(0, 0), 0.0);
}

TEST(DualHessian, HomogeneousCaseIsNegativeConjugateHessian) {
  const auto p = homogeneous_log_problem();
  const VectorXd s = s1(-0.4);
  const MatrixXd h = dual_hessian(p, s);
  EXPECT_NEAR(h(0, 0), -p.v().conjugate_hessian(s)(0, 0), 1e-14);
  EXPECT_LT(h(0, 0), 0.0);
}

TEST(DualHessian, MatchesDifferencesOfGradient) {
  Rng rng(15);
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const bool log = trial % 2 == 0;
    const int n = 2 + trial % 3;
    const int m = 1 + trial % 3;
    const auto p = log ? testing::random_log_problem(rng, n, m)
                       : testing::random_well_problem(rng, n, m);
    const VectorXd s = log ? testing::random_vector(rng, m, -0.1, -0.01)
                           : testing::random_vector(rng, m, -0.2, 0.5);
    const RegionLabel r = classify_region(p, s);
    if (std::min(std::abs(r.min_eig), std::abs(r.max_eig)) < 0.1) continue;
    const MatrixXd hess = dual_hessian(p, s);
    for (int k = 0; k < m; ++k) {
      VectorXd e = VectorXd::Zero(m);
      e[k] = h;
      const VectorXd fd = (dual_gradient(p, s + e) - dual_gradient(p, s - e)) / (2 * h);
      EXPECT_LT((hess.col(k) - fd).cwiseAbs().maxCoeff(), 1e-4 * (1.0 + hess.norm()))
          << "trial " << trial;
    }
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(ClassifyRegion, KnownInstance) {
  const auto p = testing::quadratic_log_problem();
  EXPECT_EQ(classify_region(p, s1(-0.1)).tag, RegionTag::kSaPlusInterior);
  EXPECT_EQ(classify_region(p, s1(-0.7)).tag, RegionTag::kSaMinus);
  const RegionLabel mid = classify_region(p, s1(-0.3));
  EXPECT_EQ(mid.tag, RegionTag::kIndefinite);
  EXPECT_NEAR(mid.min_eig, -0.5, 1e-14);
  EXPECT_NEAR(mid.max_eig, 0.8, 1e-14);
  EXPECT_EQ(classify_region(p, s1(0.1)).tag, RegionTag::kOutsideSa);
}

TEST(ClassifyRegion, BoundaryWhenRhsInColumnSpace) {
  // f along the second axis only: G(-0.2) = diag(0, 1.2) still solves.
  MatrixXd a = MatrixXd::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  MatrixXd b = MatrixXd::Zero(2, 2);
  b.diagonal() << 5.0, 4.0;
  const auto p = CanonicalProblem::create(a, {b}, {VectorXd::Zero(2)}, Eigen::Vector2d(0.0, 0.6),
                                          std::make_shared<LogBarrierFamily>(VectorXd::Ones(1)));
  EXPECT_EQ(classify_region(p, s1(-0.2)).tag, RegionTag::kSaPlusBoundary);
  const EquilibriumSolution eq = primal_recovery(p, s1(-0.2));
  EXPECT_TRUE(eq.generalized);
  EXPECT_NEAR(eq.x[0], 0.0, 1e-14);
  EXPECT_NEAR(eq.x[1], 0.5, 1e-14);
}

TEST(PrimalRecovery, KnownCriticalPoints) {
  const auto p = testing::quadratic_log_problem();
  EXPECT_LT((primal_recovery(p, s1(testing::kSigmaGlobal)).x - testing::x_global())
                .cwiseAbs()
                .maxCoeff(),
            1e-6);
  EXPECT_LT((primal_recovery(p, s1(testing::kSigmaLocalMax)).x - testing::x_local_max())
                .cwiseAbs()
                .maxCoeff(),
            1e-6);
}

TEST(PrimalRecovery, IdentityMatrixReturnsRhs) {
  Rng rng(16);
  const VectorXd f = testing::random_vector(rng, 3, -1.0, 1.0);
  const auto p = CanonicalProblem::create(
      MatrixXd::Identity(3, 3), {MatrixXd::Identity(3, 3)}, {VectorXd::Zero(3)}, f,
      std::make_shared<QuadraticWellFamily>(VectorXd::Ones(1), VectorXd::Ones(1)));
  const EquilibriumSolution eq = primal_recovery(p, VectorXd::Zero(1));
  EXPECT_FALSE(eq.generalized);
  EXPECT_LT((eq.x - f).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PrimalRecovery, SingularWithoutSolutionThrows) {
  const auto p = testing::quadratic_log_problem();
  try {
    primal_recovery(p, s1(-0.2));
    FAIL() << "expected SingularG";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSingularG);
  }
}

TEST(DualProperties, ZeroGapAtExactCriticalPoints) {
  // Roots from the closed-form slope of the known instance.
  auto slope = [](double s) {
    return 0.5 * (1.25 / ((1 + 5 * s) * (1 + 5 * s)) + 0.04 / ((2 + 4 * s) * (2 + 4 * s))) +
           1.0 + 1.0 / s;
  };
  const auto roots = testing::dense_scan_roots(slope, -0.999, -0.001, 200001);
  const auto p = testing::quadratic_log_problem();
  ASSERT_EQ(roots.size(), 5u);
  for (double r : roots) {
    const VectorXd s = s1(r);
    const VectorXd x = primal_recovery(p, s).x;
    const double pi = primal_value(p, x);
    EXPECT_NEAR(pi, dual_value(p, s), 1e-8 * (1.0 + std::abs(pi)));
    EXPECT_NEAR(pi, xi_total(p, x, s), 1e-8 * (1.0 + std::abs(pi)));
    EXPECT_LT(primal_gradient(p, x).norm(), 1e-6);
  }
}

}  // namespace
}  // namespace canondual
