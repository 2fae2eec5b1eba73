#pragma once

// Canonical dual construction.
//
//   G(s) = A + sum_k s_k B^k,     F(s) = f - sum_k s_k b_k,
//   Xi(x, s) = 1/2 x^T G(s) x - V*(s) - x^T F(s),
//   Pi^d(s) = -1/2 F(s)^T G(s)^{-1} F(s) - V*(s).

#include <string_view>

#include "canondual/problem.hpp"

namespace canondual {

MatrixXd G_of(const CanonicalProblem& p, const VectorXd& sigma);
VectorXd F_of(const CanonicalProblem& p, const VectorXd& sigma);

/// Total complementary function. kDomainError outside V*_a.
double xi_total(const CanonicalProblem& p, const VectorXd& x, const VectorXd& sigma);

/// Complementary gap 1/2 x^T G(s) x.
double gap(const CanonicalProblem& p, const VectorXd& x, const VectorXd& sigma);

/// Eigenvalue tolerance for sign decisions on G: 1e-9 (1 + max|eig|).
double eigen_tolerance(double max_abs_eig);
/// Column-space residual tolerance: 1e-8 (1 + |F|).
double column_space_tolerance(double f_norm);
/// Relative singular-value cutoff used by the generalized inverse.
inline constexpr double kRankCutoff = 1e-10;

/// Solution of the canonical equilibrium equation G(s) x = F(s).
struct EquilibriumSolution {
  VectorXd x;
  /// True when G(s) was singular and x is the minimum-norm solution.
  bool generalized = false;
  /// |(I - G G^+) F|.
  double col_space_residual = 0.0;
};

/// x = G(s)^{-1} F(s). Singular G with F in Col(G) gives the minimum-norm
/// solution with `generalized` set; otherwise throws kSingularG.
EquilibriumSolution primal_recovery(const CanonicalProblem& p, const VectorXd& sigma);

double dual_value(const CanonicalProblem& p, const VectorXd& sigma);
/// Component k is Lambda_k(x) - [grad V*(s)]_k at x = G(s)^{-1} F(s).
VectorXd dual_gradient(const CanonicalProblem& p, const VectorXd& sigma);
/// -grad_lambda(x)^T G(s)^{-1} grad_lambda(x) - hess V*(s). Requires G(s)
/// invertible; throws kSingularG otherwise.
MatrixXd dual_hessian(const CanonicalProblem& p, const VectorXd& sigma);

/// Everything the solver needs at one dual point, computed from a single
/// factorization of G(s).
struct DualEvaluation {
  VectorXd sigma;
  VectorXd x;
  bool generalized = false;
  /// Negative eigenvalues of G(sigma).
  int g_negative = 0;
  double value = 0.0;
  VectorXd gradient;
  /// Empty unless requested and G(s) is invertible.
  MatrixXd hessian;
};

DualEvaluation evaluate_dual(const CanonicalProblem& p, const VectorXd& sigma,
                             bool with_hessian);

enum class RegionTag {
  kSaPlusInterior,
  kSaPlusBoundary,
  kSaMinus,
  kIndefinite,
  kOutsideSa,
};

std::string_view region_name(RegionTag tag);
RegionTag region_from_name(std::string_view name);

struct RegionLabel {
  RegionTag tag = RegionTag::kOutsideSa;
  double min_eig = 0.0;
  double max_eig = 0.0;
  double col_space_residual = 0.0;

  bool in_sa_plus() const {
    return tag == RegionTag::kSaPlusInterior || tag == RegionTag::kSaPlusBoundary;
  }
};

/// Locates s relative to S_a, S_a^+ and S_a^- from the spectrum of G(s).
RegionLabel classify_region(const CanonicalProblem& p, const VectorXd& sigma);

}  // namespace canondual
