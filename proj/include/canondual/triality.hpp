#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "canondual/solver.hpp"

namespace canondual {

/// Eigenvalue sign counts of a symmetric matrix.
struct Inertia {
  int pos = 0;
  int neg = 0;
  int zero = 0;
  double tol = 0.0;

  int dim() const { return pos + neg + zero; }
  bool positive_definite() const { return neg == 0 && zero == 0; }
  bool negative_definite() const { return pos == 0 && zero == 0; }
  bool operator==(const Inertia& o) const {
    return pos == o.pos && neg == o.neg && zero == o.zero;
  }
};

/// Counts eigenvalues > tol, < -tol and the rest. A negative `tol` selects
/// the default 1e-9 (1 + max|eig|).
Inertia inertia_of(const MatrixXd& m, double tol = -1.0);

enum class SubspaceKind { kPrimalFlat, kPrimalSharp, kDualFlat, kDualSharp };

std::string_view subspace_name(SubspaceKind kind);

/// Orthonormal basis of an invariant subspace of a Hessian.
struct SubspaceBasis {
  SubspaceKind kind = SubspaceKind::kPrimalFlat;
  MatrixXd columns;

  Eigen::Index dimension() const { return columns.cols(); }
};

struct FlatSharpBases {
  SubspaceBasis flat;
  SubspaceBasis sharp;
};

/// Splits the eigenvectors of a symmetric matrix by eigenvalue sign.
/// `primal` picks the P (true) or Q (false) kinds. Throws
/// kDegenerateSpectrum when any |eigenvalue| <= tol.
FlatSharpBases split_by_sign(const MatrixXd& hessian, bool primal);

enum class VerdictTag {
  kGlobalMin,
  kDoubleMax,
  kDoubleMinStrong,
  kDoubleMinWeak,
  kSaddleDualWeak,
  kSaddle,
  /// G(sigma) indefinite: the pair is outside S_a^+ and S_a^-, where the
  /// triality statements make no claim.
  kUnclassified,
  kDegenerate,
};

std::string_view verdict_name(VerdictTag tag);
VerdictTag verdict_from_name(std::string_view name);

struct TrialityVerdict {
  VerdictTag tag = VerdictTag::kDegenerate;
  std::optional<Inertia> primal_inertia;
  std::optional<Inertia> dual_inertia;
  std::optional<FlatSharpBases> bases;
  /// Statement the verdict rests on, e.g. "canonical min-max duality".
  std::string rule;
  /// SMW residual, relative to 1 + |hess Pi^{-1}|_F, when all three
  /// matrices are invertible.
  std::optional<double> smw_residual;
  /// In(G) + In(hess Pi^d) == In(-hess V*) + In(hess Pi) for the block
  /// matrix [[G, J], [J^T, -hess V*]].
  bool inertia_balance = true;
  /// Pair sits on the boundary of S_a^+ (G singular); x may not be unique.
  bool boundary_caveat = false;
};

/// Decision table over region, Hessian signs and dimensions. Requires
/// pair.converged.
TrialityVerdict classify(const CanonicalProblem& p, const CriticalPair& pair);

/// P-flat/P-sharp (m < n, from hess Pi) or Q-flat/Q-sharp (m > n, from
/// hess Pi^d). kInvalidArgument when m == n.
FlatSharpBases flat_sharp_bases(const CanonicalProblem& p, const CriticalPair& pair);

struct SmwResult {
  double residual = 0.0;  ///< Frobenius norm of the difference.
  double scale = 0.0;     ///< |hess Pi^{-1}|_F.
  double relative() const { return residual / (1.0 + scale); }
};

/// Compares (hess Pi)^{-1} with
///   G^{-1} + G^{-1} J (hess Pi^d)^{-1} J^T G^{-1},   J = grad_lambda(x).
/// Throws kSingularG / kSingularHessian if a matrix is not invertible.
SmwResult smw_check(const CanonicalProblem& p, const CriticalPair& pair);

}  // namespace canondual
