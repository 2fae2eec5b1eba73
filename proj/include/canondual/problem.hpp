#pragma once

// Canonical problem instances
//
//   Pi(x) = V(Lambda(x)) + 1/2 <x, A x> - <x, f>,
//   Lambda_k(x) = 1/2 x^T B^k x + b_k^T x,
//
// with V strictly convex and its Legendre conjugate V* known in closed form.

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "canondual/errors.hpp"

namespace canondual {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Per-coordinate bounds of the open conjugate domain V*_a. Infinite entries
/// mean the coordinate is unbounded on that side.
struct DualBounds {
  VectorXd lower;
  VectorXd upper;
};

/// A strictly convex canonical function V over R^m together with its analytic
/// Legendre conjugate V*. Implementations are immutable.
class CanonicalFunction {
 public:
  virtual ~CanonicalFunction() = default;

  virtual std::string kind() const = 0;
  virtual Eigen::Index dim() const = 0;

  virtual bool in_domain(const VectorXd& xi) const = 0;
  /// Throws Errc::kDomainError outside the domain.
  virtual double value(const VectorXd& xi) const = 0;
  virtual VectorXd gradient(const VectorXd& xi) const = 0;
  virtual MatrixXd hessian(const VectorXd& xi) const = 0;

  virtual bool in_dual_domain(const VectorXd& sigma) const = 0;
  virtual double conjugate_value(const VectorXd& sigma) const = 0;
  virtual VectorXd conjugate_gradient(const VectorXd& sigma) const = 0;
  virtual MatrixXd conjugate_hessian(const VectorXd& sigma) const = 0;

  virtual DualBounds dual_bounds() const = 0;
};

/// V(xi) = -sum_k log(xi_k + d_k), V*(s) = sum_k (-1 - d_k s_k - log(-s_k)).
///
/// The conjugate is finite and smooth for every s_k < 0. When Lambda_k only
/// takes nonnegative values (B^k PSD, b_k = 0) the reachable part of that
/// domain is [-1/d_k, 0).
class LogBarrierFamily final : public CanonicalFunction {
 public:
  explicit LogBarrierFamily(VectorXd d);

  const VectorXd& d() const { return d_; }

  std::string kind() const override { return "log"; }
  Eigen::Index dim() const override { return d_.size(); }

  bool in_domain(const VectorXd& xi) const override;
  double value(const VectorXd& xi) const override;
  VectorXd gradient(const VectorXd& xi) const override;
  MatrixXd hessian(const VectorXd& xi) const override;

  bool in_dual_domain(const VectorXd& sigma) const override;
  double conjugate_value(const VectorXd& sigma) const override;
  VectorXd conjugate_gradient(const VectorXd& sigma) const override;
  MatrixXd conjugate_hessian(const VectorXd& sigma) const override;

  DualBounds dual_bounds() const override;

 private:
  void require_domain(const VectorXd& xi) const;
  void require_dual_domain(const VectorXd& sigma) const;

  VectorXd d_;
};

/// V(xi) = sum_k alpha_k/2 (xi_k - lambda_k)^2,
/// V*(s) = sum_k (s_k^2 / (2 alpha_k) + lambda_k s_k). Both domains are R^m.
class QuadraticWellFamily final : public CanonicalFunction {
 public:
  QuadraticWellFamily(VectorXd alpha, VectorXd lambda);

  const VectorXd& alpha() const { return alpha_; }
  const VectorXd& lambda() const { return lambda_; }

  std::string kind() const override { return "quadratic-well"; }
  Eigen::Index dim() const override { return alpha_.size(); }

  bool in_domain(const VectorXd& xi) const override;
  double value(const VectorXd& xi) const override;
  VectorXd gradient(const VectorXd& xi) const override;
  MatrixXd hessian(const VectorXd& xi) const override;

  bool in_dual_domain(const VectorXd& sigma) const override;
  double conjugate_value(const VectorXd& sigma) const override;
  VectorXd conjugate_gradient(const VectorXd& sigma) const override;
  MatrixXd conjugate_hessian(const VectorXd& sigma) const override;

  DualBounds dual_bounds() const override;

 private:
  void require_dim(const VectorXd& v) const;

  VectorXd alpha_;
  VectorXd lambda_;
};

/// Immutable problem instance. Construct through `create`, which validates
/// dimensions and symmetrizes A and every B^k.
class CanonicalProblem {
 public:
  static CanonicalProblem create(MatrixXd a, std::vector<MatrixXd> b_mats,
                                 std::vector<VectorXd> b_vecs, VectorXd f,
                                 std::shared_ptr<const CanonicalFunction> v);

  Eigen::Index n() const { return a_.rows(); }
  Eigen::Index m() const { return static_cast<Eigen::Index>(b_mats_.size()); }

  const MatrixXd& a() const { return a_; }
  const MatrixXd& b_mat(Eigen::Index k) const { return b_mats_[k]; }
  const VectorXd& b_vec(Eigen::Index k) const { return b_vecs_[k]; }
  const std::vector<MatrixXd>& b_mats() const { return b_mats_; }
  const std::vector<VectorXd>& b_vecs() const { return b_vecs_; }
  const VectorXd& f() const { return f_; }
  const CanonicalFunction& v() const { return *v_; }
  const std::shared_ptr<const CanonicalFunction>& v_ptr() const { return v_; }

 private:
  CanonicalProblem() = default;

  MatrixXd a_;
  std::vector<MatrixXd> b_mats_;
  std::vector<VectorXd> b_vecs_;
  VectorXd f_;
  std::shared_ptr<const CanonicalFunction> v_;
};

/// Relative asymmetry above which a matrix is rejected on ingest.
inline constexpr double kAsymmetryTolerance = 1e-8;

/// Returns (M + M^T)/2, or throws kInvalidArgument when
/// max|M - M^T| > kAsymmetryTolerance * (1 + max|M|). `name` is used in the
/// message.
MatrixXd symmetrize_checked(const MatrixXd& m, const std::string& name);

/// Lambda(x): xi_k = 1/2 x^T B^k x + b_k^T x.
VectorXd lambda(const CanonicalProblem& p, const VectorXd& x);

/// n x m matrix whose column k is B^k x + b_k.
MatrixXd grad_lambda(const CanonicalProblem& p, const VectorXd& x);

/// Pi(x). Throws kDomainError when Lambda(x) leaves the domain of V.
double primal_value(const CanonicalProblem& p, const VectorXd& x);
VectorXd primal_gradient(const CanonicalProblem& p, const VectorXd& x);

/// Second derivative of Pi from the dual side:
///   G(s) + grad_lambda(x) (hess V*(s))^{-1} grad_lambda(x)^T.
/// `sigma` must equal grad V(Lambda(x)) to 1e-8 relative, otherwise
/// kConsistencyError.
MatrixXd primal_hessian(const CanonicalProblem& p, const VectorXd& x,
                        const VectorXd& sigma);

/// Second derivative of Pi computed directly from V:
///   G(grad V(Lambda(x))) + grad_lambda(x) hess V(Lambda(x)) grad_lambda(x)^T.
MatrixXd primal_hessian_direct(const CanonicalProblem& p, const VectorXd& x);

/// True when x lies in the pulled-back primal domain {x : Lambda(x) in dom V}.
bool in_primal_domain(const CanonicalProblem& p, const VectorXd& x);

}  // namespace canondual
