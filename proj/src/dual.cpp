#include "canondual/dual.hpp"

#include <cmath>
#include <sstream>

namespace canondual {

MatrixXd G_of(const CanonicalProblem& p, const VectorXd& sigma) {
  if (sigma.size() != p.m()) {
    throw Error(Errc::kDimensionMismatch, "sigma has wrong dimension");
  }
  MatrixXd g = p.a();
  for (Eigen::Index k = 0; k < p.m(); ++k) g += sigma[k] * p.b_mat(k);
  return g;
}

VectorXd F_of(const CanonicalProblem& p, const VectorXd& sigma) {
  if (sigma.size() != p.m()) {
    throw Error(Errc::kDimensionMismatch, "sigma has wrong dimension");
  }
  VectorXd f = p.f();
  for (Eigen::Index k = 0; k < p.m(); ++k) f -= sigma[k] * p.b_vec(k);
  return f;
}

double xi_total(const CanonicalProblem& p, const VectorXd& x, const VectorXd& sigma) {
  const double vstar = p.v().conjugate_value(sigma);
  if (x.size() != p.n()) throw Error(Errc::kDimensionMismatch, "x has wrong dimension");
  return 0.5 * x.dot(G_of(p, sigma) * x) - vstar - x.dot(F_of(p, sigma));
}

double gap(const CanonicalProblem& p, const VectorXd& x, const VectorXd& sigma) {
  if (x.size() != p.n()) throw Error(Errc::kDimensionMismatch, "x has wrong dimension");
  return 0.5 * x.dot(G_of(p, sigma) * x);
}

double eigen_tolerance(double max_abs_eig) { return 1e-9 * (1.0 + max_abs_eig); }

double column_space_tolerance(double f_norm) { return 1e-8 * (1.0 + f_norm); }

namespace {

struct Factored {
  EquilibriumSolution eq;
  int g_negative = 0;
  // Present only for invertible G.
  Eigen::LDLT<MatrixXd> ldlt;
};

Factored factor_and_solve(const CanonicalProblem& p, const VectorXd& sigma) {
  const MatrixXd g = G_of(p, sigma);
  const VectorXd f = F_of(p, sigma);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::kSingularG, "eigendecomposition of G(sigma) failed");
  }
  const VectorXd& evals = es.eigenvalues();
  const double smax = evals.cwiseAbs().maxCoeff();
  const double cutoff = kRankCutoff * smax;

  Factored out;
  out.g_negative = static_cast<int>((evals.array() < -cutoff).count());
  bool singular = smax == 0.0;
  for (Eigen::Index i = 0; i < evals.size() && !singular; ++i) {
    if (std::abs(evals[i]) <= cutoff) singular = true;
  }
  if (!singular) {
    out.ldlt.compute(g);
    out.eq.x = out.ldlt.solve(f);
    out.eq.generalized = false;
    out.eq.col_space_residual = 0.0;
    return out;
  }

  const MatrixXd& vecs = es.eigenvectors();
  VectorXd x = VectorXd::Zero(p.n());
  VectorXd null_part = VectorXd::Zero(p.n());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double c = vecs.col(i).dot(f);
    if (std::abs(evals[i]) > cutoff && smax > 0.0) {
      x += (c / evals[i]) * vecs.col(i);
    } else {
      null_part += c * vecs.col(i);
    }
  }
  const double residual = null_part.norm();
  if (residual > column_space_tolerance(f.norm())) {
    std::ostringstream os;
    os << "G(sigma) is singular and F(sigma) is outside its column space "
       << "(residual " << residual << ")";
    throw Error(Errc::kSingularG, os.str());
  }
  out.eq.x = std::move(x);
  out.eq.generalized = true;
  out.eq.col_space_residual = residual;
  return out;
}

}  // namespace

EquilibriumSolution primal_recovery(const CanonicalProblem& p, const VectorXd& sigma) {
  return factor_and_solve(p, sigma).eq;
}

DualEvaluation evaluate_dual(const CanonicalProblem& p, const VectorXd& sigma,
                             bool with_hessian) {
  const double vstar = p.v().conjugate_value(sigma);
  Factored fac = factor_and_solve(p, sigma);

  DualEvaluation ev;
  ev.sigma = sigma;
  ev.x = std::move(fac.eq.x);
  ev.generalized = fac.eq.generalized;
  ev.g_negative = fac.g_negative;
  ev.value = -0.5 * F_of(p, sigma).dot(ev.x) - vstar;
  ev.gradient = lambda(p, ev.x) - p.v().conjugate_gradient(sigma);
  if (with_hessian && !ev.generalized) {
    const MatrixXd j = grad_lambda(p, ev.x);
    const MatrixXd ginv_j = fac.ldlt.solve(j);
    MatrixXd h = -j.transpose() * ginv_j - p.v().conjugate_hessian(sigma);
    ev.hessian = 0.5 * (h + h.transpose());
  }
  return ev;
}

double dual_value(const CanonicalProblem& p, const VectorXd& sigma) {
  return evaluate_dual(p, sigma, false).value;
}

VectorXd dual_gradient(const CanonicalProblem& p, const VectorXd& sigma) {
  return evaluate_dual(p, sigma, false).gradient;
}

MatrixXd dual_hessian(const CanonicalProblem& p, const VectorXd& sigma) {
  DualEvaluation ev = evaluate_dual(p, sigma, true);
  if (ev.generalized) {
    throw Error(Errc::kSingularG, "dual Hessian needs an invertible G(sigma)");
  }
  return ev.hessian;
}

std::string_view region_name(RegionTag tag) {
  switch (tag) {
    case RegionTag::kSaPlusInterior: return "SaPlusInterior";
    case RegionTag::kSaPlusBoundary: return "SaPlusBoundary";
    case RegionTag::kSaMinus: return "SaMinus";
    case RegionTag::kIndefinite: return "Indefinite";
    case RegionTag::kOutsideSa: return "OutsideSa";
  }
  return "OutsideSa";
}

RegionTag region_from_name(std::string_view name) {
  for (RegionTag t : {RegionTag::kSaPlusInterior, RegionTag::kSaPlusBoundary,
                      RegionTag::kSaMinus, RegionTag::kIndefinite, RegionTag::kOutsideSa}) {
    if (region_name(t) == name) return t;
  }
  throw Error(Errc::kInvalidArgument, "unknown region tag: " + std::string(name));
}

RegionLabel classify_region(const CanonicalProblem& p, const VectorXd& sigma) {
  const MatrixXd g = G_of(p, sigma);
  const VectorXd f = F_of(p, sigma);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
  const VectorXd& evals = es.eigenvalues();  // ascending

  RegionLabel label;
  label.min_eig = evals[0];
  label.max_eig = evals[evals.size() - 1];
  const double tol = eigen_tolerance(evals.cwiseAbs().maxCoeff());

  VectorXd null_part = VectorXd::Zero(p.n());
  bool has_zero = false;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (std::abs(evals[i]) <= tol) {
      has_zero = true;
      null_part += es.eigenvectors().col(i).dot(f) * es.eigenvectors().col(i);
    }
  }
  label.col_space_residual = null_part.norm();
  const bool in_col = label.col_space_residual <= column_space_tolerance(f.norm());

  if (!p.v().in_dual_domain(sigma)) {
    label.tag = RegionTag::kOutsideSa;
  } else if (label.min_eig > tol) {
    label.tag = RegionTag::kSaPlusInterior;
  } else if (label.max_eig < -tol) {
    label.tag = RegionTag::kSaMinus;
  } else if (label.min_eig >= -tol) {
    label.tag = in_col ? RegionTag::kSaPlusBoundary : RegionTag::kOutsideSa;
  } else if (has_zero && !in_col) {
    label.tag = RegionTag::kOutsideSa;
  } else {
    label.tag = RegionTag::kIndefinite;
  }
  return label;
}

}  // namespace canondual
