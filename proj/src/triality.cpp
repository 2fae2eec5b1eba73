#include "canondual/triality.hpp"

#include <vector>

namespace canondual {

namespace {

struct Spectrum {
  VectorXd values;
  MatrixXd vectors;
  double tol = 0.0;
};

Spectrum spectrum_of(const MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(Errc::kDimensionMismatch, "inertia needs a square matrix");
  }
  Spectrum s;
  if (m.size() == 0) return s;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  s.values = es.eigenvalues();
  s.vectors = es.eigenvectors();
  s.tol = tol >= 0.0 ? tol : eigen_tolerance(s.values.cwiseAbs().maxCoeff());
  return s;
}

Inertia count(const Spectrum& s) {
  Inertia in;
  in.tol = s.tol;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values[i] > s.tol) {
      ++in.pos;
    } else if (s.values[i] < -s.tol) {
      ++in.neg;
    } else {
      ++in.zero;
    }
  }
  return in;
}

MatrixXd hessian_at_pair(const CanonicalProblem& p, const CriticalPair& pair) {
  try {
    return primal_hessian(p, pair.x, pair.sigma);
  } catch (const Error& e) {
    if (e.code() != Errc::kConsistencyError) throw;
    return primal_hessian_direct(p, pair.x);
  }
}

}  // namespace

Inertia inertia_of(const MatrixXd& m, double tol) { return count(spectrum_of(m, tol)); }

std::string_view subspace_name(SubspaceKind kind) {
  switch (kind) {
    case SubspaceKind::kPrimalFlat: return "PrimalFlat";
    case SubspaceKind::kPrimalSharp: return "PrimalSharp";
    case SubspaceKind::kDualFlat: return "DualFlat";
    case SubspaceKind::kDualSharp: return "DualSharp";
  }
  return "PrimalFlat";
}

FlatSharpBases split_by_sign(const MatrixXd& hessian, bool primal) {
  const Spectrum s = spectrum_of(hessian, -1.0);
  std::vector<Eigen::Index> pos;
  std::vector<Eigen::Index> neg;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values[i] > s.tol) {
      pos.push_back(i);
    } else if (s.values[i] < -s.tol) {
      neg.push_back(i);
    } else {
      throw Error(Errc::kDegenerateSpectrum,
                  "Hessian has an eigenvalue within tolerance of zero");
    }
  }
  FlatSharpBases out;
  out.flat.kind = primal ? SubspaceKind::kPrimalFlat : SubspaceKind::kDualFlat;
  out.sharp.kind = primal ? SubspaceKind::kPrimalSharp : SubspaceKind::kDualSharp;
  out.flat.columns = s.vectors(Eigen::all, pos);
  out.sharp.columns = s.vectors(Eigen::all, neg);
  return out;
}

std::string_view verdict_name(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::kGlobalMin: return "GlobalMin";
    case VerdictTag::kDoubleMax: return "DoubleMax";
    case VerdictTag::kDoubleMinStrong: return "DoubleMinStrong";
    case VerdictTag::kDoubleMinWeak: return "DoubleMinWeak";
    case VerdictTag::kSaddleDualWeak: return "SaddleDualWeak";
    case VerdictTag::kSaddle: return "Saddle";
    case VerdictTag::kUnclassified: return "Unclassified";
    case VerdictTag::kDegenerate: return "Degenerate";
  }
  return "Degenerate";
}

VerdictTag verdict_from_name(std::string_view name) {
  for (VerdictTag t :
       {VerdictTag::kGlobalMin, VerdictTag::kDoubleMax, VerdictTag::kDoubleMinStrong,
        VerdictTag::kDoubleMinWeak, VerdictTag::kSaddleDualWeak, VerdictTag::kSaddle,
        VerdictTag::kUnclassified, VerdictTag::kDegenerate}) {
    if (verdict_name(t) == name) return t;
  }
  throw Error(Errc::kInvalidArgument, "unknown verdict tag: " + std::string(name));
}

SmwResult smw_check(const CanonicalProblem& p, const CriticalPair& pair) {
  const EquilibriumSolution eq = primal_recovery(p, pair.sigma);
  if (eq.generalized) throw Error(Errc::kSingularG, "G(sigma) is singular");
  const MatrixXd g = G_of(p, pair.sigma);
  const MatrixXd hp = hessian_at_pair(p, pair);
  const MatrixXd hd = dual_hessian(p, pair.sigma);
  if (inertia_of(hp).zero > 0) throw Error(Errc::kSingularHessian, "primal Hessian is singular");
  if (inertia_of(hd).zero > 0) throw Error(Errc::kSingularHessian, "dual Hessian is singular");

  const MatrixXd j = grad_lambda(p, pair.x);
  const Eigen::FullPivLU<MatrixXd> g_lu(g);
  const MatrixXd g_inv = g_lu.inverse();
  const MatrixXd hp_inv = Eigen::FullPivLU<MatrixXd>(hp).inverse();
  const MatrixXd hd_inv = Eigen::FullPivLU<MatrixXd>(hd).inverse();
  const MatrixXd rhs = g_inv + g_inv * j * hd_inv * j.transpose() * g_inv;

  SmwResult r;
  r.residual = (hp_inv - rhs).norm();
  r.scale = hp_inv.norm();
  return r;
}

FlatSharpBases flat_sharp_bases(const CanonicalProblem& p, const CriticalPair& pair) {
  if (p.m() < p.n()) return split_by_sign(hessian_at_pair(p, pair), true);
  if (p.m() > p.n()) return split_by_sign(dual_hessian(p, pair.sigma), false);
  throw Error(Errc::kInvalidArgument, "flat/sharp subspaces need m != n");
}

TrialityVerdict classify(const CanonicalProblem& p, const CriticalPair& pair) {
  if (!pair.converged) {
    throw Error(Errc::kInvalidArgument, "classify needs a converged critical pair");
  }
  const Eigen::Index n = p.n();
  const Eigen::Index m = p.m();

  TrialityVerdict v;
  const MatrixXd hp = hessian_at_pair(p, pair);
  const Inertia in_p = inertia_of(hp);
  v.primal_inertia = in_p;

  if (pair.region.in_sa_plus()) {
    v.tag = VerdictTag::kGlobalMin;
    v.rule = "canonical min-max duality";
    v.boundary_caveat = pair.region.tag == RegionTag::kSaPlusBoundary || pair.generalized;
    if (!pair.generalized) v.dual_inertia = inertia_of(dual_hessian(p, pair.sigma));
    return v;
  }
  if (pair.generalized) {
    v.tag = VerdictTag::kDegenerate;
    v.rule = "G(sigma) singular outside S_a^+";
    return v;
  }

  const MatrixXd hd = dual_hessian(p, pair.sigma);
  const Inertia in_d = inertia_of(hd);
  v.dual_inertia = in_d;

  // Haynsworth additivity on [[G, J], [J^T, -hess V*]] with hess V* > 0.
  const Inertia in_g = inertia_of(G_of(p, pair.sigma));
  v.inertia_balance = in_g.pos + in_d.pos == in_p.pos &&
                      in_g.neg + in_d.neg == m + in_p.neg &&
                      in_g.zero + in_d.zero == in_p.zero;

  if (in_p.zero > 0 || in_d.zero > 0) {
    v.tag = VerdictTag::kDegenerate;
    v.rule = "singular Hessian at the pair";
    return v;
  }
  try {
    v.smw_residual = smw_check(p, pair).relative();
  } catch (const Error&) {
    v.smw_residual.reset();
  }

  switch (pair.region.tag) {
    case RegionTag::kSaMinus:
      if (in_d.negative_definite()) {
        v.tag = VerdictTag::kDoubleMax;
        v.rule = "double-max duality";
      } else if (in_d.positive_definite() && n == m) {
        v.tag = VerdictTag::kDoubleMinStrong;
        v.rule = "double-min duality";
      } else if (in_d.positive_definite() && m < n) {
        v.tag = VerdictTag::kDoubleMinWeak;
        v.rule = "weak double-min duality on X_flat, weak saddle duality on X_sharp";
        v.bases = split_by_sign(hp, true);
      } else if (m > n && in_p.positive_definite()) {
        v.tag = VerdictTag::kSaddleDualWeak;
        v.rule = "weak double-min duality on S_flat, weak saddle duality on S_sharp";
        v.bases = split_by_sign(hd, false);
      } else {
        v.tag = VerdictTag::kSaddle;
        v.rule = "saddle correspondence";
      }
      break;
    case RegionTag::kIndefinite:
      v.tag = VerdictTag::kUnclassified;
      v.rule = "G(sigma) indefinite";
      break;
    default:
      v.tag = VerdictTag::kDegenerate;
      v.rule = "pair outside S_a";
      break;
  }
  return v;
}

}  // namespace canondual
