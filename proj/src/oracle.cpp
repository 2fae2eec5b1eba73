#include "canondual/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace canondual {

namespace {

using ScalarFn = std::function<double(const VectorXd&)>;
using VectorFn = std::function<VectorXd(const VectorXd&)>;

constexpr double kCoarseStep = 1e-4;
constexpr double kFineStep = 1e-6;

double rel_err(const MatrixXd& analytic, const MatrixXd& approx) {
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - approx).cwiseAbs().maxCoeff() / scale;
}

VectorXd fd_gradient(const ScalarFn& f, const VectorXd& x, double h) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x;
    VectorXd xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

MatrixXd fd_jacobian(const VectorFn& g, const VectorXd& x, double h) {
  MatrixXd j(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x;
    VectorXd xm = x;
    xp[i] += h;
    xm[i] -= h;
    j.col(i) = (g(xp) - g(xm)) / (2.0 * h);
  }
  return 0.5 * (j + j.transpose());
}

FdReport fd_compare(const ScalarFn& f, const VectorFn& g, const MatrixXd& hess_analytic,
                    const VectorXd& x) {
  const VectorXd grad = g(x);
  const VectorXd g_coarse = fd_gradient(f, x, kCoarseStep);
  const VectorXd g_half = fd_gradient(f, x, 0.5 * kCoarseStep);
  const VectorXd g_fine = fd_gradient(f, x, kFineStep);
  const VectorXd g_rich = (4.0 * g_half - g_coarse) / 3.0;

  const MatrixXd h_coarse = fd_jacobian(g, x, kCoarseStep);
  const MatrixXd h_half = fd_jacobian(g, x, 0.5 * kCoarseStep);
  const MatrixXd h_fine = fd_jacobian(g, x, kFineStep);
  const MatrixXd h_rich = (4.0 * h_half - h_coarse) / 3.0;

  FdReport r;
  r.grad_err = std::min({rel_err(grad, g_coarse), rel_err(grad, g_fine), rel_err(grad, g_rich)});
  r.hess_err = std::min({rel_err(hess_analytic, h_coarse), rel_err(hess_analytic, h_fine),
                         rel_err(hess_analytic, h_rich)});
  return r;
}

// Allocation-light Pi for dense scans; reuses the caller's buffers.
class PrimalScanner {
 public:
  explicit PrimalScanner(const CanonicalProblem& p) : p_(p), xi_(p.m()), bx_(p.n()) {}

  // NaN outside the domain.
  double operator()(const VectorXd& x) {
    for (Eigen::Index k = 0; k < p_.m(); ++k) {
      bx_.noalias() = p_.b_mat(k) * x;
      xi_[k] = 0.5 * x.dot(bx_) + p_.b_vec(k).dot(x);
    }
    if (!p_.v().in_domain(xi_)) return std::numeric_limits<double>::quiet_NaN();
    bx_.noalias() = p_.a() * x;
    return p_.v().value(xi_) + 0.5 * x.dot(bx_) - x.dot(p_.f());
  }

 private:
  const CanonicalProblem& p_;
  VectorXd xi_;
  VectorXd bx_;
};

}  // namespace

FdReport fd_check_primal(const CanonicalProblem& p, const VectorXd& x) {
  return fd_compare([&](const VectorXd& y) { return primal_value(p, y); },
                    [&](const VectorXd& y) { return primal_gradient(p, y); },
                    primal_hessian_direct(p, x), x);
}

FdReport fd_check_dual(const CanonicalProblem& p, const VectorXd& sigma) {
  return fd_compare([&](const VectorXd& s) { return dual_value(p, s); },
                    [&](const VectorXd& s) { return dual_gradient(p, s); },
                    dual_hessian(p, sigma), sigma);
}

FdReport fd_check_family(const CanonicalFunction& v, const VectorXd& xi) {
  const FdReport primal = fd_compare([&](const VectorXd& y) { return v.value(y); },
                                     [&](const VectorXd& y) { return v.gradient(y); },
                                     v.hessian(xi), xi);
  const VectorXd sigma = v.gradient(xi);
  const FdReport conj =
      fd_compare([&](const VectorXd& s) { return v.conjugate_value(s); },
                 [&](const VectorXd& s) { return v.conjugate_gradient(s); },
                 v.conjugate_hessian(sigma), sigma);
  return {std::max(primal.grad_err, conj.grad_err), std::max(primal.hess_err, conj.hess_err)};
}

std::string_view evidence_name(ProbeEvidence e) {
  switch (e) {
    case ProbeEvidence::kLooksMin: return "LooksMin";
    case ProbeEvidence::kLooksMax: return "LooksMax";
    case ProbeEvidence::kLooksSaddle: return "LooksSaddle";
    case ProbeEvidence::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ProbeEvidence evidence_from_name(std::string_view name) {
  for (ProbeEvidence e : {ProbeEvidence::kLooksMin, ProbeEvidence::kLooksMax,
                          ProbeEvidence::kLooksSaddle, ProbeEvidence::kInconclusive}) {
    if (evidence_name(e) == name) return e;
  }
  throw Error(Errc::kInvalidArgument, "unknown probe evidence: " + std::string(name));
}

ProbeReport probe(const CanonicalProblem& p, const VectorXd& center,
                  const ProbeOptions& opts, const SubspaceBasis* subspace) {
  if (center.size() != p.n()) {
    throw Error(Errc::kDimensionMismatch, "probe center has wrong dimension");
  }
  if (opts.samples < 1) throw Error(Errc::kInvalidArgument, "probe needs samples >= 1");
  if (subspace != nullptr && subspace->columns.rows() != p.n()) {
    throw Error(Errc::kDimensionMismatch, "subspace basis has wrong row count");
  }
  const Eigen::Index k = subspace != nullptr ? subspace->columns.cols() : p.n();
  if (k == 0) throw Error(Errc::kInvalidArgument, "probe subspace is empty");

  const double base = primal_value(p, center);
  double radius = opts.radius > 0.0 ? opts.radius : 1e-3 * (1.0 + center.norm());

  PrimalScanner eval(p);
  ProbeReport rep;
  for (int shrink = 0;; ++shrink) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    rep = ProbeReport{};
    rep.center = center;
    rep.radius = radius;
    rep.min_delta = std::numeric_limits<double>::infinity();
    rep.max_delta = -std::numeric_limits<double>::infinity();
    VectorXd coords(k);
    for (int s = 0; s < opts.samples; ++s) {
      for (Eigen::Index i = 0; i < k; ++i) coords[i] = normal(rng);
      const double nrm = coords.norm();
      if (nrm == 0.0) continue;
      const double r = radius * (0.5 + 0.5 * unit(rng));
      const VectorXd dir = subspace != nullptr ? VectorXd(subspace->columns * coords)
                                               : VectorXd(coords);
      const double val = eval(center + (r / nrm) * dir);
      if (std::isnan(val)) {
        ++rep.infeasible;
        continue;
      }
      ++rep.samples;
      rep.min_delta = std::min(rep.min_delta, val - base);
      rep.max_delta = std::max(rep.max_delta, val - base);
    }
    if (rep.infeasible > 0.2 * opts.samples && shrink < 6) {
      radius *= 0.5;
      continue;
    }
    break;
  }
  if (rep.samples == 0) {
    throw Error(Errc::kAllInfeasible, "every probe sample left the domain");
  }

  const bool no_lower = rep.min_delta >= -kProbeSlack;
  const bool no_higher = rep.max_delta <= kProbeSlack;
  if (no_lower && no_higher) {
    rep.evidence = ProbeEvidence::kInconclusive;
  } else if (no_lower) {
    rep.evidence = ProbeEvidence::kLooksMin;
  } else if (no_higher) {
    rep.evidence = ProbeEvidence::kLooksMax;
  } else {
    rep.evidence = ProbeEvidence::kLooksSaddle;
  }
  return rep;
}

GridResult grid_global_min(const CanonicalProblem& p, std::span<const Interval> box,
                           int points_per_axis) {
  const auto n = static_cast<int>(p.n());
  if (n > 3) throw Error(Errc::kInvalidArgument, "grid search supports n <= 3");
  if (static_cast<int>(box.size()) != n) {
    throw Error(Errc::kDimensionMismatch, "grid box needs one interval per coordinate");
  }
  if (points_per_axis < 3) throw Error(Errc::kInvalidArgument, "need >= 3 points per axis");

  VectorXd spacing(n);
  for (int i = 0; i < n; ++i) {
    if (!(box[i].second > box[i].first)) {
      throw Error(Errc::kInvalidArgument, "grid box intervals must have lo < hi");
    }
    spacing[i] = (box[i].second - box[i].first) / (points_per_axis - 1);
  }
  auto point = [&](const std::vector<int>& idx) {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = box[i].first + spacing[i] * idx[i];
    return x;
  };

  PrimalScanner eval(p);
  std::vector<int> idx(n, 0);
  std::vector<int> best_idx;
  double best = std::numeric_limits<double>::infinity();
  VectorXd x(n);
  for (;;) {
    for (int i = 0; i < n; ++i) x[i] = box[i].first + spacing[i] * idx[i];
    const double val = eval(x);
    if (val < best) {
      best = val;
      best_idx = idx;
    }
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == points_per_axis) idx[axis--] = 0;
    if (axis < 0) break;
  }
  if (best_idx.empty()) throw Error(Errc::kAllInfeasible, "no grid point is feasible");
  for (int i = 0; i < n; ++i) {
    if (best_idx[i] == 0 || best_idx[i] == points_per_axis - 1) {
      throw Error(Errc::kBoxTooCoarse, "grid minimizer lies on the box boundary");
    }
  }

  GridResult out;
  out.grid_x = point(best_idx);
  out.x = out.grid_x;
  out.value = best;

  // Compass search over the 3^n stencil, halving the step on failure.
  VectorXd step = spacing;
  int stencil = 1;
  for (int i = 0; i < n; ++i) stencil *= 3;
  for (int halvings = 0; halvings < 200; ) {
    VectorXd best_x = out.x;
    double best_val = out.value;
    for (int s = 0; s < stencil; ++s) {
      int rem = s;
      VectorXd trial = out.x;
      for (int i = 0; i < n; ++i) {
        trial[i] += step[i] * ((rem % 3) - 1);
        rem /= 3;
      }
      const double val = eval(trial);
      if (val < best_val) {
        best_val = val;
        best_x = trial;
      }
    }
    if (best_val < out.value) {
      out.x = best_x;
      out.value = best_val;
    } else {
      step *= 0.5;
      ++halvings;
      if (step.maxCoeff() < 1e-13 * (1.0 + out.x.cwiseAbs().maxCoeff())) break;
    }
  }
  return out;
}

AuditResult canonical_audit(const CanonicalFunction& v, std::span<const VectorXd> samples) {
  AuditResult r;
  for (const VectorXd& xi : samples) {
    const VectorXd sigma = v.gradient(xi);
    const double fenchel = std::abs(v.value(xi) + v.conjugate_value(sigma) - xi.dot(sigma));
    const double inverse = (v.conjugate_gradient(sigma) - xi).norm();
    r.fenchel = std::max(r.fenchel, fenchel);
    r.inverse = std::max(r.inverse, inverse);
  }
  return r;
}

}  // namespace canondual
