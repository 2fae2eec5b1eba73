#include "canondual/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace canondual {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr std::size_t kStallWindow = 10;
constexpr double kStallDecrease = 0.01;

// Extremes of Lambda_k over R^n when B^k is semidefinite and b_k lies in its
// column space; infinite otherwise.
Interval lambda_range(const MatrixXd& b_mat, const VectorXd& b_vec) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b_mat);
  const VectorXd& ev = es.eigenvalues();
  const double tol = eigen_tolerance(ev.cwiseAbs().maxCoeff());
  const bool psd = ev[0] >= -tol;
  const bool nsd = ev[ev.size() - 1] <= tol;
  // -1/2 b^T B^+ b and the null-space part of b.
  double quad = 0.0;
  double null_norm2 = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double c = es.eigenvectors().col(i).dot(b_vec);
    if (std::abs(ev[i]) > tol) {
      quad += c * c / ev[i];
    } else {
      null_norm2 += c * c;
    }
  }
  const bool in_col = std::sqrt(null_norm2) <= column_space_tolerance(b_vec.norm());
  Interval r{-kInf, kInf};
  if (psd && in_col) r.first = -0.5 * quad;
  if (nsd && in_col) r.second = -0.5 * quad;
  return r;
}

double problem_scale(const CanonicalProblem& p) {
  double s = 1.0 + p.a().norm() + p.f().norm();
  for (Eigen::Index k = 0; k < p.m(); ++k) {
    s = std::max(s, 1.0 + p.a().norm() + p.f().norm() + p.b_mat(k).norm() +
                        p.b_vec(k).norm());
  }
  return s;
}

double halton(int index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double max_step_to_boundary(const VectorXd& sigma, const VectorXd& dir,
                            const DualBounds& bounds) {
  double t = kInf;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (dir[k] < 0.0 && std::isfinite(bounds.lower[k])) {
      t = std::min(t, kFractionToBoundary * (sigma[k] - bounds.lower[k]) / -dir[k]);
    } else if (dir[k] > 0.0 && std::isfinite(bounds.upper[k])) {
      t = std::min(t, kFractionToBoundary * (bounds.upper[k] - sigma[k]) / dir[k]);
    }
  }
  return t;
}

bool try_evaluate(const CanonicalProblem& p, const VectorXd& sigma, DualEvaluation& out) {
  if (!sigma.allFinite() || !p.v().in_dual_domain(sigma)) return false;
  try {
    out = evaluate_dual(p, sigma, true);
  } catch (const Error&) {
    return false;
  }
  return out.gradient.allFinite() && std::isfinite(out.value);
}

}  // namespace

bool zero_gap_holds(double primal, double dual) {
  return std::abs(primal - dual) <= 1e-8 * (1.0 + std::abs(primal));
}

bool CriticalSet::no_critical_point_in_sa_plus() const {
  return std::none_of(pairs.begin(), pairs.end(),
                      [](const CriticalPair& c) { return c.region.in_sa_plus(); });
}

std::vector<Interval> default_dual_box(const CanonicalProblem& p) {
  const double scale = problem_scale(p);
  const double xi_span = scale * scale;
  std::vector<Interval> box;
  box.reserve(p.m());

  const auto* log_family = dynamic_cast<const LogBarrierFamily*>(&p.v());
  const auto* well_family = dynamic_cast<const QuadraticWellFamily*>(&p.v());

  for (Eigen::Index k = 0; k < p.m(); ++k) {
    const Interval range = lambda_range(p.b_mat(k), p.b_vec(k));
    if (log_family != nullptr) {
      const double d = log_family->d()[k];
      // s = -1/(xi + d) increases with xi; s -> 0 as xi -> inf.
      const double lo = (std::isfinite(range.first) && range.first + d > 0.0)
                            ? -1.0 / (range.first + d)
                            : -100.0 / d;
      const double hi = std::isfinite(range.second)
                            ? -1.0 / (std::max(range.second, -d + 1e-2 * d) + d)
                            : -1e-6 / d;
      box.emplace_back(lo, std::max(hi, lo));
    } else if (well_family != nullptr) {
      const double a = well_family->alpha()[k];
      const double l = well_family->lambda()[k];
      const double lo = std::isfinite(range.first) ? a * (range.first - l)
                                                   : -a * (std::abs(l) + xi_span);
      const double hi = std::isfinite(range.second) ? a * (range.second - l)
                                                    : a * (std::abs(l) + xi_span);
      box.emplace_back(lo, std::max(hi, lo));
    } else {
      const DualBounds b = p.v().dual_bounds();
      const double lo = std::isfinite(b.lower[k]) ? b.lower[k] : -xi_span;
      const double hi = std::isfinite(b.upper[k]) ? b.upper[k] : xi_span;
      box.emplace_back(lo, hi);
    }
  }
  return box;
}

void validate(const CanonicalProblem& p, const SearchConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(Errc::kInvalidArgument, msg); };
  if (cfg.starts < 1) fail("starts must be at least 1");
  if (!(cfg.tol_newton > 0.0)) fail("tolNewton must be positive");
  if (cfg.max_iter < 0) fail("maxIter must be non-negative");
  if (!(cfg.dedup_radius >= 0.0)) fail("dedupRadius must be non-negative");
  if (cfg.box.empty()) return;
  if (static_cast<Eigen::Index>(cfg.box.size()) != p.m()) {
    fail("box needs one interval per dual coordinate (m = " + std::to_string(p.m()) + ")");
  }
  const DualBounds b = p.v().dual_bounds();
  for (std::size_t k = 0; k < cfg.box.size(); ++k) {
    const auto [lo, hi] = cfg.box[k];
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      fail("box[" + std::to_string(k) + "] must be a finite interval with lo <= hi");
    }
    if (lo < b.lower[k] || hi > b.upper[k]) {
      std::ostringstream os;
      os << "box[" << k << "] = [" << lo << ", " << hi
         << "] leaves the conjugate domain [" << b.lower[k] << ", " << b.upper[k] << "]";
      fail(os.str());
    }
  }
}

std::vector<VectorXd> seed_points(const CanonicalProblem& p, const SearchConfig& cfg) {
  const std::vector<Interval> box = cfg.box.empty() ? default_dual_box(p) : cfg.box;
  const auto m = static_cast<int>(p.m());
  std::vector<VectorXd> seeds;

  if (m <= 3) {
    int per_axis = static_cast<int>(std::ceil(std::pow(cfg.starts, 1.0 / m) - 1e-9));
    per_axis = std::max(per_axis, 1);
    auto coord = [&](int axis, int i) {
      const auto [lo, hi] = box[axis];
      if (per_axis == 1) return 0.5 * (lo + hi);
      return lo + (hi - lo) * static_cast<double>(i) / (per_axis - 1);
    };
    int total = 1;
    for (int k = 0; k < m; ++k) total *= per_axis;
    for (int idx = 0; idx < total; ++idx) {
      VectorXd s(m);
      int rem = idx;
      for (int k = m - 1; k >= 0; --k) {
        s[k] = coord(k, rem % per_axis);
        rem /= per_axis;
      }
      seeds.push_back(std::move(s));
    }
  } else {
    const int nprimes = static_cast<int>(std::size(kPrimes));
    for (int i = 1; i <= cfg.starts; ++i) {
      VectorXd s(m);
      for (int k = 0; k < m; ++k) {
        const auto [lo, hi] = box[k];
        const double u = k < nprimes ? halton(i, kPrimes[k])
                                     : std::fmod(i * 0.6180339887498949 * (k + 1), 1.0);
        s[k] = lo + (hi - lo) * u;
      }
      seeds.push_back(std::move(s));
    }
  }

  std::erase_if(seeds, [&](const VectorXd& s) { return !p.v().in_dual_domain(s); });
  return seeds;
}

CriticalPair make_pair_at(const CanonicalProblem& p, const VectorXd& sigma,
                          const SearchConfig& cfg, int iterations) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const DualEvaluation ev = evaluate_dual(p, sigma, false);

  CriticalPair c;
  c.sigma = sigma;
  c.x = ev.x;
  c.dual_value = ev.value;
  c.grad_dual_norm = ev.gradient.norm();
  c.generalized = ev.generalized;
  c.iterations = iterations;
  c.region = classify_region(p, sigma);
  c.xi_value = xi_total(p, c.x, sigma);
  c.gap_value = gap(p, c.x, sigma);
  if (in_primal_domain(p, c.x)) {
    c.primal_value = primal_value(p, c.x);
    c.grad_primal_norm = primal_gradient(p, c.x).norm();
  } else {
    c.primal_value = nan;
    c.grad_primal_norm = nan;
  }
  c.converged = c.grad_dual_norm <= cfg.tol_newton && std::isfinite(c.primal_value);
  return c;
}

CriticalPair refine(const CanonicalProblem& p, const VectorXd& sigma0,
                    const SearchConfig& cfg) {
  if (sigma0.size() != p.m()) {
    throw Error(Errc::kDimensionMismatch, "sigma0 has wrong dimension");
  }
  if (!p.v().in_dual_domain(sigma0)) {
    throw Error(Errc::kDomainError, "sigma0 lies outside the conjugate domain");
  }
  const DualBounds bounds = p.v().dual_bounds();
  DualEvaluation ev = evaluate_dual(p, sigma0, true);

  std::vector<double> history;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    const double gnorm = ev.gradient.norm();
    if (gnorm <= cfg.tol_newton) break;
    const double merit = 0.5 * gnorm * gnorm;
    // Stuck at a nonzero minimum of the merit: give up on this seed.
    if (history.size() >= kStallWindow &&
        merit > (1.0 - kStallDecrease) * history[history.size() - kStallWindow]) {
      break;
    }
    history.push_back(merit);

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      // attempt 0: Newton; attempt 1: steepest descent on 1/2 |grad|^2.
      VectorXd dir;
      double slope = 0.0;
      double t = 1.0;
      if (attempt == 0) {
        if (ev.hessian.size() == 0) continue;
        Eigen::FullPivLU<MatrixXd> lu(ev.hessian);
        if (!lu.isInvertible() || lu.rcond() < 1e-14) continue;
        dir = -lu.solve(ev.gradient);
        if (!dir.allFinite()) continue;
        slope = -gnorm * gnorm;
      } else {
        if (ev.hessian.size() == 0) {
          dir = -ev.gradient;
          slope = -gnorm * gnorm;  // crude: no curvature information
        } else {
          dir = -(ev.hessian * ev.gradient);
          const VectorXd hd = ev.hessian * dir;
          slope = ev.gradient.dot(hd);
          if (!(slope < 0.0)) continue;
          t = -slope / hd.squaredNorm();
        }
      }
      t = std::min(t, max_step_to_boundary(ev.sigma, dir, bounds));

      for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
        DualEvaluation trial;
        if (!try_evaluate(p, ev.sigma + t * dir, trial)) continue;
        // Pi^d is undefined where G is singular; a step whose endpoint has a
        // different inertia of G has crossed such a surface.
        if (trial.g_negative != ev.g_negative || trial.generalized != ev.generalized) continue;
        const double trial_merit = 0.5 * trial.gradient.squaredNorm();
        if (trial_merit <= merit + kArmijo * t * slope) {
          ev = std::move(trial);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
  }
  return make_pair_at(p, ev.sigma, cfg, iter);
}

CriticalSet find_critical_points(const CanonicalProblem& p, const SearchConfig& cfg) {
  validate(p, cfg);
  CriticalSet out;
  std::vector<CriticalPair> found;
  for (const VectorXd& seed : seed_points(p, cfg)) {
    ++out.starts_used;
    try {
      CriticalPair c = refine(p, seed, cfg);
      if (c.converged) {
        found.push_back(std::move(c));
      } else {
        ++out.starts_failed;
      }
    } catch (const Error&) {
      ++out.starts_failed;
    }
  }

  // Best residual first so the survivor of each cluster is the sharpest.
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.grad_dual_norm < b.grad_dual_norm;
  });
  std::vector<CriticalPair> unique;
  for (auto& c : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto& kept) {
      return (kept.sigma - c.sigma).cwiseAbs().maxCoeff() <= cfg.dedup_radius;
    });
    if (!dup) unique.push_back(std::move(c));
  }
  for (auto& c : unique) {
    if (c.region.tag == RegionTag::kIndefinite && !cfg.include_indefinite) {
      ++out.indefinite_omitted;
    } else {
      out.pairs.push_back(std::move(c));
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) {
    if (a.dual_value != b.dual_value) return a.dual_value > b.dual_value;
    return std::lexicographical_compare(a.sigma.begin(), a.sigma.end(), b.sigma.begin(),
                                        b.sigma.end());
  });
  return out;
}

}  // namespace canondual
