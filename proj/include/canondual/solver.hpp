#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "canondual/dual.hpp"

namespace canondual {

/// Closed per-coordinate interval [lo, hi].
using Interval = std::pair<double, double>;

struct SearchConfig {
  /// Number of multistart seeds. Spread on a uniform grid for m <= 3 and on
  /// a Halton sequence otherwise.
  int starts = 64;
  /// Seed box over sigma, one interval per dual coordinate. Empty means
  /// `default_dual_box(p)`.
  std::vector<Interval> box;
  double tol_newton = 1e-10;
  int max_iter = 100;
  double dedup_radius = 1e-6;
  /// Keep critical points where G(sigma) is indefinite. The triality
  /// statements only cover S_a^+ and S_a^-, so these are counted but dropped
  /// by default.
  bool include_indefinite = false;
};

/// Fraction-to-boundary factor against the walls of V*_a.
inline constexpr double kFractionToBoundary = 0.99;

/// Critical point of Pi^d with its recovered primal partner.
struct CriticalPair {
  VectorXd sigma;
  VectorXd x;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double xi_value = 0.0;
  double grad_primal_norm = 0.0;
  double grad_dual_norm = 0.0;
  double gap_value = 0.0;
  RegionLabel region;
  /// x came from the minimum-norm solution of a singular G(sigma).
  bool generalized = false;
  bool converged = false;
  int iterations = 0;
};

struct CriticalSet {
  /// Converged, deduplicated pairs ordered by dual value, descending.
  std::vector<CriticalPair> pairs;
  int starts_used = 0;
  int starts_failed = 0;
  /// Critical points with indefinite G(sigma) left out of `pairs`.
  int indefinite_omitted = 0;

  bool empty() const { return pairs.empty(); }
  /// No pair lies in S_a^+: minimizing Pi may be hard for this instance and
  /// the dual gives no global certificate.
  bool no_critical_point_in_sa_plus() const;
};

/// Seed box derived from V*_a and, where it can be bounded, the range of
/// Lambda. Coordinates the structure does not bound fall back to a finite
/// scale estimate.
std::vector<Interval> default_dual_box(const CanonicalProblem& p);

/// Throws kInvalidArgument if cfg is unusable for p (starts < 1, box of wrong
/// size, box outside the closure of V*_a, non-positive tolerances).
void validate(const CanonicalProblem& p, const SearchConfig& cfg);

/// Seeds for the multistart, in deterministic order, restricted to the open
/// conjugate domain.
std::vector<VectorXd> seed_points(const CanonicalProblem& p, const SearchConfig& cfg);

/// Damped Newton on grad Pi^d = 0 from sigma0. Returns the best iterate with
/// converged = false when the iteration budget runs out or the merit stalls.
CriticalPair refine(const CanonicalProblem& p, const VectorXd& sigma0,
                    const SearchConfig& cfg);

/// Fills every diagnostic of a pair at sigma (no iteration). `converged` is
/// decided from cfg.tol_newton and the zero-gap test.
CriticalPair make_pair_at(const CanonicalProblem& p, const VectorXd& sigma,
                          const SearchConfig& cfg, int iterations);

CriticalSet find_critical_points(const CanonicalProblem& p, const SearchConfig& cfg);

/// |Pi(x) - Pi^d(s)| <= 1e-8 (1 + |Pi(x)|).
bool zero_gap_holds(double primal, double dual);

}  // namespace canondual
