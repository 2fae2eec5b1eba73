#pragma once

// Independent numerical evidence for solver and classifier output. Nothing
// here calls the solver or the classifier.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "canondual/triality.hpp"

namespace canondual {

struct FdReport {
  double grad_err = 0.0;
  double hess_err = 0.0;
};

/// Analytic vs central-difference derivatives of Pi at x (gradient from
/// primal_value, Hessian from primal_gradient). Relative errors
/// |analytic - fd|_inf / max(1, |analytic|_inf); steps 1e-4 and 1e-6 with a
/// Richardson extrapolation, best of the three. kDomainError if a stencil
/// point leaves the domain.
FdReport fd_check_primal(const CanonicalProblem& p, const VectorXd& x);

/// Same for Pi^d at sigma (needs G invertible on the stencil).
FdReport fd_check_dual(const CanonicalProblem& p, const VectorXd& sigma);

/// Same for V at xi and for V* at sigma = grad V(xi); the worse of the two
/// is reported.
FdReport fd_check_family(const CanonicalFunction& v, const VectorXd& xi);

enum class ProbeEvidence { kLooksMin, kLooksMax, kLooksSaddle, kInconclusive };

std::string_view evidence_name(ProbeEvidence e);
ProbeEvidence evidence_from_name(std::string_view name);

/// Absolute slack on Pi(sample) - Pi(center).
inline constexpr double kProbeSlack = 1e-12;

struct ProbeReport {
  VectorXd center;
  double radius = 0.0;  ///< radius actually used after any shrinking
  int samples = 0;      ///< feasible samples evaluated
  int infeasible = 0;
  double min_delta = 0.0;
  double max_delta = 0.0;
  ProbeEvidence evidence = ProbeEvidence::kInconclusive;
};

struct ProbeOptions {
  double radius = 0.0;  ///< <= 0 selects 1e-3 (1 + |center|)
  int samples = 512;
  std::uint64_t seed = 0x5eed;
};

/// Evaluates Pi at center + r d, d uniform on the unit sphere of `subspace`
/// (or of R^n), r uniform in [radius/2, radius]. If more than 20% of the
/// samples leave the domain the radius is halved, at most 6 times.
/// kAllInfeasible when no sample is feasible.
ProbeReport probe(const CanonicalProblem& p, const VectorXd& center,
                  const ProbeOptions& opts, const SubspaceBasis* subspace = nullptr);

struct GridResult {
  VectorXd x;
  double value = 0.0;
  /// Grid argmin before polishing.
  VectorXd grid_x;
};

/// Dense grid argmin of Pi over `box` (n <= 3) followed by a compass-search
/// polish on the 3^n neighbor stencil. Throws kBoxTooCoarse when the grid
/// argmin lies on the box boundary and kInvalidArgument for n > 3.
GridResult grid_global_min(const CanonicalProblem& p, std::span<const Interval> box,
                           int points_per_axis);

struct AuditResult {
  double fenchel = 0.0;   ///< max |V(xi) + V*(grad V(xi)) - <xi, grad V(xi)>|
  double inverse = 0.0;   ///< max |grad V*(grad V(xi)) - xi|
  double max_residual() const { return fenchel > inverse ? fenchel : inverse; }
};

AuditResult canonical_audit(const CanonicalFunction& v, std::span<const VectorXd> samples);

}  // namespace canondual
