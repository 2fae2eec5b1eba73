#include "canondual/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "canondual/dual.hpp"

namespace canondual {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kDomainError: return "DomainError";
    case Errc::kConsistencyError: return "ConsistencyError";
    case Errc::kSingularG: return "SingularG";
    case Errc::kSingularHessian: return "SingularHessian";
    case Errc::kDegenerateSpectrum: return "DegenerateSpectrum";
    case Errc::kAllInfeasible: return "AllInfeasible";
    case Errc::kBoxTooCoarse: return "BoxTooCoarse";
    case Errc::kSchemaError: return "SchemaError";
  }
  return "Unknown";
}

namespace {

void require_size(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": expected dimension " << want << ", got " << got;
    throw Error(Errc::kDimensionMismatch, os.str());
  }
}

void require_positive(const VectorXd& v, const char* what) {
  if (v.size() == 0) {
    throw Error(Errc::kInvalidArgument, std::string(what) + " must be non-empty");
  }
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0.0) || !std::isfinite(v[k])) {
      std::ostringstream os;
      os << what << "[" << k << "] must be a positive finite number";
      throw Error(Errc::kInvalidArgument, os.str());
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LogBarrierFamily

LogBarrierFamily::LogBarrierFamily(VectorXd d) : d_(std::move(d)) {
  require_positive(d_, "d");
}

bool LogBarrierFamily::in_domain(const VectorXd& xi) const {
  if (xi.size() != d_.size()) return false;
  return ((xi + d_).array() > 0.0).all();
}

void LogBarrierFamily::require_domain(const VectorXd& xi) const {
  require_size(xi.size(), d_.size(), "xi");
  if (!in_domain(xi)) {
    throw Error(Errc::kDomainError, "log family: xi_k + d_k must be positive");
  }
}

double LogBarrierFamily::value(const VectorXd& xi) const {
  require_domain(xi);
  return -(xi + d_).array().log().sum();
}

VectorXd LogBarrierFamily::gradient(const VectorXd& xi) const {
  require_domain(xi);
  return -(xi + d_).array().inverse().matrix();
}

MatrixXd LogBarrierFamily::hessian(const VectorXd& xi) const {
  require_domain(xi);
  return (xi + d_).array().square().inverse().matrix().asDiagonal();
}

bool LogBarrierFamily::in_dual_domain(const VectorXd& sigma) const {
  if (sigma.size() != d_.size()) return false;
  return (sigma.array() < 0.0).all();
}

void LogBarrierFamily::require_dual_domain(const VectorXd& sigma) const {
  require_size(sigma.size(), d_.size(), "sigma");
  if (!in_dual_domain(sigma)) {
    throw Error(Errc::kDomainError, "log family: conjugate needs sigma_k < 0");
  }
}

double LogBarrierFamily::conjugate_value(const VectorXd& sigma) const {
  require_dual_domain(sigma);
  double total = 0.0;
  for (Eigen::Index k = 0; k < d_.size(); ++k) {
    total += -1.0 - d_[k] * sigma[k] - std::log(-sigma[k]);
  }
  return total;
}

VectorXd LogBarrierFamily::conjugate_gradient(const VectorXd& sigma) const {
  require_dual_domain(sigma);
  return (-sigma.array().inverse() - d_.array()).matrix();
}

MatrixXd LogBarrierFamily::conjugate_hessian(const VectorXd& sigma) const {
  require_dual_domain(sigma);
  return sigma.array().square().inverse().matrix().asDiagonal();
}

DualBounds LogBarrierFamily::dual_bounds() const {
  const auto m = d_.size();
  return {VectorXd::Constant(m, -std::numeric_limits<double>::infinity()),
          VectorXd::Zero(m)};
}

// ---------------------------------------------------------------------------
// QuadraticWellFamily

QuadraticWellFamily::QuadraticWellFamily(VectorXd alpha, VectorXd lambda)
    : alpha_(std::move(alpha)), lambda_(std::move(lambda)) {
  require_positive(alpha_, "alpha");
  require_size(lambda_.size(), alpha_.size(), "lambda");
  if (!lambda_.allFinite()) {
    throw Error(Errc::kInvalidArgument, "lambda must be finite");
  }
}

void QuadraticWellFamily::require_dim(const VectorXd& v) const {
  require_size(v.size(), alpha_.size(), "quadratic-well argument");
}

bool QuadraticWellFamily::in_domain(const VectorXd& xi) const {
  return xi.size() == alpha_.size() && xi.allFinite();
}

double QuadraticWellFamily::value(const VectorXd& xi) const {
  require_dim(xi);
  return 0.5 * (alpha_.array() * (xi - lambda_).array().square()).sum();
}

VectorXd QuadraticWellFamily::gradient(const VectorXd& xi) const {
  require_dim(xi);
  return (alpha_.array() * (xi - lambda_).array()).matrix();
}

MatrixXd QuadraticWellFamily::hessian(const VectorXd& xi) const {
  require_dim(xi);
  return alpha_.asDiagonal();
}

bool QuadraticWellFamily::in_dual_domain(const VectorXd& sigma) const {
  return sigma.size() == alpha_.size() && sigma.allFinite();
}

double QuadraticWellFamily::conjugate_value(const VectorXd& sigma) const {
  require_dim(sigma);
  return (0.5 * sigma.array().square() / alpha_.array() +
          lambda_.array() * sigma.array())
      .sum();
}

VectorXd QuadraticWellFamily::conjugate_gradient(const VectorXd& sigma) const {
  require_dim(sigma);
  return (sigma.array() / alpha_.array() + lambda_.array()).matrix();
}

MatrixXd QuadraticWellFamily::conjugate_hessian(const VectorXd& sigma) const {
  require_dim(sigma);
  return alpha_.array().inverse().matrix().asDiagonal();
}

DualBounds QuadraticWellFamily::dual_bounds() const {
  const auto m = alpha_.size();
  const double inf = std::numeric_limits<double>::infinity();
  return {VectorXd::Constant(m, -inf), VectorXd::Constant(m, inf)};
}

// ---------------------------------------------------------------------------
// CanonicalProblem

MatrixXd symmetrize_checked(const MatrixXd& m, const std::string& name) {
  if (m.rows() != m.cols()) {
    throw Error(Errc::kDimensionMismatch, name + " must be square");
  }
  if (!m.allFinite()) {
    throw Error(Errc::kInvalidArgument, name + " has non-finite entries");
  }
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  const double asym = m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryTolerance * (1.0 + scale)) {
    std::ostringstream os;
    os << name << " is not symmetric (max |M - M^T| = " << asym << ")";
    throw Error(Errc::kInvalidArgument, os.str());
  }
  return 0.5 * (m + m.transpose());
}

CanonicalProblem CanonicalProblem::create(MatrixXd a, std::vector<MatrixXd> b_mats,
                                          std::vector<VectorXd> b_vecs, VectorXd f,
                                          std::shared_ptr<const CanonicalFunction> v) {
  if (!v) throw Error(Errc::kInvalidArgument, "canonical function is null");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = static_cast<Eigen::Index>(b_mats.size());
  if (n < 1) throw Error(Errc::kInvalidArgument, "n must be at least 1");
  if (m < 1) throw Error(Errc::kInvalidArgument, "m must be at least 1");
  require_size(a.cols(), n, "A");
  require_size(static_cast<Eigen::Index>(b_vecs.size()), m, "b (number of vectors)");
  require_size(f.size(), n, "f");
  require_size(v->dim(), m, "canonical function");
  if (!f.allFinite()) throw Error(Errc::kInvalidArgument, "f has non-finite entries");

  CanonicalProblem p;
  p.a_ = symmetrize_checked(a, "A");
  p.b_mats_.reserve(b_mats.size());
  for (std::size_t k = 0; k < b_mats.size(); ++k) {
    const std::string name = "B[" + std::to_string(k) + "]";
    require_size(b_mats[k].rows(), n, name.c_str());
    p.b_mats_.push_back(symmetrize_checked(b_mats[k], name));
  }
  for (std::size_t k = 0; k < b_vecs.size(); ++k) {
    require_size(b_vecs[k].size(), n, ("b[" + std::to_string(k) + "]").c_str());
    if (!b_vecs[k].allFinite()) {
      throw Error(Errc::kInvalidArgument, "b has non-finite entries");
    }
  }
  p.b_vecs_ = std::move(b_vecs);
  p.f_ = std::move(f);
  p.v_ = std::move(v);
  return p;
}

// ---------------------------------------------------------------------------
// Primal side

VectorXd lambda(const CanonicalProblem& p, const VectorXd& x) {
  require_size(x.size(), p.n(), "x");
  VectorXd xi(p.m());
  for (Eigen::Index k = 0; k < p.m(); ++k) {
    xi[k] = 0.5 * x.dot(p.b_mat(k) * x) + p.b_vec(k).dot(x);
  }
  return xi;
}

MatrixXd grad_lambda(const CanonicalProblem& p, const VectorXd& x) {
  require_size(x.size(), p.n(), "x");
  MatrixXd j(p.n(), p.m());
  for (Eigen::Index k = 0; k < p.m(); ++k) {
    j.col(k) = p.b_mat(k) * x + p.b_vec(k);
  }
  return j;
}

bool in_primal_domain(const CanonicalProblem& p, const VectorXd& x) {
  return x.size() == p.n() && x.allFinite() && p.v().in_domain(lambda(p, x));
}

double primal_value(const CanonicalProblem& p, const VectorXd& x) {
  const VectorXd xi = lambda(p, x);
  return p.v().value(xi) + 0.5 * x.dot(p.a() * x) - x.dot(p.f());
}

VectorXd primal_gradient(const CanonicalProblem& p, const VectorXd& x) {
  const VectorXd xi = lambda(p, x);
  return grad_lambda(p, x) * p.v().gradient(xi) + p.a() * x - p.f();
}

MatrixXd primal_hessian(const CanonicalProblem& p, const VectorXd& x,
                        const VectorXd& sigma) {
  require_size(sigma.size(), p.m(), "sigma");
  const VectorXd image = p.v().gradient(lambda(p, x));
  const double mismatch = (image - sigma).norm();
  if (mismatch > 1e-8 * (1.0 + sigma.norm())) {
    std::ostringstream os;
    os << "sigma differs from grad V(Lambda(x)) by " << mismatch;
    throw Error(Errc::kConsistencyError, os.str());
  }
  const MatrixXd j = grad_lambda(p, x);
  const MatrixXd hv_inv = p.v().conjugate_hessian(sigma).inverse();
  const MatrixXd h = G_of(p, sigma) + j * hv_inv * j.transpose();
  return 0.5 * (h + h.transpose());
}

MatrixXd primal_hessian_direct(const CanonicalProblem& p, const VectorXd& x) {
  const VectorXd xi = lambda(p, x);
  const MatrixXd j = grad_lambda(p, x);
  const MatrixXd h = G_of(p, p.v().gradient(xi)) + j * p.v().hessian(xi) * j.transpose();
  return 0.5 * (h + h.transpose());
}

}  // namespace canondual
