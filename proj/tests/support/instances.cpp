#include "instances.hpp"

#include <algorithm>
#include <cmath>

namespace canondual::testing {

CanonicalProblem quadratic_log_problem() {
  MatrixXd a = MatrixXd::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  MatrixXd b = MatrixXd::Zero(2, 2);
  b.diagonal() << 5.0, 4.0;
  VectorXd f(2);
  f << 0.5, 0.1;
  VectorXd d(1);
  d << 1.0;
  return CanonicalProblem::create(a, {b}, {VectorXd::Zero(2)}, f,
                                  std::make_shared<LogBarrierFamily>(d));
}

VectorXd x_global() { return Eigen::Vector2d(1.58640312, 0.06886375); }
VectorXd x_local_min() { return Eigen::Vector2d(-0.2901031, -0.5592211); }
VectorXd x_local_max() { return Eigen::Vector2d(-0.13296148, -0.0552978); }

CanonicalProblem double_well_problem(double alpha, double lambda, double f) {
  VectorXd al(1), la(1), ff(1);
  al << alpha;
  la << lambda;
  ff << f;
  return CanonicalProblem::create(MatrixXd::Zero(1, 1), {MatrixXd::Identity(1, 1)},
                                  {VectorXd::Zero(1)}, ff,
                                  std::make_shared<QuadraticWellFamily>(al, la));
}

double double_well_dual_slope(double s, double alpha, double lambda, double f) {
  return f * f / (2.0 * s * s) - s / alpha - lambda;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

VectorXd random_vector(Rng& rng, int n, double lo, double hi) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

MatrixXd random_symmetric(Rng& rng, int n, double eig_lo, double eig_hi) {
  MatrixXd g(n, n);
  std::normal_distribution<double> normal;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
  const VectorXd eig = random_vector(rng, n, eig_lo, eig_hi);
  MatrixXd s = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

CanonicalProblem perturbed_known_problem(Rng& rng, int n) {
  auto jitter = [&](double v) { return v * uniform(rng, 0.9, 1.1); };
  VectorXd a(n), b(n), f(n);
  a.head(2) << jitter(1.0), jitter(2.0);
  b.head(2) << jitter(5.0), jitter(4.0);
  f.head(2) << jitter(0.5), jitter(0.1);
  for (int i = 2; i < n; ++i) {
    a[i] = uniform(rng, 1.0, 3.0);
    b[i] = a[i] * uniform(rng, 2.6, 4.0);  // pole -a/b inside (-0.39, -0.25)
    f[i] = uniform(rng, -0.1, 0.1);
  }
  MatrixXd g(n, n);
  std::normal_distribution<double> normal;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
  auto rotate = [&](const VectorXd& diag) {
    const MatrixXd s = q * diag.asDiagonal() * q.transpose();
    return MatrixXd(0.5 * (s + s.transpose()));
  };
  return CanonicalProblem::create(rotate(a), {rotate(b)}, {VectorXd::Zero(n)}, q * f,
                                  std::make_shared<LogBarrierFamily>(
                                      VectorXd::Constant(1, jitter(1.0))));
}

CanonicalProblem random_log_problem(Rng& rng, int n, int m) {
  const MatrixXd a = random_symmetric(rng, n, 0.5, 2.0);
  std::vector<MatrixXd> bm;
  std::vector<VectorXd> bv;
  for (int k = 0; k < m; ++k) {
    bm.push_back(random_symmetric(rng, n, 1.0, 6.0));
    bv.push_back(VectorXd::Zero(n));
  }
  const VectorXd f = random_vector(rng, n, -1.0, 1.0);
  const VectorXd d = random_vector(rng, m, 0.5, 2.0);
  return CanonicalProblem::create(a, bm, bv, f, std::make_shared<LogBarrierFamily>(d));
}

CanonicalProblem random_well_problem(Rng& rng, int n, int m) {
  const MatrixXd a = random_symmetric(rng, n, -1.0, 2.0);
  std::vector<MatrixXd> bm;
  std::vector<VectorXd> bv;
  for (int k = 0; k < m; ++k) {
    bm.push_back(random_symmetric(rng, n, 1.0, 5.0));
    bv.push_back(random_vector(rng, n, -0.3, 0.3));
  }
  const VectorXd f = random_vector(rng, n, -1.0, 1.0);
  const VectorXd alpha = random_vector(rng, m, 0.5, 2.0);
  const VectorXd lam = random_vector(rng, m, 0.5, 2.0);
  return CanonicalProblem::create(a, bm, bv, f,
                                  std::make_shared<QuadraticWellFamily>(alpha, lam));
}

namespace {

using Poly = std::vector<long double>;  // coefficients, highest degree first

Poly trim(Poly p) {
  while (p.size() > 1 && p.front() == 0.0L) p.erase(p.begin());
  return p;
}

Poly derivative(const Poly& p) {
  Poly d;
  const auto deg = static_cast<long>(p.size()) - 1;
  for (long i = 0; i < deg; ++i) d.push_back(p[i] * static_cast<long double>(deg - i));
  return d.empty() ? Poly{0.0L} : d;
}

// Remainder of a / b.
Poly remainder(Poly a, const Poly& b) {
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0.0L)) {
    const long double q = a[0] / b[0];
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= q * b[i];
    a.erase(a.begin());
    if (a.empty()) return {0.0L};
  }
  return a;
}

long double eval(const Poly& p, long double x) {
  long double v = 0.0L;
  for (long double c : p) v = v * x + c;
  return v;
}

int sign_changes(const std::vector<long double>& values) {
  int changes = 0;
  int last = 0;
  for (long double v : values) {
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Distinct real roots of p in (lo, hi] by Sturm's theorem. Random matrices
// have simple spectra almost surely, so this equals the eigenvalue count.
int roots_in(const Poly& p, long double lo, long double hi) {
  std::vector<Poly> seq{p, derivative(p)};
  const long double scale = [&] {
    long double s = 0.0L;
    for (long double c : p) s = std::max(s, std::fabs(c));
    return s;
  }();
  while (true) {
    Poly r = remainder(seq[seq.size() - 2], seq.back());
    for (auto& c : r) {
      c = -c;
      if (std::fabs(c) < 1e-16L * scale) c = 0.0L;
    }
    r = trim(r);
    if (r.size() == 1 && r[0] == 0.0L) break;
    seq.push_back(r);
    if (r.size() == 1) break;
  }
  auto at = [&](long double x) {
    std::vector<long double> v;
    for (const auto& q : seq) v.push_back(eval(q, x));
    return sign_changes(v);
  };
  return at(lo) - at(hi);
}

}  // namespace

SturmInertia sturm_inertia(const MatrixXd& m, double zero_tol) {
  const auto n = static_cast<int>(m.rows());
  // Faddeev-LeVerrier: det(tI - M) = t^n + c_1 t^{n-1} + ... + c_n.
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatL ml = m.cast<long double>();
  MatL mk = MatL::Zero(n, n);
  Poly coeffs{1.0L};
  long double c = 1.0L;
  for (int k = 1; k <= n; ++k) {
    mk = ml * mk + c * MatL::Identity(n, n);
    c = -(ml * mk).trace() / static_cast<long double>(k);
    coeffs.push_back(c);
  }
  // Eigenvalues with |lambda| <= zero_tol count as zero.
  const long double bound = 1.0L + [&] {
    long double s = 0.0L;
    for (long double v : coeffs) s = std::max(s, std::fabs(v));
    return s;
  }();
  SturmInertia out;
  out.pos = roots_in(coeffs, zero_tol, bound);
  out.neg = roots_in(coeffs, -bound, -zero_tol);
  out.zero = n - out.pos - out.neg;
  return out;
}

}  // namespace canondual::testing
