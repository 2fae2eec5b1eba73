#include "canondual/canondual.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "canondual/report.hpp"

struct cd_problem {
  canondual::CanonicalProblem problem;
  canondual::SearchConfig search;
  std::string digest;
};

struct cd_report {
  canondual::SolveReport report;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_field;

cd_status to_status(canondual::Errc code) {
  using canondual::Errc;
  switch (code) {
    case Errc::kInvalidArgument: return CD_ERR_INVALID_ARGUMENT;
    case Errc::kDimensionMismatch: return CD_ERR_DIMENSION;
    case Errc::kDomainError: return CD_ERR_DOMAIN;
    case Errc::kConsistencyError: return CD_ERR_CONSISTENCY;
    case Errc::kSingularG: return CD_ERR_SINGULAR_G;
    case Errc::kSingularHessian: return CD_ERR_SINGULAR_HESSIAN;
    case Errc::kDegenerateSpectrum: return CD_ERR_DEGENERATE_SPECTRUM;
    case Errc::kAllInfeasible: return CD_ERR_ALL_INFEASIBLE;
    case Errc::kBoxTooCoarse: return CD_ERR_BOX_TOO_COARSE;
    case Errc::kSchemaError: return CD_ERR_SCHEMA;
  }
  return CD_ERR_INTERNAL;
}

cd_status set_error(cd_status status, const std::string& msg, const std::string& field = {}) {
  g_last_error = msg;
  g_last_field = field;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
cd_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    g_last_field.clear();
    return fn();
  } catch (const canondual::SchemaError& e) {
    return set_error(CD_ERR_SCHEMA, e.what(), e.field());
  } catch (const canondual::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CD_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(CD_ERR_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

canondual::CanonicalProblem build(int n, int m, const double* a, const double* b_mats,
                                  const double* b_vecs, const double* f,
                                  std::shared_ptr<const canondual::CanonicalFunction> v) {
  using canondual::MatrixXd;
  using canondual::VectorXd;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  MatrixXd am = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                               Eigen::RowMajor>>(a, n, n);
  std::vector<MatrixXd> bm;
  std::vector<VectorXd> bv;
  for (int k = 0; k < m; ++k) {
    bm.emplace_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                   Eigen::RowMajor>>(b_mats + k * nn, n, n));
    bv.emplace_back(Eigen::Map<const VectorXd>(b_vecs + static_cast<std::size_t>(k) * n, n));
  }
  return canondual::CanonicalProblem::create(std::move(am), std::move(bm), std::move(bv),
                                             Eigen::Map<const VectorXd>(f, n), std::move(v));
}

bool dims_ok(int n, int m) { return n >= 1 && m >= 1; }

const canondual::ClassifiedPair* pair_at(const cd_report* report, std::size_t index) {
  if (report == nullptr || index >= report->report.pairs.size()) return nullptr;
  return &report->report.pairs[index];
}

}  // namespace

extern "C" {

const char* cd_version(void) { return "0.1.0"; }

const char* cd_status_name(cd_status status) {
  switch (status) {
    case CD_OK: return "OK";
    case CD_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case CD_ERR_DIMENSION: return "DimensionMismatch";
    case CD_ERR_DOMAIN: return "DomainError";
    case CD_ERR_CONSISTENCY: return "ConsistencyError";
    case CD_ERR_SINGULAR_G: return "SingularG";
    case CD_ERR_SINGULAR_HESSIAN: return "SingularHessian";
    case CD_ERR_DEGENERATE_SPECTRUM: return "DegenerateSpectrum";
    case CD_ERR_ALL_INFEASIBLE: return "AllInfeasible";
    case CD_ERR_BOX_TOO_COARSE: return "BoxTooCoarse";
    case CD_ERR_SCHEMA: return "SchemaError";
    case CD_ERR_NULL_POINTER: return "NullPointer";
    case CD_ERR_OUT_OF_RANGE: return "OutOfRange";
    case CD_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* cd_verdict_name(cd_verdict verdict) {
  if (verdict < CD_VERDICT_GLOBAL_MIN || verdict > CD_VERDICT_DEGENERATE) return "Unknown";
  return canondual::verdict_name(static_cast<canondual::VerdictTag>(verdict)).data();
}

const char* cd_region_name(cd_region region) {
  if (region < CD_REGION_SA_PLUS_INTERIOR || region > CD_REGION_OUTSIDE_SA) return "Unknown";
  return canondual::region_name(static_cast<canondual::RegionTag>(region)).data();
}

const char* cd_last_error(void) { return g_last_error.c_str(); }

const char* cd_last_error_field(void) { return g_last_field.c_str(); }

void cd_options_init(cd_options* opts) {
  if (opts == nullptr) return;
  opts->starts = 0;
  opts->max_iter = -1;
  opts->tol_newton = 0.0;
  opts->dedup_radius = -1.0;
  opts->box = nullptr;
  opts->box_len = 0;
  opts->verify = 1;
  opts->probe_samples = 512;
  opts->timing = 1;
  opts->include_indefinite = -1;
}

cd_status cd_problem_from_json(const char* text, cd_problem** out) {
  return guarded([&] {
    if (text == nullptr || out == nullptr) return set_error(CD_ERR_NULL_POINTER, "null argument");
    *out = nullptr;
    canondual::ProblemDocument doc = canondual::parse_problem_document(std::string_view(text));
    *out = new cd_problem{std::move(doc.problem), std::move(doc.search), std::move(doc.digest)};
    return CD_OK;
  });
}

cd_status cd_problem_create_log(int n, int m, const double* A, const double* B, const double* b,
                                const double* f, const double* d, cd_problem** out) {
  return guarded([&] {
    if (!A || !B || !b || !f || !d || !out) return set_error(CD_ERR_NULL_POINTER, "null argument");
    *out = nullptr;
    if (!dims_ok(n, m)) return set_error(CD_ERR_INVALID_ARGUMENT, "n and m must be >= 1");
    auto fam = std::make_shared<canondual::LogBarrierFamily>(
        Eigen::Map<const canondual::VectorXd>(d, m));
    auto prob = build(n, m, A, B, b, f, std::move(fam));
    const std::string digest =
        canondual::fnv1a64_digest(canondual::problem_to_json(prob).dump());
    *out = new cd_problem{std::move(prob), {}, digest};
    return CD_OK;
  });
}

cd_status cd_problem_create_quadratic_well(int n, int m, const double* A, const double* B,
                                           const double* b, const double* f,
                                           const double* alpha, const double* lambda,
                                           cd_problem** out) {
  return guarded([&] {
    if (!A || !B || !b || !f || !alpha || !lambda || !out) {
      return set_error(CD_ERR_NULL_POINTER, "null argument");
    }
    *out = nullptr;
    if (!dims_ok(n, m)) return set_error(CD_ERR_INVALID_ARGUMENT, "n and m must be >= 1");
    auto fam = std::make_shared<canondual::QuadraticWellFamily>(
        Eigen::Map<const canondual::VectorXd>(alpha, m),
        Eigen::Map<const canondual::VectorXd>(lambda, m));
    auto prob = build(n, m, A, B, b, f, std::move(fam));
    const std::string digest =
        canondual::fnv1a64_digest(canondual::problem_to_json(prob).dump());
    *out = new cd_problem{std::move(prob), {}, digest};
    return CD_OK;
  });
}

void cd_problem_free(cd_problem* problem) { delete problem; }

int cd_problem_n(const cd_problem* problem) {
  return problem ? static_cast<int>(problem->problem.n()) : 0;
}

int cd_problem_m(const cd_problem* problem) {
  return problem ? static_cast<int>(problem->problem.m()) : 0;
}

cd_status cd_primal_value(const cd_problem* problem, const double* x, double* out) {
  return guarded([&] {
    if (!problem || !x || !out) return set_error(CD_ERR_NULL_POINTER, "null argument");
    const auto& p = problem->problem;
    *out = canondual::primal_value(p, Eigen::Map<const canondual::VectorXd>(x, p.n()));
    return CD_OK;
  });
}

cd_status cd_dual_value(const cd_problem* problem, const double* sigma, double* out) {
  return guarded([&] {
    if (!problem || !sigma || !out) return set_error(CD_ERR_NULL_POINTER, "null argument");
    const auto& p = problem->problem;
    *out = canondual::dual_value(p, Eigen::Map<const canondual::VectorXd>(sigma, p.m()));
    return CD_OK;
  });
}

cd_status cd_solve(const cd_problem* problem, const cd_options* opts, cd_report** out) {
  return guarded([&] {
    if (!problem || !out) return set_error(CD_ERR_NULL_POINTER, "null argument");
    *out = nullptr;
    cd_options o;
    cd_options_init(&o);
    if (opts != nullptr) o = *opts;

    canondual::SearchConfig cfg = problem->search;
    if (o.starts > 0) cfg.starts = o.starts;
    if (o.max_iter >= 0) cfg.max_iter = o.max_iter;
    if (o.tol_newton > 0.0) cfg.tol_newton = o.tol_newton;
    if (o.dedup_radius >= 0.0) cfg.dedup_radius = o.dedup_radius;
    if (o.include_indefinite >= 0) cfg.include_indefinite = o.include_indefinite != 0;
    if (o.box != nullptr) {
      const auto m = static_cast<std::size_t>(problem->problem.m());
      if (o.box_len != 2 * m) {
        return set_error(CD_ERR_DIMENSION,
                         "box needs " + std::to_string(2 * m) + " values (lo, hi per coordinate)");
      }
      cfg.box.clear();
      for (std::size_t k = 0; k < m; ++k) cfg.box.emplace_back(o.box[2 * k], o.box[2 * k + 1]);
    }
    canondual::RunOptions run;
    run.verify = o.verify != 0;
    run.timing = o.timing != 0;
    if (o.probe_samples < 1) return set_error(CD_ERR_INVALID_ARGUMENT, "probe_samples must be >= 1");
    run.probe_samples = o.probe_samples;

    auto rep = std::make_unique<cd_report>();
    rep->report = canondual::solve(problem->problem, cfg, run, problem->digest);
    *out = rep.release();
    return CD_OK;
  });
}

void cd_report_free(cd_report* report) { delete report; }

size_t cd_report_pair_count(const cd_report* report) {
  return report ? report->report.pairs.size() : 0;
}

unsigned cd_report_flags(const cd_report* report) {
  if (report == nullptr) return 0;
  const auto& r = report->report;
  unsigned flags = 0;
  if (r.no_critical_point) flags |= CD_FLAG_NO_CRITICAL_POINT;
  if (r.no_critical_point_in_sa_plus) flags |= CD_FLAG_NO_CRITICAL_POINT_IN_SA_PLUS;
  if (r.degenerate_pairs > 0) flags |= CD_FLAG_DEGENERATE_PAIRS;
  if (r.verification_failed) flags |= CD_FLAG_VERIFICATION_FAILED;
  return flags;
}

cd_status cd_report_pair(const cd_report* report, size_t index, cd_pair_info* out) {
  return guarded([&] {
    if (!report || !out) return set_error(CD_ERR_NULL_POINTER, "null argument");
    const auto* cp = pair_at(report, index);
    if (cp == nullptr) return set_error(CD_ERR_OUT_OF_RANGE, "pair index out of range");
    const auto& c = cp->pair;
    out->primal_value = c.primal_value;
    out->dual_value = c.dual_value;
    out->xi_value = c.xi_value;
    out->gap_value = c.gap_value;
    out->grad_primal_norm = c.grad_primal_norm;
    out->grad_dual_norm = c.grad_dual_norm;
    out->region = static_cast<cd_region>(c.region.tag);
    out->verdict = static_cast<cd_verdict>(cp->verdict.tag);
    out->converged = c.converged ? 1 : 0;
    out->iterations = c.iterations;
    out->generalized_inverse = c.generalized ? 1 : 0;
    out->corroborated = !cp->evidence ? -1 : (cp->evidence->corroborated() ? 1 : 0);
    return CD_OK;
  });
}

namespace {

cd_status copy_vector(const canondual::VectorXd& v, double* buf, size_t len) {
  if (buf == nullptr) return set_error(CD_ERR_NULL_POINTER, "null buffer");
  if (len < static_cast<size_t>(v.size())) {
    return set_error(CD_ERR_DIMENSION, "buffer needs " + std::to_string(v.size()) + " values");
  }
  std::memcpy(buf, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
  return CD_OK;
}

}  // namespace

cd_status cd_report_pair_sigma(const cd_report* report, size_t index, double* buf, size_t len) {
  return guarded([&] {
    const auto* cp = pair_at(report, index);
    if (cp == nullptr) return set_error(CD_ERR_OUT_OF_RANGE, "pair index out of range");
    return copy_vector(cp->pair.sigma, buf, len);
  });
}

cd_status cd_report_pair_x(const cd_report* report, size_t index, double* buf, size_t len) {
  return guarded([&] {
    const auto* cp = pair_at(report, index);
    if (cp == nullptr) return set_error(CD_ERR_OUT_OF_RANGE, "pair index out of range");
    return copy_vector(cp->pair.x, buf, len);
  });
}

cd_status cd_report_to_json(const cd_report* report, int indent, char** out) {
  return guarded([&] {
    if (!report || !out) return set_error(CD_ERR_NULL_POINTER, "null argument");
    *out = dup_string(canondual::report_to_json(report->report).dump(indent < 0 ? -1 : indent));
    return CD_OK;
  });
}

cd_status cd_report_summary(const cd_report* report, char** out) {
  return guarded([&] {
    if (!report || !out) return set_error(CD_ERR_NULL_POINTER, "null argument");
    *out = dup_string(canondual::format_summary(report->report));
    return CD_OK;
  });
}

void cd_string_free(char* str) { std::free(str); }

}  // extern "C"
