#include "canondual/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace canondual {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Document parsing

[[noreturn]] void fail(const std::string& field, const std::string& detail) {
  throw SchemaError(field, detail);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing required field");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& field, int min_value) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < min_value || v > std::numeric_limits<int>::max()) {
    fail(field, "expected an integer >= " + std::to_string(min_value));
  }
  return static_cast<int>(v);
}

VectorXd numbers(const json& j, const std::string& field, Eigen::Index expected) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  if (static_cast<Eigen::Index>(j.size()) != expected) {
    fail(field, "expected " + std::to_string(expected) + " numbers, got " +
                    std::to_string(j.size()));
  }
  VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    v[i] = number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

const json& blocks(const json& j, const std::string& field, int m) {
  if (!j.is_array()) fail(field, "expected an array of " + std::to_string(m) + " blocks");
  if (static_cast<int>(j.size()) != m) {
    fail(field, "expected " + std::to_string(m) + " blocks (m), got " + std::to_string(j.size()));
  }
  return j;
}

MatrixXd square_matrix(const json& j, const std::string& field, int n) {
  const VectorXd flat = numbers(j, field, static_cast<Eigen::Index>(n) * n);
  MatrixXd out(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out(r, c) = flat[r * n + c];
  }
  try {
    return symmetrize_checked(out, field);
  } catch (const Error& e) {
    fail(field, e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& prefix) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.contains(it.key())) fail(prefix + it.key(), "unknown field");
  }
}

SearchConfig parse_search(const json& j, int m) {
  if (!j.is_object()) fail("search", "expected an object");
  reject_unknown(j, {"starts", "box", "tolNewton", "maxIter", "dedupRadius", "includeIndefinite"},
                 "search.");
  SearchConfig cfg;
  if (j.contains("starts")) cfg.starts = integer(j["starts"], "search.starts", 1);
  if (j.contains("maxIter")) cfg.max_iter = integer(j["maxIter"], "search.maxIter", 0);
  if (j.contains("tolNewton")) {
    cfg.tol_newton = number(j["tolNewton"], "search.tolNewton");
    if (!(cfg.tol_newton > 0.0)) fail("search.tolNewton", "must be positive");
  }
  if (j.contains("dedupRadius")) {
    cfg.dedup_radius = number(j["dedupRadius"], "search.dedupRadius");
    if (cfg.dedup_radius < 0.0) fail("search.dedupRadius", "must be non-negative");
  }
  if (j.contains("includeIndefinite")) {
    if (!j["includeIndefinite"].is_boolean()) fail("search.includeIndefinite", "expected a boolean");
    cfg.include_indefinite = j["includeIndefinite"].get<bool>();
  }
  if (j.contains("box")) {
    const json& box = blocks(j["box"], "search.box", m);
    for (int k = 0; k < m; ++k) {
      const std::string field = "search.box[" + std::to_string(k) + "]";
      const VectorXd iv = numbers(box[k], field, 2);
      if (iv[0] > iv[1]) fail(field, "lower bound exceeds upper bound");
      cfg.box.emplace_back(iv[0], iv[1]);
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Report serialization helpers

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json vec(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

VectorXd vec_from(const json& j) {
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = num_from(j[i]);
  return v;
}

json columns_json(const MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(vec(m.col(c)));
  return a;
}

MatrixXd columns_from(const json& j, Eigen::Index rows) {
  MatrixXd m(rows, static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = vec_from(j[c]);
  return m;
}

json inertia_json(const Inertia& in) {
  return {{"pos", in.pos}, {"neg", in.neg}, {"zero", in.zero}, {"tol", num(in.tol)}};
}

Inertia inertia_from(const json& j) {
  Inertia in;
  in.pos = j.at("pos").get<int>();
  in.neg = j.at("neg").get<int>();
  in.zero = j.at("zero").get<int>();
  in.tol = num_from(j.at("tol"));
  return in;
}

json probe_json(const ProbeReport& r) {
  return {{"center", vec(r.center)},       {"radius", num(r.radius)},
          {"samples", r.samples},          {"infeasible", r.infeasible},
          {"minDelta", num(r.min_delta)},  {"maxDelta", num(r.max_delta)},
          {"evidence", evidence_name(r.evidence)}};
}

ProbeReport probe_from(const json& j) {
  ProbeReport r;
  r.center = vec_from(j.at("center"));
  r.radius = num_from(j.at("radius"));
  r.samples = j.at("samples").get<int>();
  r.infeasible = j.at("infeasible").get<int>();
  r.min_delta = num_from(j.at("minDelta"));
  r.max_delta = num_from(j.at("maxDelta"));
  r.evidence = evidence_from_name(j.at("evidence").get<std::string>());
  return r;
}

json fd_json(const FdReport& r) {
  return {{"gradErr", num(r.grad_err)}, {"hessErr", num(r.hess_err)}};
}

FdReport fd_from(const json& j) {
  return {num_from(j.at("gradErr")), num_from(j.at("hessErr"))};
}

json pair_json(const CriticalPair& c) {
  return {{"sigma", vec(c.sigma)},
          {"x", vec(c.x)},
          {"primalValue", num(c.primal_value)},
          {"dualValue", num(c.dual_value)},
          {"xiValue", num(c.xi_value)},
          {"gapValue", num(c.gap_value)},
          {"dualityGapResidual", num(std::abs(c.primal_value - c.dual_value))},
          {"gradPrimalNorm", num(c.grad_primal_norm)},
          {"gradDualNorm", num(c.grad_dual_norm)},
          {"region",
           {{"tag", region_name(c.region.tag)},
            {"minEig", num(c.region.min_eig)},
            {"maxEig", num(c.region.max_eig)},
            {"colSpaceResidual", num(c.region.col_space_residual)}}},
          {"generalizedInverse", c.generalized},
          {"converged", c.converged},
          {"iterations", c.iterations}};
}

CriticalPair pair_from(const json& j) {
  CriticalPair c;
  c.sigma = vec_from(j.at("sigma"));
  c.x = vec_from(j.at("x"));
  c.primal_value = num_from(j.at("primalValue"));
  c.dual_value = num_from(j.at("dualValue"));
  c.xi_value = num_from(j.at("xiValue"));
  c.gap_value = num_from(j.at("gapValue"));
  c.grad_primal_norm = num_from(j.at("gradPrimalNorm"));
  c.grad_dual_norm = num_from(j.at("gradDualNorm"));
  const json& r = j.at("region");
  c.region.tag = region_from_name(r.at("tag").get<std::string>());
  c.region.min_eig = num_from(r.at("minEig"));
  c.region.max_eig = num_from(r.at("maxEig"));
  c.region.col_space_residual = num_from(r.at("colSpaceResidual"));
  c.generalized = j.at("generalizedInverse").get<bool>();
  c.converged = j.at("converged").get<bool>();
  c.iterations = j.at("iterations").get<int>();
  return c;
}

json basis_json(const SubspaceBasis& b) {
  return {{"kind", subspace_name(b.kind)}, {"dimension", b.dimension()},
          {"columns", columns_json(b.columns)}};
}

SubspaceBasis basis_from(const json& j, Eigen::Index rows) {
  SubspaceBasis b;
  const auto name = j.at("kind").get<std::string>();
  for (SubspaceKind k : {SubspaceKind::kPrimalFlat, SubspaceKind::kPrimalSharp,
                         SubspaceKind::kDualFlat, SubspaceKind::kDualSharp}) {
    if (subspace_name(k) == name) b.kind = k;
  }
  b.columns = columns_from(j.at("columns"), rows);
  return b;
}

json verdict_json(const TrialityVerdict& v) {
  json j = {{"tag", verdict_name(v.tag)},
            {"rule", v.rule},
            {"inertiaBalance", v.inertia_balance},
            {"boundaryCaveat", v.boundary_caveat}};
  j["primalInertia"] = v.primal_inertia ? inertia_json(*v.primal_inertia) : json(nullptr);
  j["dualInertia"] = v.dual_inertia ? inertia_json(*v.dual_inertia) : json(nullptr);
  j["smwResidual"] = v.smw_residual ? num(*v.smw_residual) : json(nullptr);
  if (v.bases) {
    j["bases"] = {{"flat", basis_json(v.bases->flat)}, {"sharp", basis_json(v.bases->sharp)}};
  } else {
    j["bases"] = nullptr;
  }
  return j;
}

TrialityVerdict verdict_from(const json& j, Eigen::Index n, Eigen::Index m) {
  TrialityVerdict v;
  v.tag = verdict_from_name(j.at("tag").get<std::string>());
  v.rule = j.at("rule").get<std::string>();
  v.inertia_balance = j.at("inertiaBalance").get<bool>();
  v.boundary_caveat = j.at("boundaryCaveat").get<bool>();
  if (!j.at("primalInertia").is_null()) v.primal_inertia = inertia_from(j["primalInertia"]);
  if (!j.at("dualInertia").is_null()) v.dual_inertia = inertia_from(j["dualInertia"]);
  if (!j.at("smwResidual").is_null()) v.smw_residual = num_from(j["smwResidual"]);
  if (!j.at("bases").is_null()) {
    const json& b = j["bases"];
    const auto kind = b.at("flat").at("kind").get<std::string>();
    const Eigen::Index rows = kind.rfind("Primal", 0) == 0 ? n : m;
    v.bases = FlatSharpBases{basis_from(b.at("flat"), rows), basis_from(b.at("sharp"), rows)};
  }
  return v;
}

json evidence_json(const PairEvidence& e) {
  json j = json::object();
  j["fdPrimal"] = e.fd_primal ? fd_json(*e.fd_primal) : json(nullptr);
  j["fdDual"] = e.fd_dual ? fd_json(*e.fd_dual) : json(nullptr);
  j["probeFull"] = e.full ? probe_json(*e.full) : json(nullptr);
  j["probeFlat"] = e.flat ? probe_json(*e.flat) : json(nullptr);
  j["probeSharp"] = e.sharp ? probe_json(*e.sharp) : json(nullptr);
  if (e.grid) {
    j["grid"] = {{"status", e.grid->status},
                 {"x", vec(e.grid->x)},
                 {"value", num(e.grid->value)},
                 {"xDistance", num(e.grid->x_distance)},
                 {"agrees", e.grid->agrees}};
  } else {
    j["grid"] = nullptr;
  }
  j["disagreements"] = e.disagreements;
  j["corroborated"] = e.corroborated();
  return j;
}

PairEvidence evidence_from(const json& j) {
  PairEvidence e;
  if (!j.at("fdPrimal").is_null()) e.fd_primal = fd_from(j["fdPrimal"]);
  if (!j.at("fdDual").is_null()) e.fd_dual = fd_from(j["fdDual"]);
  if (!j.at("probeFull").is_null()) e.full = probe_from(j["probeFull"]);
  if (!j.at("probeFlat").is_null()) e.flat = probe_from(j["probeFlat"]);
  if (!j.at("probeSharp").is_null()) e.sharp = probe_from(j["probeSharp"]);
  if (!j.at("grid").is_null()) {
    const json& g = j["grid"];
    GridCheck gc;
    gc.status = g.at("status").get<std::string>();
    gc.x = vec_from(g.at("x"));
    gc.value = num_from(g.at("value"));
    gc.x_distance = num_from(g.at("xDistance"));
    gc.agrees = g.at("agrees").get<bool>();
    e.grid = gc;
  }
  e.disagreements = j.at("disagreements").get<std::vector<std::string>>();
  return e;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

std::string fnv1a64_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

ProblemDocument parse_problem_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem_document(doc);
}

ProblemDocument parse_problem_document(const json& doc) {
  if (!doc.is_object()) fail("$", "expected a JSON object");
  reject_unknown(doc, {"schemaVersion", "n", "m", "A", "B", "b", "f", "family", "search"}, "");

  const int version = integer(member(doc, "schemaVersion", "schemaVersion"), "schemaVersion", 0);
  if (version != kSchemaVersion) {
    fail("schemaVersion", "unsupported version " + std::to_string(version) + " (expected " +
                              std::to_string(kSchemaVersion) + ")");
  }
  const int n = integer(member(doc, "n", "n"), "n", 1);
  const int m = integer(member(doc, "m", "m"), "m", 1);

  MatrixXd a = square_matrix(member(doc, "A", "A"), "A", n);
  const json& bm = blocks(member(doc, "B", "B"), "B", m);
  const json& bv = blocks(member(doc, "b", "b"), "b", m);
  std::vector<MatrixXd> b_mats;
  std::vector<VectorXd> b_vecs;
  for (int k = 0; k < m; ++k) {
    b_mats.push_back(square_matrix(bm[k], "B[" + std::to_string(k) + "]", n));
    b_vecs.push_back(numbers(bv[k], "b[" + std::to_string(k) + "]", n));
  }
  VectorXd f = numbers(member(doc, "f", "f"), "f", n);

  const json& fam = member(doc, "family", "family");
  if (!fam.is_object()) fail("family", "expected an object");
  const json& kind_j = member(fam, "kind", "family.kind");
  if (!kind_j.is_string()) fail("family.kind", "expected a string");
  const auto kind = kind_j.get<std::string>();
  std::shared_ptr<const CanonicalFunction> v;
  if (kind == "log") {
    reject_unknown(fam, {"kind", "d"}, "family.");
    VectorXd d = numbers(member(fam, "d", "family.d"), "family.d", m);
    for (int k = 0; k < m; ++k) {
      if (!(d[k] > 0.0)) fail("family.d[" + std::to_string(k) + "]", "must be positive");
    }
    v = std::make_shared<LogBarrierFamily>(std::move(d));
  } else if (kind == "quadratic-well") {
    reject_unknown(fam, {"kind", "alpha", "lambda"}, "family.");
    VectorXd alpha = numbers(member(fam, "alpha", "family.alpha"), "family.alpha", m);
    for (int k = 0; k < m; ++k) {
      if (!(alpha[k] > 0.0)) fail("family.alpha[" + std::to_string(k) + "]", "must be positive");
    }
    VectorXd lam = numbers(member(fam, "lambda", "family.lambda"), "family.lambda", m);
    v = std::make_shared<QuadraticWellFamily>(std::move(alpha), std::move(lam));
  } else {
    fail("family.kind", "expected \"log\" or \"quadratic-well\", got \"" + kind + "\"");
  }

  SearchConfig search;
  if (doc.contains("search")) search = parse_search(doc["search"], m);

  CanonicalProblem problem = CanonicalProblem::create(std::move(a), std::move(b_mats),
                                                      std::move(b_vecs), std::move(f), v);
  try {
    validate(problem, search);
  } catch (const Error& e) {
    fail("search", e.what());
  }
  return ProblemDocument{version, std::move(problem), std::move(search),
                         fnv1a64_digest(doc.dump())};
}

json problem_to_json(const CanonicalProblem& p, const SearchConfig* search) {
  const auto n = p.n();
  auto flat = [](const MatrixXd& mat) {
    json a = json::array();
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) a.push_back(mat(r, c));
    }
    return a;
  };
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["n"] = n;
  j["m"] = p.m();
  j["A"] = flat(p.a());
  j["B"] = json::array();
  j["b"] = json::array();
  for (Eigen::Index k = 0; k < p.m(); ++k) {
    j["B"].push_back(flat(p.b_mat(k)));
    j["b"].push_back(vec(p.b_vec(k)));
  }
  j["f"] = vec(p.f());
  if (const auto* log = dynamic_cast<const LogBarrierFamily*>(&p.v())) {
    j["family"] = {{"kind", "log"}, {"d", vec(log->d())}};
  } else if (const auto* well = dynamic_cast<const QuadraticWellFamily*>(&p.v())) {
    j["family"] = {{"kind", "quadratic-well"},
                   {"alpha", vec(well->alpha())},
                   {"lambda", vec(well->lambda())}};
  } else {
    throw Error(Errc::kInvalidArgument, "only built-in families can be serialized");
  }
  if (search != nullptr) {
    json s = {{"starts", search->starts},
              {"tolNewton", search->tol_newton},
              {"maxIter", search->max_iter},
              {"dedupRadius", search->dedup_radius},
              {"includeIndefinite", search->include_indefinite}};
    if (!search->box.empty()) {
      s["box"] = json::array();
      for (const auto& [lo, hi] : search->box) s["box"].push_back({lo, hi});
    }
    j["search"] = s;
  }
  return j;
}

PairEvidence verify_pair(const CanonicalProblem& p, const CriticalPair& pair,
                         const TrialityVerdict& verdict, const RunOptions& opts) {
  PairEvidence e;
  auto disagree = [&](std::string msg) { e.disagreements.push_back(std::move(msg)); };
  constexpr double kFdTol = 1e-5;

  try {
    e.fd_primal = fd_check_primal(p, pair.x);
    if (e.fd_primal->grad_err > kFdTol || e.fd_primal->hess_err > kFdTol) {
      disagree("finite differences disagree with the primal derivatives");
    }
  } catch (const Error& err) {
    disagree(std::string("primal finite-difference check failed: ") + err.what());
  }
  if (!pair.generalized) {
    try {
      e.fd_dual = fd_check_dual(p, pair.sigma);
      if (e.fd_dual->grad_err > kFdTol || e.fd_dual->hess_err > kFdTol) {
        disagree("finite differences disagree with the dual derivatives");
      }
    } catch (const Error& err) {
      disagree(std::string("dual finite-difference check failed: ") + err.what());
    }
  }

  ProbeOptions po;
  po.samples = opts.probe_samples;
  auto run_probe = [&](const SubspaceBasis* basis, const char* what) -> std::optional<ProbeReport> {
    try {
      return probe(p, pair.x, po, basis);
    } catch (const Error& err) {
      disagree(std::string(what) + " probe failed: " + err.what());
      return std::nullopt;
    }
  };
  auto expect = [&](const std::optional<ProbeReport>& r, ProbeEvidence want, const char* what) {
    if (r && r->evidence != want) {
      disagree(std::string(what) + " probe reports " + std::string(evidence_name(r->evidence)) +
               ", expected " + std::string(evidence_name(want)));
    }
  };

  e.full = run_probe(nullptr, "full-space");
  switch (verdict.tag) {
    case VerdictTag::kGlobalMin:
      if (!verdict.boundary_caveat) expect(e.full, ProbeEvidence::kLooksMin, "full-space");
      break;
    case VerdictTag::kDoubleMax:
      expect(e.full, ProbeEvidence::kLooksMax, "full-space");
      break;
    case VerdictTag::kDoubleMinStrong:
    case VerdictTag::kSaddleDualWeak:
      expect(e.full, ProbeEvidence::kLooksMin, "full-space");
      break;
    case VerdictTag::kDoubleMinWeak:
      expect(e.full, ProbeEvidence::kLooksSaddle, "full-space");
      if (verdict.bases) {
        e.flat = run_probe(&verdict.bases->flat, "flat-subspace");
        e.sharp = run_probe(&verdict.bases->sharp, "sharp-subspace");
        expect(e.flat, ProbeEvidence::kLooksMin, "flat-subspace");
        expect(e.sharp, ProbeEvidence::kLooksMax, "sharp-subspace");
      } else {
        disagree("weak double-min verdict without flat/sharp bases");
      }
      break;
    default:
      break;
  }

  if (verdict.tag == VerdictTag::kGlobalMin && p.n() <= 3) {
    const double half = std::max(3.0, 2.0 * pair.x.cwiseAbs().maxCoeff() + 1.0);
    const std::vector<Interval> box(static_cast<std::size_t>(p.n()), Interval{-half, half});
    GridCheck gc;
    try {
      const GridResult g = grid_global_min(p, box, opts.grid_points[p.n() - 1]);
      gc.status = "ok";
      gc.x = g.x;
      gc.value = g.value;
      gc.x_distance = (g.x - pair.x).cwiseAbs().maxCoeff();
      gc.agrees = g.value >= pair.primal_value - 1e-8 * (1.0 + std::abs(pair.primal_value));
      if (!gc.agrees) {
        std::ostringstream os;
        os << std::setprecision(17) << "grid search found Pi = " << g.value
           << " below the certified global minimum " << pair.primal_value;
        disagree(os.str());
      }
    } catch (const Error& err) {
      if (err.code() != Errc::kBoxTooCoarse) throw;
      gc.status = "BoxTooCoarse";
    }
    e.grid = gc;
  }
  return e;
}

SolveReport solve(const CanonicalProblem& p, const SearchConfig& cfg, const RunOptions& opts,
                  std::string digest) {
  using Clock = std::chrono::steady_clock;
  SolveReport rep;
  rep.input_digest = std::move(digest);
  rep.n = static_cast<int>(p.n());
  rep.m = static_cast<int>(p.m());
  rep.verified = opts.verify;
  Timings t;

  auto start = Clock::now();
  const CriticalSet set = find_critical_points(p, cfg);
  t.solve_ms = elapsed_ms(start);
  rep.starts_used = set.starts_used;
  rep.starts_failed = set.starts_failed;
  rep.indefinite_omitted = set.indefinite_omitted;
  rep.no_critical_point = set.empty();
  rep.no_critical_point_in_sa_plus = set.no_critical_point_in_sa_plus();

  start = Clock::now();
  for (const CriticalPair& c : set.pairs) {
    ClassifiedPair cp{c, {}, std::nullopt};
    try {
      cp.verdict = classify(p, c);
    } catch (const Error& err) {
      cp.verdict.tag = VerdictTag::kDegenerate;
      cp.verdict.rule = err.what();
    }
    if (cp.verdict.tag == VerdictTag::kDegenerate) ++rep.degenerate_pairs;
    rep.pairs.push_back(std::move(cp));
  }
  t.classify_ms = elapsed_ms(start);

  start = Clock::now();
  if (opts.verify) {
    for (ClassifiedPair& cp : rep.pairs) {
      cp.evidence = verify_pair(p, cp.pair, cp.verdict, opts);
      if (!cp.evidence->corroborated()) rep.verification_failed = true;
    }
  }
  t.verify_ms = elapsed_ms(start);
  if (opts.timing) rep.timings = t;
  return rep;
}

json report_to_json(const SolveReport& r) {
  json j;
  j["schemaVersion"] = r.schema_version;
  j["inputDigest"] = r.input_digest;
  j["n"] = r.n;
  j["m"] = r.m;
  j["startsUsed"] = r.starts_used;
  j["startsFailed"] = r.starts_failed;
  j["indefiniteOmitted"] = r.indefinite_omitted;
  j["verified"] = r.verified;
  j["flags"] = {{"noCriticalPoint", r.no_critical_point},
                {"noCriticalPointInSaPlus", r.no_critical_point_in_sa_plus},
                {"degeneratePairs", r.degenerate_pairs},
                {"verificationFailed", r.verification_failed}};
  j["pairs"] = json::array();
  for (const ClassifiedPair& cp : r.pairs) {
    json pj = pair_json(cp.pair);
    pj["verdict"] = verdict_json(cp.verdict);
    pj["evidence"] = cp.evidence ? evidence_json(*cp.evidence) : json(nullptr);
    j["pairs"].push_back(std::move(pj));
  }
  if (r.timings) {
    j["timings"] = {{"solveMs", r.timings->solve_ms},
                    {"classifyMs", r.timings->classify_ms},
                    {"verifyMs", r.timings->verify_ms}};
  }
  return j;
}

SolveReport report_from_json(const json& j) {
  SolveReport r;
  r.schema_version = j.at("schemaVersion").get<int>();
  r.input_digest = j.at("inputDigest").get<std::string>();
  r.n = j.at("n").get<int>();
  r.m = j.at("m").get<int>();
  r.starts_used = j.at("startsUsed").get<int>();
  r.starts_failed = j.at("startsFailed").get<int>();
  r.indefinite_omitted = j.at("indefiniteOmitted").get<int>();
  r.verified = j.at("verified").get<bool>();
  const json& flags = j.at("flags");
  r.no_critical_point = flags.at("noCriticalPoint").get<bool>();
  r.no_critical_point_in_sa_plus = flags.at("noCriticalPointInSaPlus").get<bool>();
  r.degenerate_pairs = flags.at("degeneratePairs").get<int>();
  r.verification_failed = flags.at("verificationFailed").get<bool>();
  for (const json& pj : j.at("pairs")) {
    ClassifiedPair cp{pair_from(pj), verdict_from(pj.at("verdict"), r.n, r.m), std::nullopt};
    if (!pj.at("evidence").is_null()) cp.evidence = evidence_from(pj["evidence"]);
    r.pairs.push_back(std::move(cp));
  }
  if (j.contains("timings")) {
    const json& t = j["timings"];
    r.timings = Timings{t.at("solveMs").get<double>(), t.at("classifyMs").get<double>(),
                        t.at("verifyMs").get<double>()};
  }
  return r;
}

std::string format_summary(const SolveReport& r) {
  auto fmt_vec = [](const VectorXd& v) {
    std::ostringstream os;
    os << std::setprecision(8) << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
  };
  std::ostringstream os;
  os << std::setprecision(8);
  os << "canonical dual solve: n=" << r.n << " m=" << r.m << " pairs=" << r.pairs.size()
     << " starts=" << r.starts_used << " digest=" << r.input_digest << "\n";
  os << std::left << std::setw(4) << "#" << std::setw(17) << "verdict" << std::setw(16)
     << "region" << std::setw(17) << "Pi(x)" << std::setw(17) << "Pi^d(sigma)"
     << std::setw(12) << "|Pi-Pi^d|" << std::setw(11) << "evidence"
     << "sigma / x\n";
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const ClassifiedPair& cp = r.pairs[i];
    const char* evidence = !cp.evidence ? "-" : (cp.evidence->corroborated() ? "ok" : "FAILED");
    std::ostringstream gap;
    gap << std::setprecision(2) << std::scientific
        << std::abs(cp.pair.primal_value - cp.pair.dual_value);
    os << std::left << std::setw(4) << (i + 1) << std::setw(17) << verdict_name(cp.verdict.tag)
       << std::setw(16) << region_name(cp.pair.region.tag) << std::setw(17)
       << cp.pair.primal_value << std::setw(17) << cp.pair.dual_value << std::setw(12)
       << gap.str() << std::setw(11) << evidence << fmt_vec(cp.pair.sigma) << " / "
       << fmt_vec(cp.pair.x) << "\n";
  }
  os << "flags:";
  bool any = false;
  if (r.no_critical_point) { os << " noCriticalPoint"; any = true; }
  if (r.no_critical_point_in_sa_plus) { os << " noCriticalPointInSaPlus"; any = true; }
  if (r.degenerate_pairs > 0) { os << " degeneratePairs=" << r.degenerate_pairs; any = true; }
  if (r.verification_failed) { os << " verificationFailed"; any = true; }
  if (!any) os << " none";
  os << "\n";
  if (r.indefinite_omitted > 0) {
    os << "omitted: " << r.indefinite_omitted
       << " critical point(s) with indefinite G(sigma) (include with --include-indefinite)\n";
  }
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const auto& ev = r.pairs[i].evidence;
    if (!ev) continue;
    for (const std::string& d : ev->disagreements) os << "  pair " << (i + 1) << ": " << d << "\n";
  }
  return os.str();
}

}  // namespace canondual
