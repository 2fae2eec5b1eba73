#pragma once

// Batch pipeline: problem document -> solve -> classify -> verify -> report.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "canondual/oracle.hpp"

namespace canondual {

inline constexpr int kSchemaVersion = 1;

struct ProblemDocument {
  int schema_version = kSchemaVersion;
  CanonicalProblem problem;
  /// Search settings from the document's optional "search" block.
  SearchConfig search;
  /// "fnv1a64:<hex>" of the canonical dump of the parsed document.
  std::string digest;
};

/// Parses and validates a problem document. Throws SchemaError naming the
/// offending field.
ProblemDocument parse_problem_document(std::string_view text);
ProblemDocument parse_problem_document(const nlohmann::json& doc);
inline ProblemDocument parse_problem_document(const std::string& text) {
  return parse_problem_document(std::string_view(text));
}
inline ProblemDocument parse_problem_document(const char* text) {
  return parse_problem_document(std::string_view(text));
}

/// Serializes a problem (and optionally its search block) into the document
/// schema. Only the built-in families are supported.
nlohmann::json problem_to_json(const CanonicalProblem& p, const SearchConfig* search = nullptr);

struct RunOptions {
  bool verify = true;
  int probe_samples = 512;
  bool timing = true;
  /// Grid resolution per axis by primal dimension n = 1, 2, 3.
  int grid_points[3] = {20001, 2001, 201};
};

struct GridCheck {
  /// "ok", "BoxTooCoarse" or "skipped".
  std::string status = "skipped";
  VectorXd x;
  double value = 0.0;
  /// |x_grid - x|_inf.
  double x_distance = 0.0;
  /// No grid point beats Pi(x) by more than 1e-8 (1 + |Pi(x)|).
  bool agrees = true;
};

struct PairEvidence {
  std::optional<FdReport> fd_primal;
  std::optional<FdReport> fd_dual;
  std::optional<ProbeReport> full;
  std::optional<ProbeReport> flat;
  std::optional<ProbeReport> sharp;
  std::optional<GridCheck> grid;
  /// Human-readable reasons the evidence contradicts the verdict.
  std::vector<std::string> disagreements;

  bool corroborated() const { return disagreements.empty(); }
};

struct ClassifiedPair {
  CriticalPair pair;
  TrialityVerdict verdict;
  /// Empty when verification is disabled.
  std::optional<PairEvidence> evidence;
};

struct Timings {
  double solve_ms = 0.0;
  double classify_ms = 0.0;
  double verify_ms = 0.0;
};

struct SolveReport {
  int schema_version = kSchemaVersion;
  std::string input_digest;
  int n = 0;
  int m = 0;
  int starts_used = 0;
  int starts_failed = 0;
  /// Critical points with indefinite G(sigma) that were not kept.
  int indefinite_omitted = 0;
  bool verified = false;
  std::vector<ClassifiedPair> pairs;

  bool no_critical_point = false;
  bool no_critical_point_in_sa_plus = false;
  int degenerate_pairs = 0;
  bool verification_failed = false;

  std::optional<Timings> timings;
};

/// Evidence for one classified pair; appends to `disagreements` whenever a
/// check contradicts the verdict.
PairEvidence verify_pair(const CanonicalProblem& p, const CriticalPair& pair,
                         const TrialityVerdict& verdict, const RunOptions& opts);

SolveReport solve(const CanonicalProblem& p, const SearchConfig& cfg, const RunOptions& opts,
                  std::string digest = {});

nlohmann::json report_to_json(const SolveReport& report);
SolveReport report_from_json(const nlohmann::json& j);

/// Fixed-width text table, values to 8 significant digits.
std::string format_summary(const SolveReport& report);

std::string fnv1a64_digest(std::string_view bytes);

}  // namespace canondual
