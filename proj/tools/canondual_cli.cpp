// canondual: batch front end over the C API.
//
//   canondual solve <problem-file> [--out report.json] [flags]
//
// Exit status: 0 success, 2 schema error, 3 solver failure, 4 verification
// disagreement.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "canondual/canondual.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerification = 4;

struct ProblemDeleter {
  void operator()(cd_problem* p) const { cd_problem_free(p); }
};
struct ReportDeleter {
  void operator()(cd_report* r) const { cd_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { cd_string_free(s); }
};
using ProblemPtr = std::unique_ptr<cd_problem, ProblemDeleter>;
using ReportPtr = std::unique_ptr<cd_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct SolveArgs {
  std::string problem_path;
  std::string out_path = "report.json";
  std::string summary_path;
  int starts = 0;
  int max_iter = -1;
  double tol = 0.0;
  double dedup_radius = -1.0;
  std::string box;
  int probe_samples = 512;
  bool no_verify = false;
  bool no_timing = false;
  bool include_indefinite = false;
  int indent = 2;
  bool quiet = false;
};

// "lo:hi,lo:hi,..." -> flat (lo, hi) list.
bool parse_box(const std::string& text, std::vector<double>& out, std::string& err) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      err = "box interval \"" + item + "\" is not of the form lo:hi";
      return false;
    }
    try {
      std::size_t used = 0;
      const std::string lo_s = item.substr(0, colon);
      const std::string hi_s = item.substr(colon + 1);
      const double lo = std::stod(lo_s, &used);
      if (used != lo_s.size()) throw std::invalid_argument(lo_s);
      const double hi = std::stod(hi_s, &used);
      if (used != hi_s.size()) throw std::invalid_argument(hi_s);
      out.push_back(lo);
      out.push_back(hi);
    } catch (const std::exception&) {
      err = "box interval \"" + item + "\" has a non-numeric bound";
      return false;
    }
  }
  if (out.empty()) {
    err = "box is empty";
    return false;
  }
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) return false;
  os << text;
  return static_cast<bool>(os);
}

int run_solve(const SolveArgs& args) {
  std::ifstream in(args.problem_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read problem file " << args.problem_path << "\n";
    return kExitSchema;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  cd_problem* raw_problem = nullptr;
  cd_status st = cd_problem_from_json(text.c_str(), &raw_problem);
  ProblemPtr problem(raw_problem);
  if (st != CD_OK) {
    std::cerr << "error: " << cd_last_error() << "\n";
    return st == CD_ERR_SCHEMA ? kExitSchema : kExitSolver;
  }

  cd_options opts;
  cd_options_init(&opts);
  opts.starts = args.starts;
  opts.max_iter = args.max_iter;
  opts.tol_newton = args.tol;
  opts.dedup_radius = args.dedup_radius;
  opts.verify = args.no_verify ? 0 : 1;
  opts.timing = args.no_timing ? 0 : 1;
  opts.probe_samples = args.probe_samples;
  if (args.include_indefinite) opts.include_indefinite = 1;
  std::vector<double> box;
  if (!args.box.empty()) {
    std::string err;
    if (!parse_box(args.box, box, err)) {
      std::cerr << "error: --box: " << err << "\n";
      return kExitSchema;
    }
    opts.box = box.data();
    opts.box_len = box.size();
  }

  cd_report* raw_report = nullptr;
  st = cd_solve(problem.get(), &opts, &raw_report);
  ReportPtr report(raw_report);
  if (st != CD_OK) {
    std::cerr << "error: solve failed (" << cd_status_name(st) << "): " << cd_last_error() << "\n";
    return st == CD_ERR_INVALID_ARGUMENT || st == CD_ERR_DIMENSION ? kExitSchema : kExitSolver;
  }

  char* raw_json = nullptr;
  char* raw_summary = nullptr;
  if (cd_report_to_json(report.get(), args.indent, &raw_json) != CD_OK ||
      cd_report_summary(report.get(), &raw_summary) != CD_OK) {
    std::cerr << "error: " << cd_last_error() << "\n";
    return kExitSolver;
  }
  StringPtr json(raw_json);
  StringPtr summary(raw_summary);

  if (!write_file(args.out_path, std::string(json.get()) + "\n")) {
    std::cerr << "error: cannot write report to " << args.out_path << "\n";
    return kExitSolver;
  }
  if (!args.summary_path.empty() && !write_file(args.summary_path, summary.get())) {
    std::cerr << "error: cannot write summary to " << args.summary_path << "\n";
    return kExitSolver;
  }
  if (!args.quiet) std::cout << summary.get();

  const unsigned flags = cd_report_flags(report.get());
  if (flags & CD_FLAG_NO_CRITICAL_POINT) {
    std::cerr << "error: no critical point of the canonical dual was found\n";
    return kExitSolver;
  }
  if (flags & CD_FLAG_VERIFICATION_FAILED) {
    std::cerr << "error: verification disagrees with at least one verdict\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical dual solver for nonconvex problems Pi(x) = V(Lambda(x)) + "
               "1/2 x^T A x - x^T f"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cd_version()));

  SolveArgs args;
  CLI::App* solve = app.add_subcommand("solve", "Find, classify and verify critical points");
  solve->add_option("problem-file", args.problem_path, "Problem document (JSON)")
      ->required();
  solve->add_option("--out,-o", args.out_path, "Machine-readable report path")
      ->capture_default_str();
  solve->add_option("--summary", args.summary_path, "Also write the text summary here");
  solve->add_option("--starts", args.starts, "Multistart seed count")
      ->check(CLI::PositiveNumber);
  solve->add_option("--box", args.box,
                    "Seed box over sigma as lo:hi per coordinate, comma separated "
                    "(use --box=... for negative bounds)");
  solve->add_option("--tol", args.tol, "Newton tolerance on |grad Pi^d|")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", args.max_iter, "Newton iteration cap")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--dedup-radius", args.dedup_radius, "Deduplication radius (inf-norm)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--probe-samples", args.probe_samples, "Samples per neighborhood probe")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve->add_flag("--no-verify", args.no_verify, "Skip the verification oracle");
  solve->add_flag("--include-indefinite", args.include_indefinite,
                  "Also report critical points where G(sigma) is indefinite");
  solve->add_flag("--no-timing", args.no_timing, "Omit timings (byte-identical reports)");
  solve->add_option("--indent", args.indent, "JSON indent (-1 for compact)")
      ->capture_default_str();
  solve->add_flag("--quiet,-q", args.quiet, "Do not print the summary");

  CLI11_PARSE(app, argc, argv);
  if (solve->parsed()) return run_solve(args);
  return 1;
}
