/*
 * C interface to the canonical-dual solver.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a cd_status; the
 * message of the most recent failure on the calling thread is available
 * from cd_last_error().
 */
#ifndef CANONDUAL_CANONDUAL_H
#define CANONDUAL_CANONDUAL_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(CANONDUAL_BUILDING)
#    define CANONDUAL_API __declspec(dllexport)
#  else
#    define CANONDUAL_API __declspec(dllimport)
#  endif
#else
#  define CANONDUAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cd_status {
  CD_OK = 0,
  CD_ERR_INVALID_ARGUMENT = 1,
  CD_ERR_DIMENSION = 2,
  CD_ERR_DOMAIN = 3,
  CD_ERR_CONSISTENCY = 4,
  CD_ERR_SINGULAR_G = 5,
  CD_ERR_SINGULAR_HESSIAN = 6,
  CD_ERR_DEGENERATE_SPECTRUM = 7,
  CD_ERR_ALL_INFEASIBLE = 8,
  CD_ERR_BOX_TOO_COARSE = 9,
  CD_ERR_SCHEMA = 10,
  CD_ERR_NULL_POINTER = 11,
  CD_ERR_OUT_OF_RANGE = 12,
  CD_ERR_INTERNAL = 13
} cd_status;

typedef enum cd_region {
  CD_REGION_SA_PLUS_INTERIOR = 0,
  CD_REGION_SA_PLUS_BOUNDARY = 1,
  CD_REGION_SA_MINUS = 2,
  CD_REGION_INDEFINITE = 3,
  CD_REGION_OUTSIDE_SA = 4
} cd_region;

typedef enum cd_verdict {
  CD_VERDICT_GLOBAL_MIN = 0,
  CD_VERDICT_DOUBLE_MAX = 1,
  CD_VERDICT_DOUBLE_MIN_STRONG = 2,
  CD_VERDICT_DOUBLE_MIN_WEAK = 3,
  CD_VERDICT_SADDLE_DUAL_WEAK = 4,
  CD_VERDICT_SADDLE = 5,
  CD_VERDICT_UNCLASSIFIED = 6,
  CD_VERDICT_DEGENERATE = 7
} cd_verdict;

enum {
  CD_FLAG_NO_CRITICAL_POINT = 1u << 0,
  CD_FLAG_NO_CRITICAL_POINT_IN_SA_PLUS = 1u << 1,
  CD_FLAG_DEGENERATE_PAIRS = 1u << 2,
  CD_FLAG_VERIFICATION_FAILED = 1u << 3
};

typedef struct cd_problem cd_problem;
typedef struct cd_report cd_report;

/* Solve settings. Fields left at the values set by cd_options_init fall back
 * to the problem document's "search" block, then to built-in defaults. */
typedef struct cd_options {
  int starts;           /* <= 0: unset */
  int max_iter;         /* < 0: unset */
  double tol_newton;    /* <= 0: unset */
  double dedup_radius;  /* < 0: unset */
  const double* box;    /* m (lo, hi) pairs, or NULL */
  size_t box_len;       /* number of doubles in box (2 m) */
  int verify;           /* nonzero: run the verification oracle */
  int probe_samples;    /* samples per probe */
  int timing;           /* nonzero: include timings in the report */
  int include_indefinite; /* < 0: unset; nonzero: keep pairs with indefinite G */
} cd_options;

typedef struct cd_pair_info {
  double primal_value;
  double dual_value;
  double xi_value;
  double gap_value;
  double grad_primal_norm;
  double grad_dual_norm;
  cd_region region;
  cd_verdict verdict;
  int converged;
  int iterations;
  int generalized_inverse;
  int corroborated; /* 1 yes, 0 no, -1 not verified */
} cd_pair_info;

CANONDUAL_API const char* cd_version(void);
CANONDUAL_API const char* cd_status_name(cd_status status);
CANONDUAL_API const char* cd_verdict_name(cd_verdict verdict);
CANONDUAL_API const char* cd_region_name(cd_region region);

/* Message of the last failure on this thread ("" if none). */
CANONDUAL_API const char* cd_last_error(void);
/* Document field named by the last CD_ERR_SCHEMA failure ("" otherwise). */
CANONDUAL_API const char* cd_last_error_field(void);

CANONDUAL_API void cd_options_init(cd_options* opts);

/* Parses a problem document (JSON text, NUL-terminated). */
CANONDUAL_API cd_status cd_problem_from_json(const char* text, cd_problem** out);

/* Dense row-major inputs: A is n*n, B is m blocks of n*n, b is m blocks of
 * n, f is n, d / alpha / lambda are m. */
CANONDUAL_API cd_status cd_problem_create_log(int n, int m, const double* A, const double* B,
                                              const double* b, const double* f,
                                              const double* d, cd_problem** out);
CANONDUAL_API cd_status cd_problem_create_quadratic_well(int n, int m, const double* A,
                                                         const double* B, const double* b,
                                                         const double* f, const double* alpha,
                                                         const double* lambda,
                                                         cd_problem** out);
CANONDUAL_API void cd_problem_free(cd_problem* problem);
CANONDUAL_API int cd_problem_n(const cd_problem* problem);
CANONDUAL_API int cd_problem_m(const cd_problem* problem);

/* Pi(x) and Pi^d(sigma) evaluated directly. */
CANONDUAL_API cd_status cd_primal_value(const cd_problem* problem, const double* x,
                                        double* out);
CANONDUAL_API cd_status cd_dual_value(const cd_problem* problem, const double* sigma,
                                      double* out);

/* Runs solve, classify and (optionally) verify. opts may be NULL. */
CANONDUAL_API cd_status cd_solve(const cd_problem* problem, const cd_options* opts,
                                 cd_report** out);
CANONDUAL_API void cd_report_free(cd_report* report);

CANONDUAL_API size_t cd_report_pair_count(const cd_report* report);
CANONDUAL_API unsigned cd_report_flags(const cd_report* report);
CANONDUAL_API cd_status cd_report_pair(const cd_report* report, size_t index,
                                       cd_pair_info* out);
/* Copies sigma (m values) / x (n values) of a pair into buf. */
CANONDUAL_API cd_status cd_report_pair_sigma(const cd_report* report, size_t index,
                                             double* buf, size_t len);
CANONDUAL_API cd_status cd_report_pair_x(const cd_report* report, size_t index, double* buf,
                                         size_t len);

/* Newly allocated NUL-terminated strings; release with cd_string_free. */
CANONDUAL_API cd_status cd_report_to_json(const cd_report* report, int indent, char** out);
CANONDUAL_API cd_status cd_report_summary(const cd_report* report, char** out);
CANONDUAL_API void cd_string_free(char* str);

#ifdef __cplusplus
}
#endif

#endif /* CANONDUAL_CANONDUAL_H */
