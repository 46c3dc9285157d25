#ifndef NAGD_NAGD_H
#define NAGD_NAGD_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef NAGD_BUILDING
#    define NAGD_API __declspec(dllexport)
#  else
#    define NAGD_API __declspec(dllimport)
#  endif
#else
#  define NAGD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nagd_status {
  NAGD_OK = 0,
  NAGD_INVALID_ARGUMENT,
  NAGD_EIGENSOLVER_NO_CONVERGENCE,
  NAGD_DOMAIN_ERROR,
  NAGD_OVERFLOW_SATURATION,
  NAGD_SINGULAR_BASIS,
  NAGD_NO_EQUILIBRIUM,
  NAGD_NOT_APPLICABLE,
  NAGD_NON_FINITE_FIELD,
  NAGD_INSUFFICIENT_POINTS,
  NAGD_NON_POSITIVE,
  NAGD_TRIVIAL_NULLSPACE,
  NAGD_CONFIG_ERROR,
  NAGD_GRID_TOO_LARGE,
  NAGD_IO_ERROR,
  NAGD_INTERNAL_ERROR
} nagd_status;

NAGD_API const char* nagd_status_string(nagd_status status);
/* Message of the most recent failure on the calling thread ("" if none). */
NAGD_API const char* nagd_last_error(void);
/* Releases strings returned through char** out-parameters. */
NAGD_API void nagd_string_free(char* s);

/* ---- spectra and verdicts ---------------------------------------------- */

typedef struct nagd_spectrum nagd_spectrum;

enum { NAGD_TAG_POSITIVE_REAL = 0, NAGD_TAG_ZERO, NAGD_TAG_NEGATIVE_REAL, NAGD_TAG_STRICTLY_COMPLEX };
enum {
  NAGD_VERDICT_STABLE_CONVERGENT = 0,
  NAGD_VERDICT_STABLE_TO_NULL_SPACE,
  NAGD_VERDICT_UNSTABLE_NEGATIVE_REAL,
  NAGD_VERDICT_UNSTABLE_COMPLEX,
  NAGD_VERDICT_INDETERMINATE_JORDAN
};
enum { NAGD_FIRST_ORDER_EXPONENTIALLY_STABLE = 0, NAGD_FIRST_ORDER_MARGINALLY_STABLE, NAGD_FIRST_ORDER_UNSTABLE };

typedef struct nagd_verdict {
  int nagd_verdict;
  int first_order_verdict;
  double dominant_growth_rate;
  double first_order_rate;
  int has_bound_constant; /* bound_constant_C is meaningful only when set */
  double bound_constant_C;
  double kappa_P;
} nagd_verdict;

/* G is n x n, row-major. */
NAGD_API nagd_status nagd_spectrum_create(size_t n, const double* g_row_major, nagd_spectrum** out);
NAGD_API void nagd_spectrum_destroy(nagd_spectrum* s);
NAGD_API size_t nagd_spectrum_dim(const nagd_spectrum* s);
NAGD_API nagd_status nagd_spectrum_eigenvalue(const nagd_spectrum* s, size_t i, double* re, double* im);
/* re/im receive n entries each. */
NAGD_API nagd_status nagd_spectrum_right_vector(const nagd_spectrum* s, size_t i, double* re, double* im);
NAGD_API nagd_status nagd_spectrum_left_vector(const nagd_spectrum* s, size_t i, double* re, double* im);
NAGD_API int nagd_spectrum_is_symmetric(const nagd_spectrum* s);
NAGD_API int nagd_spectrum_is_normal(const nagd_spectrum* s);
NAGD_API int nagd_spectrum_is_diagonalizable(const nagd_spectrum* s);
NAGD_API double nagd_spectrum_kappa(const nagd_spectrum* s);

NAGD_API nagd_status nagd_classify_eigenvalue(double re, double im, double tol, int* tag, double* rate);
NAGD_API nagd_status nagd_classify(const nagd_spectrum* s, double t0, nagd_verdict* out);
NAGD_API nagd_status nagd_boundedness_bound(const nagd_spectrum* s, double t0, double q0_norm, double v0_norm,
                                            double* out);

/* ---- special functions ------------------------------------------------- */

NAGD_API nagd_status nagd_bessel_j1(double re, double im, double* out_re, double* out_im);
NAGD_API nagd_status nagd_bessel_y1(double re, double im, double* out_re, double* out_im);
NAGD_API nagd_status nagd_bessel_i1(double x, double* out);
NAGD_API nagd_status nagd_bessel_k1(double x, double* out);

/* Closed-form modal solution from (y0, ydot0) at t0, evaluated at t.
   out[4] = {Re y, Im y, Re ydot, Im ydot}; *saturated set past the cap. */
NAGD_API nagd_status nagd_modal_eval(double lambda_re, double lambda_im, double t0, const double y0[2],
                                     const double ydot0[2], double t, double out[4], int* saturated);

/* ---- trajectories ------------------------------------------------------ */

typedef struct nagd_integrator {
  double t0;
  double t_end;
  double dt;
  double r;
  size_t record_stride;
} nagd_integrator;

typedef struct nagd_trajectory nagd_trajectory;

NAGD_API void nagd_integrator_default(nagd_integrator* cfg);
/* b may be NULL (homogeneous). v0 may be NULL (zero). */
NAGD_API nagd_status nagd_simulate(size_t n, const double* g_row_major, const double* b, const double* q0,
                                   const double* v0, const nagd_integrator* cfg, nagd_trajectory** out);
NAGD_API nagd_status nagd_simulate_first_order(size_t n, const double* g_row_major, const double* b,
                                               const double* x0, const nagd_integrator* cfg, nagd_trajectory** out);
NAGD_API void nagd_trajectory_destroy(nagd_trajectory* t);
NAGD_API size_t nagd_trajectory_size(const nagd_trajectory* t);
NAGD_API size_t nagd_trajectory_dim(const nagd_trajectory* t);
NAGD_API int nagd_trajectory_saturated(const nagd_trajectory* t);
NAGD_API double nagd_trajectory_time(const nagd_trajectory* t, size_t k);
/* out receives dim entries. */
NAGD_API nagd_status nagd_trajectory_q(const nagd_trajectory* t, size_t k, double* out);
NAGD_API nagd_status nagd_trajectory_v(const nagd_trajectory* t, size_t k, double* out);

/* ---- experiment configs and commands ----------------------------------- */

typedef struct nagd_config nagd_config;

NAGD_API nagd_status nagd_config_parse(const char* text, nagd_config** out);
NAGD_API nagd_status nagd_config_load(const char* path, nagd_config** out);
NAGD_API nagd_status nagd_config_to_json(const nagd_config* cfg, char** out);
NAGD_API nagd_status nagd_config_set_stride(nagd_config* cfg, size_t stride);
NAGD_API void nagd_config_destroy(nagd_config* cfg);

/* Text (as_json = 0) or JSON report. */
NAGD_API nagd_status nagd_run_classify(const nagd_config* cfg, int as_json, char** report);

/* Writes <stem>.csv and <stem>.json under out_dir (the config's output path,
   when relative, is resolved against out_dir). csv_path may be NULL. */
NAGD_API nagd_status nagd_run_simulate(const nagd_config* cfg, const char* out_dir, char** csv_path,
                                       int* saturated);

/* figure_id: fig1..fig5. out_dir may be NULL to skip writing files. */
NAGD_API nagd_status nagd_reproduce(const char* figure_id, const char* out_dir, int* pass, char** summary_json);

/* grid: "a0:a1:na,b0:b1:nb". */
NAGD_API nagd_status nagd_sweep(const char* grid, int measure, unsigned jobs, char** csv);

/* dt <= 0 keeps the default step. *all_pass is 0 if any check failed. */
NAGD_API nagd_status nagd_check(double dt, int* all_pass, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
