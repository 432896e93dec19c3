#ifndef FRACHC_H
#define FRACHC_H

/*
 * C interface to the frachc solver for the 1-D space-fractional Cahn-Hilliard
 * equation: mBDF2 in time, weighted-trapezoidal fractional Laplacian in space,
 * Newton with FFT-preconditioned flexible GMRES for each step.
 *
 * Every function that can fail returns a frachc_status. On failure a
 * description is available from frachc_last_error() on the calling thread
 * until the next failing call on that thread. Handles are not shared between
 * threads by the library; distinct handles may be used concurrently.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(FRACHC_BUILDING_LIBRARY)
#    define FRACHC_API __declspec(dllexport)
#  else
#    define FRACHC_API __declspec(dllimport)
#  endif
#else
#  define FRACHC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum frachc_status {
  FRACHC_OK = 0,
  FRACHC_ERR_INVALID_ARGUMENT = 1, /* null pointer, length mismatch, unknown enum value */
  FRACHC_ERR_CONFIG = 2,           /* a parameter violates a model invariant */
  FRACHC_ERR_DOMAIN = 3,           /* argument outside the domain of a function */
  FRACHC_ERR_NOT_CONVERGED = 4,    /* Newton failed at some time step */
  FRACHC_ERR_NUMERICAL = 5,        /* non-finite values or a singular system */
  FRACHC_ERR_CANCELLED = 6,        /* an observer asked to stop */
  FRACHC_ERR_UNAVAILABLE = 7,      /* the requested data was not recorded */
  FRACHC_ERR_INTERNAL = 8
} frachc_status;

typedef enum frachc_problem {
  FRACHC_EXAMPLE1 = 0, /* manufactured solution e^t (1-x^2)^{3+alpha/2} on (-1,1) */
  FRACHC_EXAMPLE2 = 1, /* phi0 = 0.1 sin x on (-pi,pi), T = 46, no exact solution */
  FRACHC_EXAMPLEA = 2  /* manufactured solution e^t (1-x^2)^{1+alpha/2} */
} frachc_problem;

typedef enum frachc_precond {
  FRACHC_PRECOND_NONE = 0,
  FRACHC_PRECOND_SKEW = 1, /* block lower-triangular with skew-circulant Schur surrogate */
  FRACHC_PRECOND_CIRC = 2, /* same with Strang circulant */
  FRACHC_PRECOND_DENSE = 3 /* no Krylov: dense LU of each Jacobian */
} frachc_precond;

typedef enum frachc_real_param {
  FRACHC_ALPHA = 0,
  FRACHC_EPSILON2 = 1,
  FRACHC_SIGMA = 2,
  FRACHC_HALF_WIDTH = 3, /* L, domain is (-L, L) */
  FRACHC_FINAL_TIME = 4,
  FRACHC_NEWTON_TOL = 5,
  FRACHC_KRYLOV_TOL = 6
} frachc_real_param;

typedef enum frachc_int_param {
  FRACHC_CELLS = 0, /* N; there are N - 1 unknowns per field */
  FRACHC_STEPS = 1, /* M */
  FRACHC_NEWTON_MAX_ITERS = 2,
  FRACHC_KRYLOV_MAX_ITERS = 3,
  FRACHC_DENSE_CAP = 4,         /* largest N - 1 accepted by dense solves and exports */
  FRACHC_TRACK_ENERGY = 5,      /* 0 or 1 */
  FRACHC_ALLOW_SMALL_SIGMA = 6  /* 0 or 1; sigma < 1/16 is rejected otherwise */
} frachc_int_param;

typedef enum frachc_trace {
  FRACHC_TRACE_TIME = 0,
  FRACHC_TRACE_ENERGY = 1,          /* needs FRACHC_TRACK_ENERGY */
  FRACHC_TRACE_MODIFIED_ENERGY = 2, /* needs FRACHC_TRACK_ENERGY */
  FRACHC_TRACE_PHI_INF = 3,
  FRACHC_TRACE_MEAN_KRYLOV = 4      /* Krylov iterations per Newton iteration at each level */
} frachc_trace;

typedef enum frachc_matrix {
  FRACHC_MATRIX_G = 0,        /* n x n fractional operator */
  FRACHC_MATRIX_SKEW = 1,     /* n x n Strang-type skew-circulant */
  FRACHC_MATRIX_CIRC = 2,     /* n x n Strang circulant */
  FRACHC_MATRIX_JACOBIAN = 3  /* 2n x 2n Jacobian of the first Newton iteration of step 2 */
} frachc_matrix;

typedef struct frachc_config frachc_config;
typedef struct frachc_run frachc_run;

typedef struct frachc_step_info {
  int step;           /* time level k = 0..M */
  double time;
  size_t n;           /* length of phi and mu */
  const double* phi;
  const double* mu;
  int newton_iters;   /* 0 for the initial state and the explicit first step */
  const int* krylov_iters; /* newton_iters entries */
} frachc_step_info;

/* Called after each time level. A nonzero return stops the run with
 * FRACHC_ERR_CANCELLED. The pointers are valid only during the call. */
typedef int (*frachc_observer)(const frachc_step_info* info, void* user_data);

FRACHC_API const char* frachc_version(void);
FRACHC_API const char* frachc_status_string(frachc_status status);
FRACHC_API const char* frachc_last_error(void);
/* Name of the offending parameter after FRACHC_ERR_CONFIG, "" otherwise. */
FRACHC_API const char* frachc_last_error_field(void);

/* Configuration. Parameters start at the example's defaults. */
FRACHC_API frachc_status frachc_config_create(frachc_problem problem, frachc_config** out);
FRACHC_API frachc_status frachc_config_clone(const frachc_config* config, frachc_config** out);
FRACHC_API void frachc_config_destroy(frachc_config* config);
FRACHC_API frachc_status frachc_config_set_real(frachc_config* config, frachc_real_param which,
                                                double value);
FRACHC_API frachc_status frachc_config_get_real(const frachc_config* config,
                                                frachc_real_param which, double* value);
FRACHC_API frachc_status frachc_config_set_int(frachc_config* config, frachc_int_param which,
                                               int value);
FRACHC_API frachc_status frachc_config_get_int(const frachc_config* config,
                                               frachc_int_param which, int* value);
FRACHC_API frachc_status frachc_config_set_precond(frachc_config* config, frachc_precond p);
FRACHC_API frachc_status frachc_config_get_precond(const frachc_config* config,
                                                   frachc_precond* p);
FRACHC_API frachc_status frachc_config_get_problem(const frachc_config* config,
                                                   frachc_problem* problem);
FRACHC_API frachc_status frachc_config_validate(const frachc_config* config);
/* Interior node coordinates x_1..x_{N-1}; len must be N - 1. */
FRACHC_API frachc_status frachc_config_nodes(const frachc_config* config, double* x, size_t len);

/* Runs the full time integration. observer may be NULL. */
FRACHC_API frachc_status frachc_simulate(const frachc_config* config, frachc_observer observer,
                                         void* user_data, frachc_run** out);
FRACHC_API void frachc_run_destroy(frachc_run* run);
FRACHC_API size_t frachc_run_levels(const frachc_run* run); /* M + 1 */
FRACHC_API size_t frachc_run_size(const frachc_run* run);   /* N - 1 */
FRACHC_API frachc_status frachc_run_trace(const frachc_run* run, frachc_trace which, double* out,
                                          size_t len);
FRACHC_API frachc_status frachc_run_newton_iters(const frachc_run* run, int* out, size_t len);
FRACHC_API frachc_status frachc_run_final_state(const frachc_run* run, double* phi, double* mu,
                                                size_t len);
/* Max-norm and h-weighted 2-norm error at t = T; needs an exact solution. */
FRACHC_API frachc_status frachc_run_errors(const frachc_run* run, double* err_inf,
                                           double* err_2);
FRACHC_API frachc_status frachc_run_iteration_stats(const frachc_run* run, double* iter1,
                                                    double* iter2);
/* Wall time spent in the nonlinear solves. */
FRACHC_API frachc_status frachc_run_solve_seconds(const frachc_run* run, double* seconds);

/* log(err_coarse / err_fine) / log(step_coarse / step_fine) */
FRACHC_API frachc_status frachc_convergence_order(double err_coarse, double step_coarse,
                                                  double err_fine, double step_fine,
                                                  double* order);

/* Dense matrices, row-major. frachc_matrix_rows gives the (square) size. */
FRACHC_API frachc_status frachc_matrix_rows(const frachc_config* config, frachc_matrix which,
                                            size_t* rows);
FRACHC_API frachc_status frachc_matrix_export(const frachc_config* config, frachc_matrix which,
                                              double* out, size_t len);

/* Gershgorin certificate for -G: diagonal, largest off-diagonal row sum. */
FRACHC_API frachc_status frachc_gershgorin(double alpha, int cells, double half_width,
                                           double* center, double* radius, int* definite);
/* ||sk(G) - G||_inf / ||G||_inf against its alpha-dependent bound. */
FRACHC_API frachc_status frachc_distance_bound(double alpha, int cells, double* ratio,
                                               double* bound, int* holds);

#ifdef __cplusplus
}
#endif

#endif /* FRACHC_H */
