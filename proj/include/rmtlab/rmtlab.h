#ifndef RMTLAB_RMTLAB_H
#define RMTLAB_RMTLAB_H

/*
 * C interface to the rmtlab random matrix laboratory.
 *
 * Every fallible call returns an rmtl_status. On failure the message for the
 * calling thread is available from rmtl_last_error() until the next failing
 * call on that thread. Objects are opaque handles released with the matching
 * *_free function; passing NULL to a *_free function is a no-op.
 *
 * Random pipelines take a 64-bit seed. Results depend only on the seed and the
 * parameters, never on the worker count set with rmtl_set_threads().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RMTL_API __declspec(dllexport)
#else
#define RMTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmtl_status {
  RMTL_OK = 0,
  RMTL_E_INVALID_PARAMETER = 1,
  RMTL_E_DEGENERATE_INPUT = 2,
  RMTL_E_NUMERICAL_FAILURE = 3,
  RMTL_E_RANGE = 4,
  RMTL_E_IO = 5,
  RMTL_E_INTERNAL = 6
} rmtl_status;

typedef enum rmtl_format { RMTL_CSV = 0, RMTL_JSON = 1 } rmtl_format;

typedef struct rmtl_text rmtl_text;
typedef struct rmtl_tridiag rmtl_tridiag;
typedef struct rmtl_cdf rmtl_cdf;
typedef struct rmtl_verblunsky rmtl_verblunsky;

#define RMTL_CRITERION_COUNT 14

/* ---- library ---------------------------------------------------------- */

RMTL_API const char* rmtl_version(void);
RMTL_API const char* rmtl_status_string(int status);
RMTL_API const char* rmtl_last_error(void);
RMTL_API void rmtl_set_threads(unsigned n);
RMTL_API unsigned rmtl_threads(void);

/* ---- text buffers ----------------------------------------------------- */

RMTL_API const char* rmtl_text_data(const rmtl_text* text);
RMTL_API size_t rmtl_text_size(const rmtl_text* text);
RMTL_API void rmtl_text_free(rmtl_text* text);

/* ---- symmetric tridiagonal matrices ------------------------------------ */

/* model: "beta-hermite", "nested-jacobi", "goe-spiked" or "schrodinger". */
typedef struct rmtl_sample_params {
  const char* model;
  size_t n;
  double beta;        /* beta-hermite, nested-jacobi */
  double spike;       /* goe-spiked: rank-one perturbation strength */
  double sigma;       /* schrodinger: disorder strength */
  const char* omega;  /* schrodinger: "gaussian", "rademacher" or "uniform" */
  uint64_t seed;
} rmtl_sample_params;

RMTL_API rmtl_status rmtl_tridiag_create(const double* diag, const double* offdiag, size_t n,
                                         rmtl_tridiag** out);
RMTL_API rmtl_status rmtl_tridiag_from_csv(const char* csv, rmtl_tridiag** out);
RMTL_API rmtl_status rmtl_tridiag_sample(const rmtl_sample_params* params, rmtl_tridiag** out);
RMTL_API size_t rmtl_tridiag_size(const rmtl_tridiag* t);
/* diag receives n values, offdiag n - 1; either may be NULL. */
RMTL_API rmtl_status rmtl_tridiag_copy(const rmtl_tridiag* t, double* diag, double* offdiag);
/* Writes the n eigenvalues in increasing order. */
RMTL_API rmtl_status rmtl_tridiag_eigenvalues(const rmtl_tridiag* t, double tol, double* out);
RMTL_API rmtl_status rmtl_tridiag_format(const rmtl_tridiag* t, rmtl_format fmt, rmtl_text** out);
/* Spectral measure at the first coordinate; JSON adds semicircle diagnostics. */
RMTL_API rmtl_status rmtl_spectrum(const rmtl_tridiag* t, rmtl_format fmt, rmtl_text** out);
RMTL_API void rmtl_tridiag_free(rmtl_tridiag* t);

/* ---- Tracy-Widom tables ----------------------------------------------- */

/* w = INFINITY selects the Dirichlet (unspiked) boundary. step <= 0 keeps
 * the default Riccati grid step. */
RMTL_API rmtl_status rmtl_tw_riccati(double beta, double w, const double* grid, size_t n_grid,
                                     size_t paths, uint64_t seed, double step, rmtl_cdf** out);
/* beta = 2 only: Painleve II evaluation, deformed by w when finite. */
RMTL_API rmtl_status rmtl_tw_painleve(double w, const double* grid, size_t n_grid, rmtl_cdf** out);
/* Uniform grid of nt points on [t_lo, t_hi]. */
RMTL_API rmtl_status rmtl_tw_pde(double beta, double w, double t_lo, double t_hi, size_t nt,
                                 rmtl_cdf** out);
RMTL_API rmtl_status rmtl_cdf_from_csv(const char* csv, rmtl_cdf** out);
RMTL_API size_t rmtl_cdf_size(const rmtl_cdf* c);
/* ci may be NULL; it is zero-filled for deterministic tables. */
RMTL_API rmtl_status rmtl_cdf_copy(const rmtl_cdf* c, double* grid, double* values, double* ci);
RMTL_API rmtl_status rmtl_cdf_format(const rmtl_cdf* c, rmtl_format fmt, rmtl_text** out);
RMTL_API void rmtl_cdf_free(rmtl_cdf* c);

RMTL_API rmtl_status rmtl_tw2_cdf(double t, double* out);
RMTL_API rmtl_status rmtl_deformed_tw(double t, double w, double* out);

/* ---- bulk: Brownian carousel ------------------------------------------ */

/* Mean and variance of N[0, lambda] for each lambda; all lambdas share the
 * noise of each path. */
RMTL_API rmtl_status rmtl_sine_counts(double beta, const double* lambdas, size_t n_lambda,
                                      size_t paths, uint64_t seed, rmtl_format fmt, rmtl_text** out);
/* P(N[0, lambda] <= k) with Wilson interval and the asymptotic exponent. */
RMTL_API rmtl_status rmtl_gap(double beta, const double* lambdas, size_t n_lambda, long k,
                              size_t paths, uint64_t seed, rmtl_format fmt, rmtl_text** out);
/* Replicas of (N(lambda) - lambda/2pi)/sqrt(log lambda) and their variance. */
RMTL_API rmtl_status rmtl_clt(double beta, double lambda, size_t reps, uint64_t seed,
                              rmtl_format fmt, rmtl_text** out);
/* Counting statistics of the Sch_tau process. */
RMTL_API rmtl_status rmtl_schrodinger(double tau, double lambda, double eps, size_t paths,
                                      uint64_t seed, rmtl_format fmt, rmtl_text** out);
/* Block profiles of random Schrodinger eigenvectors against the decay law. */
RMTL_API rmtl_status rmtl_eigenvector_profiles(size_t n, double sigma, size_t draws, uint64_t seed,
                                               rmtl_format fmt, rmtl_text** out);

/* ---- unit circle ------------------------------------------------------ */

RMTL_API rmtl_status rmtl_verblunsky_create(const double* re, const double* im, size_t n,
                                            rmtl_verblunsky** out);
/* Circular beta ensemble in Verblunsky coordinates. */
RMTL_API rmtl_status rmtl_verblunsky_sample(size_t n, double beta, uint64_t seed,
                                            rmtl_verblunsky** out);
RMTL_API size_t rmtl_verblunsky_size(const rmtl_verblunsky* v);
RMTL_API rmtl_status rmtl_verblunsky_copy(const rmtl_verblunsky* v, double* re, double* im);
/* Eigenangles in [0, 2pi); writes n values. */
RMTL_API rmtl_status rmtl_eigenangles(const rmtl_verblunsky* v, double* out);
/* Dirac operator check at every eigenangle. passed may be NULL. */
RMTL_API rmtl_status rmtl_szego_check(const rmtl_verblunsky* v, double tol, rmtl_format fmt,
                                      rmtl_text** out, int* passed);
RMTL_API void rmtl_verblunsky_free(rmtl_verblunsky* v);

/* ---- acceptance suite ------------------------------------------------- */

RMTL_API const char* rmtl_criterion_name(int id);
/* Runs criterion id in 1..RMTL_CRITERION_COUNT. scale in (0, 1] shrinks the
 * Monte Carlo sizes. errored is set when the check threw before reaching a
 * verdict. errored, seconds, detail and digest may be NULL. */
RMTL_API rmtl_status rmtl_acceptance_run(int id, uint64_t seed, double scale, int* passed, int* errored,
                                         double* seconds, rmtl_text** detail, rmtl_text** digest);

#ifdef __cplusplus
}
#endif

#endif
