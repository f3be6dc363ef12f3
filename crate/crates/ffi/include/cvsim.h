#ifndef CVSIM_H
#define CVSIM_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CvStatus {
  CV_STATUS_OK = 0,
  CV_STATUS_NULL_POINTER = 1,
  CV_STATUS_INVALID_INPUT = 2,
  CV_STATUS_DIMENSION = 3,
  CV_STATUS_UNSTABLE = 4,
  CV_STATUS_UNPHYSICAL = 5,
  CV_STATUS_NUMERICAL = 6,
  CV_STATUS_CONFIG = 7,
  CV_STATUS_PANIC = 8,
} CvStatus;

typedef enum CvScheme {
  CV_SCHEME_CASCADED = 0,
  CV_SCHEME_PARALLEL = 1,
  CV_SCHEME_DISSIPATIVE = 2,
} CvScheme;

// Opaque linear dynamics.
typedef struct CvDynamics CvDynamics;

// Opaque Gaussian state.
typedef struct CvState CvState;

// Dimensionless scheme parameters; `tau1`/`tau2` are used by the cascaded
// scheme only.
typedef struct CvSchemeParams {
  enum CvScheme scheme;
  double r;
  double k[3];
  double n_th[3];
  double tau1;
  double tau2;
} CvSchemeParams;

// Derived rates of a device preset. Frequencies and couplings in rad/s.
typedef struct CvRates {
  double resonator_frequencies[2];
  double couplings[2];
  double cavity_photon_numbers[2];
  double effective_couplings[2];
  double r;
  double k[3];
  double n_th[3];
} CvRates;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cvsim_version(void);

// Copies the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len - 1` bytes) and returns the full message length.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t cvsim_last_error(char *buf, size_t len);

// Product of thermal states; `occupations` holds `modes` values.
//
// # Safety
// `occupations` must point to `modes` doubles; `out` must be writable.
enum CvStatus cvsim_state_thermal(const double *occupations, size_t modes, struct CvState **out);

// Vacuum of `modes` modes.
//
// # Safety
// `out` must be writable.
enum CvStatus cvsim_state_vacuum(size_t modes, struct CvState **out);

// State from a mean (`2N`) and a row-major covariance (`2N x 2N`).
//
// # Safety
// `mean` and `covariance` must hold `2 modes` and `4 modes^2` doubles.
enum CvStatus cvsim_state_new(const double *mean,
                              const double *covariance,
                              size_t modes,
                              struct CvState **out);

// # Safety
// `state` must be null or a handle from this library, not yet freed.
void cvsim_state_free(struct CvState *state);

// Number of modes of a state, 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
size_t cvsim_state_num_modes(const struct CvState *state);

// Copies the row-major covariance into `out` (`len >= 4 N^2`).
//
// # Safety
// `state` must be a live handle and `out` must hold `len` doubles.
enum CvStatus cvsim_state_covariance(const struct CvState *state, double *out, size_t len);

// Copies the mean into `out` (`len >= 2N`).
//
// # Safety
// `state` must be a live handle and `out` must hold `len` doubles.
enum CvStatus cvsim_state_mean(const struct CvState *state, double *out, size_t len);

// Dynamics from row-major drift and diffusion.
//
// # Safety
// `drift` and `diffusion` must hold `4 modes^2` doubles; `out` must be writable.
enum CvStatus cvsim_dynamics_new(const double *drift,
                                 const double *diffusion,
                                 size_t modes,
                                 struct CvDynamics **out);

// Dynamics of the parallel (three modes) or dissipative (four modes) scheme.
// The cascaded scheme is piecewise and has no single generator.
//
// # Safety
// `params` must point to a valid struct; `out` must be writable.
enum CvStatus cvsim_dynamics_scheme(const struct CvSchemeParams *params, struct CvDynamics **out);

// # Safety
// `dynamics` must be null or a live handle.
void cvsim_dynamics_free(struct CvDynamics *dynamics);

// Number of modes of the dynamics, 0 for a null handle.
//
// # Safety
// `dynamics` must be null or a live handle.
size_t cvsim_dynamics_num_modes(const struct CvDynamics *dynamics);

// Adaptive integration of the moment equations for `duration`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum CvStatus cvsim_evolve(const struct CvDynamics *dynamics,
                           const struct CvState *state,
                           double duration,
                           double tolerance,
                           struct CvState **out);

// Exact discretized step `sigma -> P sigma P^T + W` over `duration`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum CvStatus cvsim_transition(const struct CvDynamics *dynamics,
                               const struct CvState *state,
                               double duration,
                               struct CvState **out);

// Row-major propagator `e^{A tau}` into `out` (`len >= 4 N^2`).
//
// # Safety
// `dynamics` must be live; `out` must hold `len` doubles.
enum CvStatus cvsim_propagator(const struct CvDynamics *dynamics,
                               double duration,
                               double *out,
                               size_t len);

// Stationary state; fails with `Unstable` for non-Hurwitz drifts.
//
// # Safety
// `dynamics` must be live; `out` must be writable.
enum CvStatus cvsim_steady_state(const struct CvDynamics *dynamics, struct CvState **out);

// Writes 1 to `hurwitz` when every drift eigenvalue has negative real part,
// and the largest real part to `abscissa`.
//
// # Safety
// `dynamics` must be live; both outputs must be writable.
enum CvStatus cvsim_hurwitz(const struct CvDynamics *dynamics, int32_t *hurwitz, double *abscissa);

// Total variance `Var(x_a + x_b) + Var(p_a - p_b)` of modes `a` and `b`.
//
// # Safety
// `state` must be live; `out` must be writable.
enum CvStatus cvsim_epr_variance(const struct CvState *state, size_t a, size_t b, double *out);

// Mean photon number of one mode.
//
// # Safety
// `state` must be live; `out` must be writable.
enum CvStatus cvsim_photon_number(const struct CvState *state, size_t mode, double *out);

// Closed-form stable variance of the dissipative scheme.
//
// # Safety
// `params` must be valid; `out` must be writable.
enum CvStatus cvsim_dissipative_steady_variance(const struct CvSchemeParams *params, double *out);

// Figure of merit of a scheme: cascaded final variance, parallel minimum
// over the first period, dissipative steady variance.
//
// # Safety
// `params` must be valid; `out` must be writable.
enum CvStatus cvsim_scheme_variance(const struct CvSchemeParams *params, double *out);

// Rates of a named device preset: `cascaded`, `cascaded-improved`,
// `parallel` or `dissipative`.
//
// # Safety
// `preset` must be a NUL-terminated string; `out` must be writable.
enum CvStatus cvsim_device_rates(const char *preset, struct CvRates *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CVSIM_H */
