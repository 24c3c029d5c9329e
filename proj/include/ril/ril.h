/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RIL_RIL_H
#define RIL_RIL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(RIL_BUILDING)
#define RIL_API __attribute__((visibility("default")))
#else
#define RIL_API
#endif

typedef enum ril_status {
  RIL_OK = 0,
  RIL_DOMAIN_ERROR = 1,
  RIL_DEGENERATE = 2,
  RIL_BARRIER_EXIT = 3,
  RIL_NO_NODE_CAPTURE = 4,
  RIL_BISECTION_STALL = 5,
  RIL_NON_MONOTONE = 6,
  RIL_KINK_AT_ORIGIN = 7,
  RIL_VACUUM_ENCOUNTER = 8,
  RIL_AT_SINGULARITY = 9,
  RIL_NOT_THROUGH_ORIGIN = 10,
  RIL_DIVERGENT_INTEGRAL = 11,
  RIL_SONIC_AHEAD = 12,
  RIL_NO_ADMISSIBLE_BRANCH = 13,
  RIL_AT_POLE = 14,
  RIL_INSUFFICIENT_OVERLAP = 15,
  RIL_IO_ERROR = 16,
  RIL_INVALID_ARGUMENT = 17,
  RIL_INTERNAL_ERROR = 99
} ril_status;

typedef struct ril_analysis ril_analysis;

typedef struct ril_options {
  int n;            /* 2 or 3 */
  double gamma;
  double lambda;
  int vertical;     /* nonzero: vertical branch through P1, ell ignored */
  double ell;
  double x9;        /* anchor of P9 on the x-axis, > 0 */
  double tol;       /* closest approach counted as a Hugoniot intersection */
} ril_options;

typedef struct ril_flow_sample {
  double t, r, rho, u, c, p, e, S_proxy;
} ril_flow_sample;

RIL_API const char* ril_version(void);
RIL_API const char* ril_status_name(ril_status status);
/* Message of the last failed call on this thread; empty if none. */
RIL_API const char* ril_last_error(void);

/* n = 3, gamma = 1.4, lambda = 1.05, vertical, x9 = 1, tol = 1e-6. */
RIL_API void ril_options_init(ril_options* opt);

/* Runs the full single-point pipeline. A handle is returned even when the parameters
   fall outside the proven regime; inspect ril_analysis_exit_code. */
RIL_API ril_status ril_analyze(const ril_options* opt, ril_analysis** out);
RIL_API void ril_analysis_destroy(ril_analysis* a);

/* 0 all checks pass, 2 outside the proven regime, 1 failure. */
RIL_API int ril_analysis_exit_code(const ril_analysis* a);
RIL_API int ril_analysis_traced(const ril_analysis* a);

/* Copies the JSON report into buf (NUL-terminated) if cap suffices; *len gets the length without NUL. */
RIL_API ril_status ril_analysis_report(const ril_analysis* a, char* buf, size_t cap, size_t* len);
RIL_API ril_status ril_analysis_write_report(const ril_analysis* a, const char* path);
RIL_API ril_status ril_analysis_write_trajectory(const ril_analysis* a, const char* path);
RIL_API ril_status ril_analysis_write_locus(const ril_analysis* a, const char* path);

RIL_API ril_status ril_evaluate(const ril_analysis* a, double t, double r, ril_flow_sample* out);

/* Field CSV on ts x log-spaced r; r_min = 0 adds the centre. (0, 0) is skipped and counted. */
RIL_API ril_status ril_write_field(const ril_analysis* a, const double* ts, size_t nt, double r_min, double r_max,
                                   size_t nr, int jobs, const char* path, size_t* excluded);

/* Per-point flags for lambda_steps interior points of (1, lambda_circ) at each gamma, and the
   per-gamma regime table. full != 0 runs the pipeline where the regime holds to get a verdict. */
RIL_API ril_status ril_sweep(int n, const double* gammas, size_t ng, int lambda_steps, int full, int jobs,
                             const char* points_path, const char* regime_path);

RIL_API ril_status ril_sigma_h(double slope, double gamma, double* out);

/* ahead/behind hold (V, C, R). */
RIL_API ril_status ril_rh_jump(const double ahead[3], double gamma, double behind[3], int* admissible,
                               double* entropy_jump);

#ifdef __cplusplus
}
#endif

#endif /* RIL_RIL_H */
