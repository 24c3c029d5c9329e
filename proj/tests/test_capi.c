/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

/* Exercises the public C interface only; linked against the shared library. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "ril/ril.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_reference(void) {
  ril_options o;
  ril_analysis* a = NULL;
  ril_options_init(&o);
  EXPECT(o.n == 3 && o.gamma == 1.4 && o.lambda == 1.05 && o.vertical);
  EXPECT(ril_analyze(&o, &a) == RIL_OK);
  EXPECT(a != NULL);
  EXPECT(ril_analysis_exit_code(a) == 0);
  EXPECT(ril_analysis_traced(a) == 1);

  size_t len = 0;
  EXPECT(ril_analysis_report(a, NULL, 0, &len) == RIL_OK);
  EXPECT(len > 100);
  char* buf = malloc(len + 1);
  EXPECT(ril_analysis_report(a, buf, len + 1, &len) == RIL_OK);
  EXPECT(strstr(buf, "\"schema_version\"") != NULL);
  EXPECT(strstr(buf, "NoIntersection") != NULL);
  char small[8];
  EXPECT(ril_analysis_report(a, small, sizeof small, NULL) == RIL_INVALID_ARGUMENT);
  free(buf);

  ril_flow_sample s;
  EXPECT(ril_evaluate(a, 1.0, 0.5, &s) == RIL_OK);
  EXPECT(s.rho > 0.0 && s.c > 0.0);
  EXPECT(fabs(s.p - s.rho * s.c * s.c / 1.4) <= 1e-12 * s.p);
  EXPECT(ril_evaluate(a, 0.0, 0.5, &s) == RIL_OK);
  EXPECT(s.u == 0.0);
  EXPECT(ril_evaluate(a, 0.0, 0.0, &s) == RIL_AT_SINGULARITY);
  EXPECT(strlen(ril_last_error()) > 0);
  EXPECT(strcmp(ril_status_name(RIL_AT_SINGULARITY), "AtSingularity") == 0);
  EXPECT(ril_evaluate(a, 1.0, -1.0, &s) == RIL_INVALID_ARGUMENT);

  EXPECT(ril_analysis_write_report(a, "/nonexistent-dir/report.json") == RIL_IO_ERROR);
  ril_analysis_destroy(a);
}

static void test_out_of_regime(void) {
  ril_options o;
  ril_analysis* a = NULL;
  ril_options_init(&o);
  o.n = 2;
  o.lambda = 1.01;
  EXPECT(ril_analyze(&o, &a) == RIL_OK);
  EXPECT(ril_analysis_exit_code(a) == 2);
  EXPECT(ril_analysis_traced(a) == 0);
  ril_flow_sample s;
  EXPECT(ril_evaluate(a, 1.0, 1.0, &s) == RIL_INVALID_ARGUMENT);
  EXPECT(ril_analysis_write_trajectory(a, "unused.csv") == RIL_INVALID_ARGUMENT);
  ril_analysis_destroy(a);

  ril_options_init(&o);
  o.vertical = 0;
  o.ell = 0.0;
  a = NULL;
  EXPECT(ril_analyze(&o, &a) == RIL_INVALID_ARGUMENT);
  EXPECT(a == NULL);
  EXPECT(ril_analyze(NULL, &a) == RIL_INVALID_ARGUMENT);
  EXPECT(ril_analysis_exit_code(NULL) == 1);
}

static void test_shock_helpers(void) {
  double out = 0.0;
  EXPECT(ril_sigma_h(-2.0, 1.4, &out) == RIL_OK);
  EXPECT(fabs(out + 0.625) <= 1e-15);
  EXPECT(ril_sigma_h(-0.4, 1.4, &out) == RIL_AT_POLE);

  const double ahead[3] = {-3.0, 1.0, 1.0};
  double behind[3];
  int adm = 0;
  double jump = 0.0;
  EXPECT(ril_rh_jump(ahead, 1.4, behind, &adm, &jump) == RIL_OK);
  EXPECT(fabs((1.0 + behind[0]) / -2.0 - 0.375) <= 1e-14);
  EXPECT(fabs(behind[2] - 8.0 / 3.0) <= 1e-14);
  EXPECT(adm == 1 && jump > 0.0);
  const double slow[3] = {-0.5, -0.9, 1.0};
  EXPECT(ril_rh_jump(slow, 1.4, behind, &adm, &jump) == RIL_SONIC_AHEAD);
}

int main(void) {
  EXPECT(strlen(ril_version()) > 0);
  test_reference();
  test_out_of_regime();
  test_shock_helpers();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
