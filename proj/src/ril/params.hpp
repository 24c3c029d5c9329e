/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

namespace ril {

// Relative guard band used whenever lambda is compared against a threshold.
inline constexpr double kGuardBand = 1e-9;

// Upper end of the accepted gamma range.
inline constexpr double kGammaMax = 100.0;

struct GasParams {
  int n = 3;
  double gamma = 1.4;
  double lambda = 1.05;
  double kappa = -0.25;
};

struct DerivedConstants {
  int m = 0;
  double mu = 0, eps = 0;
  double V_star = 0;
  double k1 = 0, k2 = 0, k3 = 0;
  double alpha = 0;
  double A = 0, B = 0;
  double K = 0;
};

struct ThresholdReport {
  double lambda_tilde = 0;
  double lambda_hat = 0;
  double lambda_check = 0;  // +inf at gamma = 3
  double lambda_star = 0;
  double lambda_circ = 0;
  bool q_n_positive = false;
  bool relevant = false;
};

double kappa_isentropic(double gamma, double lambda);

// Throws Error(domain) unless n in {2,3}, 1 < gamma <= kGammaMax, lambda > 1 and finite kappa.
void validate(const GasParams& p);

// Isentropic parameter tuple; validated.
GasParams make_isentropic(int n, double gamma, double lambda);

DerivedConstants derive(const GasParams& p);

// 3(13 + 4 sqrt 10), where lambda_star for n = 3 switches branch.
double gamma_plus();

ThresholdReport lambda_thresholds(int n, double gamma);

// Fills q_n_positive and relevant for a concrete lambda.
ThresholdReport lambda_thresholds(int n, double gamma, double lambda);

// Radicand q_n of the R9^2 inequality.
double q_radicand(int n, double gamma, double lambda);

// Radicand of V_plus/V_minus (isentropic form).
double v_radicand(int n, double gamma, double lambda);

bool discriminant_positive(int n, double gamma, double lambda);

bool is_relevant(int n, double gamma, double lambda);

// lambda strictly below threshold, with the guard band applied.
inline bool below(double lambda, double threshold) {
  return lambda < threshold * (1.0 - kGuardBand);
}

}  // namespace ril
