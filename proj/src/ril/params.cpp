/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/params.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ril/error.hpp"

namespace ril {

namespace {

void check_n_gamma(int n, double gamma) {
  if (n != 2 && n != 3) throw Error(ErrorCode::domain, "n must be 2 or 3, got " + std::to_string(n));
  if (!(gamma > 1.0) || !(gamma <= kGammaMax))
    throw Error(ErrorCode::domain, "gamma must lie in (1, 100], got " + std::to_string(gamma));
}

// 1 + m eps / ((gamma + 1) + s sqrt(8 eps)) with s = +1 (hat) or -1 (check).
double hat_like(int n, double gamma, double s) {
  const double eps = gamma - 1.0;
  const double den = (gamma + 1.0) + s * std::sqrt(8.0 * eps);
  if (std::abs(den) < 1e-15) return std::numeric_limits<double>::infinity();
  return 1.0 + (n - 1) * eps / den;
}

}  // namespace

double kappa_isentropic(double gamma, double lambda) {
  if (!(gamma > 1.0)) throw Error(ErrorCode::domain, "gamma must exceed 1");
  if (!std::isfinite(lambda)) throw Error(ErrorCode::domain, "lambda must be finite");
  return -2.0 * (lambda - 1.0) / (gamma - 1.0);
}

void validate(const GasParams& p) {
  check_n_gamma(p.n, p.gamma);
  if (!(p.lambda > 1.0) || !std::isfinite(p.lambda))
    throw Error(ErrorCode::domain, "lambda must exceed 1, got " + std::to_string(p.lambda));
  if (!std::isfinite(p.kappa)) throw Error(ErrorCode::domain, "kappa must be finite");
}

GasParams make_isentropic(int n, double gamma, double lambda) {
  check_n_gamma(n, gamma);
  GasParams p{n, gamma, lambda, 0.0};
  if (!(lambda > 1.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::domain, "lambda must exceed 1, got " + std::to_string(lambda));
  p.kappa = kappa_isentropic(gamma, lambda);
  return p;
}

DerivedConstants derive(const GasParams& p) {
  DerivedConstants d;
  const double n = p.n, g = p.gamma, l = p.lambda, k = p.kappa;
  d.m = p.n - 1;
  d.mu = l - 1.0;
  d.eps = g - 1.0;
  d.V_star = (k - 2.0 * d.mu) / (n * g);
  d.k1 = 1.0 + d.m * d.eps / 2.0;
  d.k2 = (d.m * d.eps + (g - 3.0) * d.mu) / 2.0;
  d.k3 = d.eps * d.mu / 2.0;
  d.alpha = (d.mu + k * d.eps / 2.0) / g;
  d.A = 2.0 * (1.0 + d.alpha / (1.0 + d.V_star));
  d.B = d.V_star * (1.0 + d.V_star) * (l + d.V_star);
  d.K = d.m * (n * d.eps + 2.0);
  return d;
}

double gamma_plus() { return 3.0 * (13.0 + 4.0 * std::sqrt(10.0)); }

ThresholdReport lambda_thresholds(int n, double gamma) {
  check_n_gamma(n, gamma);
  ThresholdReport t;
  t.lambda_tilde = 1.0 + 0.5 * n * (1.0 - 1.0 / gamma);
  t.lambda_hat = hat_like(n, gamma, +1.0);
  t.lambda_check = hat_like(n, gamma, -1.0);
  if (n == 2) {
    t.lambda_star = t.lambda_hat;
    t.lambda_circ = gamma <= 2.0 ? t.lambda_hat
                                 : gamma * std::sqrt(2.0) / (gamma + std::sqrt(2.0) - 1.0);
  } else {
    t.lambda_star = gamma < gamma_plus() ? t.lambda_hat : t.lambda_tilde;
    t.lambda_circ = gamma <= 5.0 / 3.0
                        ? t.lambda_star
                        : (3.0 * gamma - 1.0) / (std::sqrt(3.0) * (gamma - 1.0) + 2.0);
  }
  return t;
}

ThresholdReport lambda_thresholds(int n, double gamma, double lambda) {
  ThresholdReport t = lambda_thresholds(n, gamma);
  const double q = q_radicand(n, gamma, lambda);
  t.q_n_positive = q > 0.0;
  t.relevant = is_relevant(n, gamma, lambda);
  return t;
}

double q_radicand(int n, double gamma, double lambda) {
  const double eps = gamma - 1.0, mu = lambda - 1.0, m = n - 1.0;
  return (eps - 2.0) * (eps - 2.0) * mu * mu - 2.0 * m * eps * (eps + 2.0) * mu + m * m * eps * eps;
}

double v_radicand(int n, double gamma, double lambda) {
  const double eps = gamma - 1.0, mu = lambda - 1.0, m = n - 1.0;
  const double r = (eps - 2.0) / (m * eps);
  return r * r * mu * mu - 2.0 * (eps + 2.0) * mu / (m * eps) + 1.0;
}

bool discriminant_positive(int n, double gamma, double lambda) {
  check_n_gamma(n, gamma);
  const double q = q_radicand(n, gamma, lambda);
  if (q < 0.0) throw Error(ErrorCode::domain, "radicand q_n is negative");
  const double g = gamma, mu = lambda - 1.0, sq = std::sqrt(q);
  if (n == 2) {
    const double lhs = 4.0 * (g - 2.0) * ((g + 1.0) * mu - (g - 1.0)) * sq;
    const double rhs = (-4.0 * g * g * g + 25.0 * g * g - 34.0 * g + 1.0) * mu * mu +
                       2.0 * (g * g - 1.0) * (4.0 * g - 3.0) * mu -
                       (4.0 * g - 9.0) * (g - 1.0) * (g - 1.0);
    return lhs < rhs;
  }
  const double lhs = (3.0 * g - 5.0) * ((g + 1.0) * mu - 2.0 * (g - 1.0)) * sq;
  const double rhs = -(3.0 * g - 5.0) * (g * g - 5.0 * g + 2.0) * mu * mu +
                     12.0 * (g - 1.0) * (g - 1.0) * (g + 1.0) * mu -
                     4.0 * (3.0 * g - 5.0) * (g - 1.0) * (g - 1.0);
  return lhs < rhs;
}

bool is_relevant(int n, double gamma, double lambda) {
  check_n_gamma(n, gamma);
  if (!(lambda > 1.0 + kGuardBand)) return false;
  const ThresholdReport t = lambda_thresholds(n, gamma);
  if (!below(lambda, t.lambda_circ)) return false;
  if (q_radicand(n, gamma, lambda) < 0.0) return false;
  return discriminant_positive(n, gamma, lambda);
}

}  // namespace ril
