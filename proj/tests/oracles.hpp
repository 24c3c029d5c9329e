/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Reference formulas written out from first principles, independent of the library code paths.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Similarity polynomials with the isentropic kappa substituted by hand (alpha = 0).
struct Poly {
  int n;
  double g, l;

  double eps() const { return g - 1.0; }
  double mu() const { return l - 1.0; }
  double vstar() const { return -2.0 * mu() / (n * eps()); }

  double F(double V, double C) const {
    const double v = 1.0 + V, m = n - 1.0, e = eps(), u = mu();
    const double k1 = 1.0 + m * e / 2.0;
    const double k2 = (m * e + (g - 3.0) * u) / 2.0;
    const double k3 = e * u / 2.0;
    return C * (C * C - k1 * v * v + k2 * v - k3);
  }
  double G(double V, double C) const { return n * C * C * (V - vstar()) - V * (1.0 + V) * (l + V); }

  // Centered differences, step h.
  std::array<double, 4> fd_partials(double V, double C, double h = 1e-6) const {
    return {(F(V + h, C) - F(V - h, C)) / (2 * h), (F(V, C + h) - F(V, C - h)) / (2 * h),
            (G(V + h, C) - G(V - h, C)) / (2 * h), (G(V, C + h) - G(V, C - h)) / (2 * h)};
  }
};

struct Root {
  double V, C;
};

// Damped Newton on (F, G) = 0 with analytic-free (finite-difference) Jacobian.
inline std::optional<Root> newton(const Poly& p, double V, double C, int iters = 80) {
  for (int k = 0; k < iters; ++k) {
    const double f = p.F(V, C), g = p.G(V, C);
    if (std::abs(f) + std::abs(g) < 1e-15) return Root{V, C};
    const auto J = p.fd_partials(V, C, 1e-7 * std::max(1.0, std::abs(V) + std::abs(C)));
    const double det = J[0] * J[3] - J[1] * J[2];
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
    double dV = (f * J[3] - g * J[1]) / det;
    double dC = (g * J[0] - f * J[2]) / det;
    double step = 1.0;
    const double res0 = std::hypot(f, g);
    while (step > 1e-6) {
      const double nV = V - step * dV, nC = C - step * dC;
      if (std::hypot(p.F(nV, nC), p.G(nV, nC)) < res0) break;
      step *= 0.5;
    }
    V -= step * dV;
    C -= step * dC;
    if (!std::isfinite(V) || !std::isfinite(C) || std::abs(V) > 1e3 || std::abs(C) > 1e3) return std::nullopt;
    if (step * (std::abs(dV) + std::abs(dC)) < 1e-16) return Root{V, C};
  }
  if (std::abs(p.F(V, C)) + std::abs(p.G(V, C)) < 1e-13) return Root{V, C};
  return std::nullopt;
}

// Roots found from a grid of seeds over [V0, V1] x [C0, C1], polished and deduplicated.
inline std::vector<Root> newton_roots(const Poly& p, int grid, double V0, double V1, double C0, double C1) {
  std::vector<Root> out;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double V = V0 + (V1 - V0) * (i + 0.5) / grid;
      const double C = C0 + (C1 - C0) * (j + 0.5) / grid;
      auto r = newton(p, V, C);
      if (!r) continue;
      bool seen = false;
      for (const auto& q : out)
        if (std::hypot(q.V - r->V, q.C - r->C) < 1e-7) seen = true;
      if (!seen) out.push_back(*r);
    }
  }
  return out;
}

inline const Root* nearest(const std::vector<Root>& roots, double V, double C) {
  const Root* best = nullptr;
  double d = INFINITY;
  for (const auto& r : roots) {
    const double e = std::hypot(r.V - V, r.C - C);
    if (e < d) d = e, best = &r;
  }
  return best;
}

// First-derivative weights at z for nodes xs (Fornberg's recursion).
inline std::vector<double> fornberg_d1(double z, const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1.0, c4 = xs[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

// Classical normal shock for a perfect gas at upstream Mach M: (u1/u0, rho1/rho0).
inline std::pair<double, double> normal_shock(double M, double gamma) {
  const double ratio = ((gamma - 1.0) * M * M + 2.0) / ((gamma + 1.0) * M * M);
  return {ratio, 1.0 / ratio};
}

// sigma_H written directly from the closed form.
inline double sigma_h(double s, double g) {
  const double h = (g - 1.0) / 2.0;
  return h + (g + 1.0) * (s - h) / (g - 3.0 - 4.0 * s);
}

// Relevant (gamma, lambda) draws for n, lambda taken inside a fraction of (1, lambda_circ).
inline double lambda_circ(int n, double g) {
  const double e = g - 1.0;
  const double hat = 1.0 + (n - 1) * e / ((g + 1.0) + std::sqrt(8.0 * e));
  if (n == 2) return g <= 2.0 ? hat : g * std::sqrt(2.0) / (g + std::sqrt(2.0) - 1.0);
  return g <= 5.0 / 3.0 ? hat : (3.0 * g - 1.0) / (std::sqrt(3.0) * e + 2.0);
}

}  // namespace oracle
