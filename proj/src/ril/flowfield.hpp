/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ril/integrator.hpp"

namespace ril {

struct FlowSample {
  double t = 0, r = 0, rho = 0, u = 0, c = 0, p = 0, e = 0, S_proxy = 0;
};

struct CollapseProfile {
  double nu = 0;       // lim V/x at x = 0 (0 on the vertical branch)
  double omega = kNaN; // lim C/x at x = 0
  double ell = kNaN;   // omega / nu, NaN when vertical
  bool vertical = true;
  double nu_fit = kNaN;      // raw fitted value, kept for the vertical branch too
  bool ell_consistent = true; // |omega/nu - ell_seed| <= 1% |ell_seed|
  double u_coeff() const { return -nu; }     // u(0,r) = u_coeff / lambda * r^(1-lambda)
  double c_coeff() const { return -omega; }  // c(0,r) = c_coeff / lambda * r^(1-lambda)
};

// R = ((C/x)^2 / c0)^(1/(gamma-1)) per sample.
std::vector<double> density_similarity(const Trajectory& traj, double c0, double gamma);

CollapseProfile collapse_profile(const GlobalTrajectory& gamma);

struct Similarity {
  double V = 0, C = 0, R = 0;
};

// Read-only evaluator over an assembled trajectory; safe to share between threads.
class FlowField {
 public:
  FlowField(const Model& model, const GlobalTrajectory& gamma);

  Similarity similarity(double x) const;
  FlowSample evaluate(double t, double r) const;

  const Model& model() const { return model_; }
  const CollapseProfile& collapse() const { return collapse_; }
  double c0() const { return c0_; }
  // p / rho^gamma implied by the exact integral.
  double entropy_constant() const;
  double R0() const { return R0_; }
  // Smallest |x| resolved by samples on either half, below which the origin laws apply.
  double x_inner() const;
  // x at the node junction on the half holding x (x9 for x > 0, x8 for x < 0).
  double x_node(double x) const { return x > 0.0 ? x9_ : x8_; }

 private:
  struct Half;
  Model model_;
  CollapseProfile collapse_;
  double c0_ = 1.0;
  double R0_ = 1.0;
  double x9_ = 1.0, x8_ = -1.0;
  std::shared_ptr<const Half> lower_, upper_;
};

struct ConservedIntegrals {
  double mass = kNaN;
  double momentum = kNaN;         // integral of rho |u| r^m
  double momentum_signed = kNaN;  // integral of rho u r^m
  double energy = kNaN;           // integral of rho (u^2/2 + e) r^m
  double self_convergence = kNaN; // max relative change between N and 10N panels
};

// Gauss-Legendre panels in ln r on [r_max 1e-8, r_max], split at the node radius, plus a power-law
// tail at r -> 0.
ConservedIntegrals conserved_integrals(const FlowField& field, double t, double r_max, int panels = 256);

struct IsentropyReport {
  double max_deviation = 0;  // max |S - S_ref| / S_ref
  double S_reference = kNaN;
  double rho_min = kNaN;
  std::size_t samples = 0;
};

IsentropyReport verify_isentropy(const FlowField& field, const std::vector<std::pair<double, double>>& grid);

struct CollapseCompression {
  double material_fd = kNaN;     // rho_t + u rho_r at t = 0, central differences of the interpolated field
  double material_exact = kNaN;  // -rho (u_r + m u / r) from the collapse profile
  double gradient_fd = kNaN;     // -rho u_r, central difference in r of u(0, r)
  double gradient_formula = kNaN;  // -(1/lambda) r^(kappa-lambda) R(0) (lambda-1) nu
};

// Density rate along particle paths at t = 0; the t-step is chosen so that |x| = dx.
CollapseCompression collapse_compression(const FlowField& field, double r, double dx = 1e-3);

struct PowerFit {
  double exponent = kNaN;
  double target = kNaN;
  double rel_error() const;
};

struct Asymptotics {
  PowerFit rho_t0, u_t0, c_t0;   // log-log slopes in r at t = 0
  PowerFit tail_w, tail_c;       // V - V* and C along Sigma' against |x|
  double u_slope = kNaN;         // u / r as r -> 0 at t = 1
  double u_slope_target = kNaN;  // -V* / lambda
  double c_limit_ratio = kNaN;   // c(1, 1e-6) / c(1, 1e-4), bounded -> 1
  double continuity_t0 = kNaN;   // max relative jump between t = +-1e-9 and t = 0 rows
};

Asymptotics asymptotics(const FlowField& field, const GlobalTrajectory& gamma);

// Log-log slopes of |V - V*| and |C| against |x| over the last two decades of the branch.
std::pair<double, double> tail_exponents(const Trajectory& traj, const Model& model);

}  // namespace ril
