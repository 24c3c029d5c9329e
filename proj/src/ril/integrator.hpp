/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

#include <array>
#include <string>
#include <vector>

#include "ril/phaseplane.hpp"

namespace ril {

enum class Branch { Sigma, SigmaPrime, SigmaMirror, SigmaPrimeMirror, Perturbed, PerturbedMirror };
std::string branch_name(Branch branch, double ell);

struct TrajectorySample {
  double s = 0, V = 0, C = 0, lnx = 0, D = 0, F = 0, G = 0;
  double jac = 1.0;  // ds_field/ds: 1 in the (V, C) chart, C^-2 in the (w, z) chart
};

struct Trajectory {
  Branch branch = Branch::Sigma;
  double ell = kNaN;  // NaN for the vertical branch
  Label from = Label::P1, to = Label::P9;
  int sigma = -1;  // orientation sign of the desingularized field
  std::vector<TrajectorySample> samples;
  bool head_bridged = false;  // first sample placed analytically (node)
  bool tail_bridged = false;  // last sample placed analytically (node)

  // Diagnostics filled by the tracers.
  double crossing_V = kNaN;
  double crossing_C = kNaN;
  bool eye_entered = false;
  bool eye_trapped = false;
  double approach_slope = kNaN;
  double stable_residual = kNaN;
  int bisection_steps = 0;
  int stages = 0;

  bool vertical() const { return ell != ell; }
};

struct SeedDirection {
  bool vertical = true;
  double ell = kNaN;
  static SeedDirection vertical_branch() { return {}; }
  static SeedDirection slope(double l) { return {false, l}; }
};

struct TraceOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.004;
  double seed_distance = 1e-5;   // |C| at the departure from P1
  double node_radius = 1e-7;     // stop/bridge radius at P8, P9
  double departure_offset = 1e-2;  // first Sigma' seed distance from P9
  double chart_switch_c2 = 25.0;
  int bisection_budget = 80;
  double stage_separation = 1e-8;  // relative w-gap that ends a bisection stage
  double z_end = 1e-10;            // Sigma' stops once C^-2 falls below this
  std::size_t max_steps = 400000;
};

struct BarrierReport {
  double beta = kNaN, beta1 = kNaN, beta2 = kNaN;
  bool propA = false, propB = false, propC = false;
  double crossing_V = kNaN;
  double Z5 = kNaN, Z9 = kNaN;
  // Quadratics for n = 3 (NaN otherwise).
  double phi_at_zero = kNaN, phi_at_Z5 = kNaN, dphi_at_Z5 = kNaN;
  double psi_at_zero = kNaN, psi_at_Z9 = kNaN;
  double min_margin_B = kNaN;  // min over the grid of -(G + 2 beta1 C F)/Z
  double min_margin_C = kNaN;  // min over the grid of (G + 2 beta2 C F)/Z
};

struct GlobalTrajectory {
  SeedDirection seed;
  double x9 = 1.0;
  double x8 = -1.0;
  Trajectory lower_inner;  // P1 -> P9, x in (0, x9]
  Trajectory lower_outer;  // P9 -> P-inf
  Trajectory upper_inner;  // mirrored, P1 -> P8, stored with ln|x|
  Trajectory upper_outer;  // P8 -> P+inf
  double junction_gap = 0;  // largest phase-plane gap at P8/P9 junctions
  double origin_slope_lower = kNaN, origin_slope_upper = kNaN;
};

struct PerturbationRange {
  double tilt_max = kNaN;  // admissible |1/ell| in (0, tilt_max)
  double ell_min = kNaN;   // = 1/tilt_max
};

// (sigma G, sigma F, -sigma lambda D).
std::array<double, 3> desingularized_field(PhasePoint q, const Model& model, int sigma);

// Sigma (vertical) or a perturbed trace through P1 with slope ell; ends at P9 with lnx(P9) = 0.
Trajectory trace_sigma(const Model& model, SeedDirection seed, const TraceOptions& opt = {});

BarrierReport barrier_check(const Model& model, const TraceOptions& opt = {});

// Parabola quadratic for n = 3; phi uses beta1, psi uses beta2.
double barrier_quadratic(const Model& model, double beta, double Z);

// Sigma': P9 -> P-inf with lnx(P9) = 0.
Trajectory trace_sigma_prime(const Model& model, const TraceOptions& opt = {});

enum class AnchorAt { first, last };

// Shifts lnx so that the anchored sample sits at ln|x0|; enforces strict monotonicity.
Trajectory recover_x(Trajectory traj, AnchorAt where, double x0);

Trajectory mirror(const Trajectory& traj);

GlobalTrajectory assemble_gamma(const Model& model, SeedDirection seed, double x9 = 1.0,
                                const TraceOptions& opt = {});

// Nonzero x where V changes sign, ordered by x.
std::vector<double> stagnation_points(const GlobalTrajectory& gamma);

// Empirical range of tilts 1/ell for which both trace(ell) and trace(-ell) reach P9.
PerturbationRange perturbation_range(const Model& model, const TraceOptions& opt = {});

// Max scaled reduced-ODE residual over consecutive sample triples, skipping samples within
// exclusion of P1, P8 and P9 where the integrator's absolute tolerance dominates.
double reduced_residual(const Trajectory& traj, const Model& model, double exclusion = 1e-3);

struct OriginLimits {
  double nu = kNaN;
  double omega = kNaN;
};

// Limits of V/x and C/x at P1 from the samples nearest x = 0 (Richardson-type quadratic fit).
OriginLimits origin_limits(const Trajectory& traj);

// Least-squares slope dC/dV over samples whose distance to p lies in [r_lo, r_hi].
double fitted_slope(const Trajectory& traj, PhasePoint p, double r_lo, double r_hi);

}  // namespace ril
