/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

#include <array>
#include <vector>

#include "ril/integrator.hpp"

namespace ril {

struct ShockState {
  double V = 0, C = 0, R = 1;
};

struct ShockPair {
  ShockState ahead, behind;
  bool admissible = false;
  double entropy_jump = 0;  // (C^2 R^(1-gamma))/gamma behind minus ahead
};

// Shock-frame jump relations in (v, c, R) = (1 + V, C, R); the compressive branch is selected.
ShockPair rh_jump(const ShockState& ahead, double gamma);

// Relative residuals of the mass, momentum and energy relations.
std::array<double, 3> jump_residuals(const ShockPair& pair, double gamma);

double sigma_h(double slope, double gamma);

struct LocusSample {
  double x = 0;
  ShockPair pair;
};

struct HugoniotLocus {
  std::vector<LocusSample> samples;  // ordered by x, x in (0, x9)
  PhasePoint endpoint_target;        // P9
  double endpoint_distance = kNaN;   // |P_H - P9| at the sample nearest x9
  double near_slope = kNaN;          // fitted dC/dV of the locus near P9
  double slope_target = kNaN;        // sigma_h(L1)
  bool all_admissible = true;
  bool below_V9 = true;              // behind states near P9 satisfy V < V9
  double max_jump_residual = 0;
};

// Window of distances from P9 used for the near-node slope fit.
struct LocusFitWindow {
  double r_lo = 1e-5;
  double r_hi = 1e-4;
};

HugoniotLocus hugoniot_locus(const Trajectory& sigma, const Model& model, double c0,
                             const LocusFitWindow& window = {});

struct IntersectionVerdict {
  bool intersects = false;
  double min_distance = kNaN;  // Euclidean, in the (V, C) plane
  double x_s = kNaN;           // locus parameter at the closest approach
  double v_gap = kNaN;         // min V on the curve minus max V on the locus, over the compared samples
  std::size_t locus_used = 0, curve_used = 0;
};

struct IntersectionOptions {
  double exclusion = 1e-3;  // radius around the shared endpoint P9 left out of the comparison
  double tolerance = 1e-6;  // closest approach below this counts as an intersection
};

IntersectionVerdict intersection_test(const HugoniotLocus& locus, const std::vector<PhasePoint>& curve,
                                      const IntersectionOptions& opt = {});
IntersectionVerdict intersection_test(const HugoniotLocus& locus, const Trajectory& sigma_prime,
                                      const IntersectionOptions& opt = {});

}  // namespace ril
