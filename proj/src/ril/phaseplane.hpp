/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

#include <limits>
#include <vector>

#include "ril/params.hpp"

namespace ril {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Presence/degeneracy tolerance on critical-point radicands.
inline constexpr double kRadicandTol = 1e-12;

struct PhasePoint {
  double V = 0;
  double C = 0;
};

struct FGD {
  double F = 0, G = 0, D = 0;
};

struct PartialDerivatives {
  double F_V = 0, F_C = 0, G_V = 0, G_C = 0;
};

// Similarity field for one validated parameter tuple.
class Model {
 public:
  explicit Model(const GasParams& p);

  const GasParams& params() const { return p_; }
  const DerivedConstants& constants() const { return d_; }
  int n() const { return p_.n; }
  double gamma() const { return p_.gamma; }
  double lambda() const { return p_.lambda; }

  double F(double V, double C) const {
    const double v = 1.0 + V;
    return C * (C * C * (1.0 + d_.alpha / v) - d_.k1 * v * v + d_.k2 * v - d_.k3);
  }
  double G(double V, double C) const {
    return p_.n * C * C * (V - d_.V_star) - V * (1.0 + V) * (p_.lambda + V);
  }
  static double D(double V, double C) { return (1.0 + V) * (1.0 + V) - C * C; }

  FGD fgd(PhasePoint q) const { return {F(q.V, q.C), G(q.V, q.C), D(q.V, q.C)}; }
  PartialDerivatives partials(PhasePoint q) const;

  // C^2 along {G = 0} as a function of V.
  double g_of_V(double V) const;

 private:
  GasParams p_;
  DerivedConstants d_;
};

FGD evaluate_fgd(PhasePoint q, const Model& model);
PartialDerivatives partials(PhasePoint q, const Model& model);

enum class Label { P1, P2, P3, P4, P5, P6, P7, P8, P9, PlusInf, MinusInf };
const char* label_name(Label label);

enum class PointKind { star, node, saddle, focus, at_infinity_saddle, absent, degenerate, unclassified };
const char* kind_name(PointKind kind);

struct CriticalPoint {
  Label label = Label::P1;
  PhasePoint location;
  int at_infinity = 0;  // +1 for C = +inf, -1 for C = -inf
  PointKind kind = PointKind::unclassified;
  double W = kNaN, R2 = kNaN;
  double L1 = kNaN, L2 = kNaN, E1 = kNaN, E2 = kNaN;
  PartialDerivatives d;
};

struct CriticalPointSet {
  std::vector<CriticalPoint> points;
  bool ordering_ok = false;  // -1 < V_-, V_4 < V_+ < V_* < 0

  const CriticalPoint& at(Label label) const;
  bool present(Label label) const;
};

struct TriplePointRoots {
  double V_plus = kNaN, V_minus = kNaN;
  double radicand = kNaN;
};

// Roots V_plus/V_minus of the triple-point quadratic.
TriplePointRoots triple_point_roots(const Model& model);
double v4(const Model& model);

CriticalPointSet critical_points(const Model& model);

// Throws Error(degenerate) when R2 vanishes within tolerance.
CriticalPoint classify(CriticalPoint cp, const Model& model);

struct SlopeOrdering {
  double g_slope = kNaN;  // -G_V/G_C
  double L1 = kNaN;
  double f_slope = kNaN;  // -F_V/F_C
  double L2 = kNaN;
  bool holds = false;
};

// Evaluated at P9.
SlopeOrdering slope_ordering(const Model& model);

// Lower half-plane layout of the zero sets for V > 0.
struct LayoutReport {
  double f_slope_inf = kNaN;  // limiting C/V along {F = 0}
  double g_slope_inf = kNaN;  // limiting C/V along {G = 0}
  bool p1 = false;            // both sets unbounded with constant slope, {G = 0} above {F = 0}
  bool p2 = false;            // G < 0 < F for fixed C < 0 as V -> +inf
};

LayoutReport layout_check(const Model& model);

struct InfinityChart {
  double A = kNaN, B = kNaN;
  double stable_slope = kNaN;  // (n + A)/B in the (w, z) chart
  double v_exponent = kNaN;    // |V - V*| ~ |x|^v_exponent
  double c_exponent = kNaN;    // |C| ~ |x|^c_exponent
};

InfinityChart infinity_chart(const Model& model);

// Linearized dz/dw at (w, z) = (V - V*, C^-2).
double infinity_chart_dzdw(double w, double z, const Model& model);

// Factored Wronskians K C^2 (V - V_a)(V - V_b) at P9 and P5.
double lazarus_w9(const Model& model);
double lazarus_w5(const Model& model);

}  // namespace ril
