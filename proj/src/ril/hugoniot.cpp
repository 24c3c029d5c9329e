/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/hugoniot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ril/error.hpp"
#include "ril/flowfield.hpp"

namespace ril {

namespace {

double entropy(const ShockState& s, double gamma) {
  return s.C * s.C * std::pow(s.R, 1.0 - gamma) / gamma;
}

// Squared distance from p to segment ab, and the segment parameter of the foot.
double seg_dist2(PhasePoint p, PhasePoint a, PhasePoint b, double* u_out) {
  const double dx = b.V - a.V, dy = b.C - a.C;
  const double L2 = dx * dx + dy * dy;
  double u = L2 > 0.0 ? ((p.V - a.V) * dx + (p.C - a.C) * dy) / L2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  if (u_out) *u_out = u;
  const double ex = a.V + u * dx - p.V, ey = a.C + u * dy - p.C;
  return ex * ex + ey * ey;
}

double cross(PhasePoint o, PhasePoint a, PhasePoint b) {
  return (a.V - o.V) * (b.C - o.C) - (a.C - o.C) * (b.V - o.V);
}

bool segments_cross(PhasePoint a, PhasePoint b, PhasePoint c, PhasePoint d) {
  const double d1 = cross(c, d, a), d2 = cross(c, d, b);
  const double d3 = cross(a, b, c), d4 = cross(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

ShockPair rh_jump(const ShockState& ahead, double gamma) {
  if (!(gamma > 1.0)) throw Error(ErrorCode::invalid_argument, "gamma must exceed 1");
  const double eps = gamma - 1.0;
  const double v0 = 1.0 + ahead.V, c0 = ahead.C;
  const double v02 = v0 * v0, c02 = c0 * c0;
  ShockPair out;
  out.ahead = ahead;
  if (std::fabs(v02 - c02) <= 1e-14 * std::max(v02, c02)) {
    out.behind = ahead;  // sonic: only the trivial root
    return out;
  }
  if (v02 < c02) throw Error(ErrorCode::sonic_ahead, "ahead state is not supersonic in the shock frame");
  const double m = (v02 - c02) / c02;  // M^2 - 1
  const double M2 = 1.0 + m;
  const double v1 = v0 * (eps * M2 + 2.0) / ((gamma + 1.0) * M2);
  const double c12 = c02 + 0.5 * eps * (v02 - v1 * v1);
  if (!(c12 > 0.0) || v1 == v0) throw Error(ErrorCode::no_admissible_branch, "no compressive root");
  out.behind.V = v1 - 1.0;
  out.behind.C = std::copysign(std::sqrt(c12), c0);
  out.behind.R = ahead.R * v0 / v1;
  // ln(S1/S0) = ln(p1/p0) - gamma ln(R1/R0), each factor written as log1p of its small part.
  const double ln_ratio = std::log1p(2.0 * gamma * m / (gamma + 1.0)) +
                          gamma * std::log1p(-2.0 * m / ((gamma + 1.0) * M2));
  out.entropy_jump = entropy(ahead, gamma) * std::expm1(ln_ratio);
  // Behind Mach number: 1 - M1^2 = (gamma+1)/2 (M^2 - 1) / (gamma M^2 - (gamma-1)/2).
  const double sub = 0.5 * (gamma + 1.0) * m / (gamma * M2 - 0.5 * eps);
  out.admissible = out.behind.R > ahead.R && out.entropy_jump > 0.0 && sub > 0.0;
  return out;
}

std::array<double, 3> jump_residuals(const ShockPair& p, double gamma) {
  const double v0 = 1.0 + p.ahead.V, v1 = 1.0 + p.behind.V;
  const double c0 = p.ahead.C, c1 = p.behind.C;
  const double R0 = p.ahead.R, R1 = p.behind.R;
  const double mass = std::fabs(R0 * v0 - R1 * v1) / std::fabs(R0 * v0);
  const double m0 = R0 * (v0 * v0 + c0 * c0 / gamma), m1 = R1 * (v1 * v1 + c1 * c1 / gamma);
  const double mom = std::fabs(m0 - m1) / std::fabs(m0);
  const double e0 = 0.5 * v0 * v0 + c0 * c0 / (gamma - 1.0), e1 = 0.5 * v1 * v1 + c1 * c1 / (gamma - 1.0);
  const double en = std::fabs(e0 - e1) / std::fabs(e0);
  return {mass, mom, en};
}

double sigma_h(double s, double gamma) {
  const double h = 0.5 * (gamma - 1.0);
  const double den = gamma - 3.0 - 4.0 * s;
  if (std::fabs(den) <= 1e-14 * (std::fabs(gamma - 3.0) + 4.0 * std::fabs(s)) || den == 0.0)
    throw Error(ErrorCode::at_pole, "slope at the pole (gamma - 3)/4");
  return h + (gamma + 1.0) * (s - h) / den;
}

HugoniotLocus hugoniot_locus(const Trajectory& sigma, const Model& model, double c0, const LocusFitWindow& window) {
  const double gamma = model.gamma();
  const CriticalPoint p9 = classify(critical_points(model).at(Label::P9), model);
  const std::vector<double> R = density_similarity(sigma, c0, gamma);

  HugoniotLocus loc;
  loc.endpoint_target = p9.location;
  loc.slope_target = sigma_h(p9.L1, gamma);
  const std::size_t end = sigma.samples.size() - (sigma.tail_bridged ? 1 : 0);
  loc.samples.reserve(end);
  for (std::size_t i = 0; i < end; ++i) {
    const auto& s = sigma.samples[i];
    LocusSample ls;
    ls.x = std::exp(s.lnx);
    ls.pair = rh_jump({s.V, s.C, R[i]}, gamma);
    if (ls.pair.behind.V == s.V && ls.pair.behind.C == s.C) continue;  // sonic sample
    loc.all_admissible = loc.all_admissible && ls.pair.admissible;
    for (double r : jump_residuals(ls.pair, gamma)) loc.max_jump_residual = std::max(loc.max_jump_residual, r);
    loc.samples.push_back(ls);
  }
  if (loc.samples.empty()) throw Error(ErrorCode::insufficient_overlap, "no locus samples");

  const PhasePoint P9 = p9.location;
  auto dist = [&](const ShockState& b) { return std::hypot(b.V - P9.V, b.C - P9.C); };
  loc.endpoint_distance = dist(loc.samples.back().pair.behind);

  double sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (const auto& ls : loc.samples) {
    const auto& b = ls.pair.behind;
    const double d = dist(b);
    if (d < window.r_lo || d > window.r_hi) continue;
    if (!(b.V < P9.V)) loc.below_V9 = false;
    const double dv = b.V - P9.V, dc = b.C - P9.C;
    sxx += dv * dv;
    sxy += dv * dc;
    ++used;
  }
  if (used >= 3) loc.near_slope = sxy / sxx;
  return loc;
}

IntersectionVerdict intersection_test(const HugoniotLocus& locus, const std::vector<PhasePoint>& curve,
                                      const IntersectionOptions& opt) {
  const PhasePoint P = locus.endpoint_target;
  auto outside = [&](PhasePoint q) { return std::hypot(q.V - P.V, q.C - P.C) > opt.exclusion; };

  std::vector<PhasePoint> a;
  std::vector<double> ax;
  for (const auto& s : locus.samples) {
    const PhasePoint q{s.pair.behind.V, s.pair.behind.C};
    if (!outside(q)) continue;
    a.push_back(q);
    ax.push_back(s.x);
  }
  // Only the part of the curve that can reach the locus matters; its far tail runs off to |C| = inf.
  double box = 0.0;
  for (const auto& q : a) box = std::max(box, std::max(std::fabs(q.C), std::fabs(q.V)));
  std::vector<PhasePoint> b;
  for (const auto& q : curve)
    if (outside(q) && std::fabs(q.C) <= box + 1.0) b.push_back(q);

  IntersectionVerdict v;
  v.locus_used = a.size();
  v.curve_used = b.size();
  if (a.size() < 10 || b.size() < 10)
    throw Error(ErrorCode::insufficient_overlap, "fewer than 10 comparable samples");

  double vmax_a = -std::numeric_limits<double>::infinity(), vmin_b = std::numeric_limits<double>::infinity();
  for (const auto& q : a) vmax_a = std::max(vmax_a, q.V);
  for (const auto& q : b) vmin_b = std::min(vmin_b, q.V);
  v.v_gap = vmin_b - vmax_a;

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  bool crossed = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const double d2 = seg_dist2(a[i], b[j], b[j + 1], nullptr);
      if (d2 < best) {
        best = d2;
        best_i = i;
      }
      if (i + 1 < a.size() && segments_cross(a[i], a[i + 1], b[j], b[j + 1])) {
        crossed = true;
        best = 0.0;
        best_i = i;
      }
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      double u = 0.0;
      const double d2 = seg_dist2(b[j], a[i], a[i + 1], &u);
      if (d2 < best) {
        best = d2;
        best_i = u < 0.5 ? i : i + 1;
      }
    }
  }
  v.min_distance = std::sqrt(best);
  v.x_s = ax[best_i];
  v.intersects = crossed || v.min_distance < opt.tolerance;
  return v;
}

IntersectionVerdict intersection_test(const HugoniotLocus& locus, const Trajectory& sigma_prime,
                                      const IntersectionOptions& opt) {
  std::vector<PhasePoint> curve;
  curve.reserve(sigma_prime.samples.size());
  for (const auto& s : sigma_prime.samples) curve.push_back({s.V, s.C});
  return intersection_test(locus, curve, opt);
}

}  // namespace ril
