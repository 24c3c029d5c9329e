/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/phaseplane.hpp"

#include <cmath>
#include <stdexcept>

#include "ril/error.hpp"

namespace ril {

Model::Model(const GasParams& p) : p_(p) {
  validate(p_);
  d_ = derive(p_);
}

PartialDerivatives Model::partials(PhasePoint q) const {
  const double V = q.V, C = q.C, v = 1.0 + V, l = p_.lambda;
  const double c2 = C * C, a = 1.0 + d_.alpha / v;
  const double h = c2 * a - d_.k1 * v * v + d_.k2 * v - d_.k3;
  PartialDerivatives r;
  r.G_V = p_.n * c2 - (v * (l + V) + V * (l + V) + V * v);
  r.G_C = 2.0 * p_.n * C * (V - d_.V_star);
  r.F_C = h + 2.0 * c2 * a;
  r.F_V = C * (-c2 * d_.alpha / (v * v) - 2.0 * d_.k1 * v + d_.k2);
  return r;
}

double Model::g_of_V(double V) const {
  return V * (1.0 + V) * (p_.lambda + V) / (p_.n * (V - d_.V_star));
}

FGD evaluate_fgd(PhasePoint q, const Model& model) { return model.fgd(q); }

PartialDerivatives partials(PhasePoint q, const Model& model) { return model.partials(q); }

const char* label_name(Label label) {
  static const char* names[] = {"P1", "P2", "P3", "P4", "P5", "P6",
                                "P7", "P8", "P9", "P+inf", "P-inf"};
  return names[static_cast<int>(label)];
}

const char* kind_name(PointKind kind) {
  switch (kind) {
    case PointKind::star: return "star";
    case PointKind::node: return "node";
    case PointKind::saddle: return "saddle";
    case PointKind::focus: return "focus";
    case PointKind::at_infinity_saddle: return "at-infinity-saddle";
    case PointKind::absent: return "absent";
    case PointKind::degenerate: return "degenerate";
    case PointKind::unclassified: return "unclassified";
  }
  return "unknown";
}

const CriticalPoint& CriticalPointSet::at(Label label) const {
  for (const auto& cp : points)
    if (cp.label == label) return cp;
  throw std::out_of_range(std::string("no critical point ") + label_name(label));
}

bool CriticalPointSet::present(Label label) const {
  for (const auto& cp : points)
    if (cp.label == label) return cp.kind != PointKind::absent;
  return false;
}

TriplePointRoots triple_point_roots(const Model& model) {
  const auto& p = model.params();
  const double g = p.gamma, k = p.kappa, mu = p.lambda - 1.0, m = p.n - 1.0;
  const double b = (g - 2.0) * mu + k - m * g;
  const double rad = (g - 2.0) * (g - 2.0) * mu * mu -
                     2.0 * (g * m * (g + 2.0) - k * (g - 2.0)) * mu + (g * m + k) * (g * m + k);
  TriplePointRoots r;
  r.radicand = rad;
  if (rad < -kRadicandTol) return r;
  const double s = rad > 0.0 ? std::sqrt(rad) : 0.0;
  r.V_plus = (b + s) / (2.0 * m * g);
  r.V_minus = (b - s) / (2.0 * m * g);
  return r;
}

double v4(const Model& model) {
  const auto& p = model.params();
  return -2.0 * p.lambda / (2.0 + p.n * (p.gamma - 1.0));
}

namespace {

CriticalPoint make_point(Label label, double V, double C) {
  CriticalPoint cp;
  cp.label = label;
  cp.location = {V, C};
  return cp;
}

CriticalPoint absent_point(Label label) {
  CriticalPoint cp = make_point(label, kNaN, kNaN);
  cp.kind = PointKind::absent;
  return cp;
}

void add_pair(CriticalPointSet& set, const Model& model, Label upper, Label lower, double V,
              bool degenerate_root) {
  const double g = std::isfinite(V) ? model.g_of_V(V) : kNaN;
  if (!std::isfinite(g) || g < -kRadicandTol) {
    set.points.push_back(absent_point(upper));
    set.points.push_back(absent_point(lower));
    return;
  }
  const double c = g > 0.0 ? std::sqrt(g) : 0.0;
  for (auto [label, C] : {std::pair{upper, c}, std::pair{lower, -c}}) {
    CriticalPoint cp = make_point(label, V, C);
    if (degenerate_root || g <= kRadicandTol) {
      cp.d = model.partials(cp.location);
      cp.kind = PointKind::degenerate;
    } else {
      try {
        cp = classify(cp, model);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate) throw;
        cp.kind = PointKind::degenerate;
      }
    }
    set.points.push_back(cp);
  }
}

}  // namespace

CriticalPointSet critical_points(const Model& model) {
  CriticalPointSet set;
  const auto& d = model.constants();
  const double l = model.lambda();

  CriticalPoint p1 = make_point(Label::P1, 0.0, 0.0);
  p1.kind = PointKind::star;
  p1.d = model.partials(p1.location);
  set.points.push_back(p1);
  for (auto [label, V] : {std::pair{Label::P2, -1.0}, std::pair{Label::P3, -l}}) {
    CriticalPoint cp = make_point(label, V, 0.0);
    cp.kind = PointKind::unclassified;
    cp.d = model.partials(cp.location);
    set.points.push_back(cp);
  }

  add_pair(set, model, Label::P4, Label::P5, v4(model), false);

  const TriplePointRoots roots = triple_point_roots(model);
  if (!std::isfinite(roots.V_plus)) {
    for (Label lab : {Label::P6, Label::P7, Label::P8, Label::P9}) set.points.push_back(absent_point(lab));
  } else {
    const bool deg = std::abs(roots.radicand) <= kRadicandTol;
    add_pair(set, model, Label::P6, Label::P7, roots.V_minus, deg);
    add_pair(set, model, Label::P8, Label::P9, roots.V_plus, deg);
  }

  for (auto [label, sign] : {std::pair{Label::PlusInf, 1}, std::pair{Label::MinusInf, -1}}) {
    CriticalPoint cp = make_point(label, d.V_star, 0.0);
    cp.at_infinity = sign;
    cp.kind = d.A > 0.0 ? PointKind::at_infinity_saddle : PointKind::unclassified;
    set.points.push_back(cp);
  }

  if (set.present(Label::P9) && set.present(Label::P5) && set.present(Label::P7)) {
    const double Vm = set.at(Label::P7).location.V, Vp = set.at(Label::P9).location.V;
    const double V4 = set.at(Label::P5).location.V;
    set.ordering_ok = -1.0 < Vm && -1.0 < V4 && Vm < Vp && V4 < Vp && Vp < d.V_star && d.V_star < 0.0;
  }
  return set;
}

CriticalPoint classify(CriticalPoint cp, const Model& model) {
  if (cp.label == Label::P1) {
    cp.kind = PointKind::star;
    cp.d = model.partials(cp.location);
    return cp;
  }
  if (cp.at_infinity != 0) {
    cp.kind = model.constants().A > 0.0 ? PointKind::at_infinity_saddle : PointKind::unclassified;
    return cp;
  }
  if (cp.label == Label::P2 || cp.label == Label::P3) {
    cp.kind = PointKind::unclassified;
    cp.d = model.partials(cp.location);
    return cp;
  }
  const PartialDerivatives d = model.partials(cp.location);
  cp.d = d;
  cp.W = d.F_C * d.G_V - d.F_V * d.G_C;
  const double tr = d.F_C + d.G_V;
  cp.R2 = tr * tr - 4.0 * cp.W;
  const double scale = std::max(1.0, tr * tr + 4.0 * std::abs(cp.W));
  if (std::abs(cp.R2) <= kRadicandTol * scale || std::abs(d.G_C) <= kRadicandTol)
    throw Error(ErrorCode::degenerate, std::string("classification undefined at ") + label_name(cp.label));
  if (cp.R2 < 0.0) {
    cp.kind = cp.W > 0.0 ? PointKind::focus : PointKind::degenerate;
    return cp;
  }
  const double R = std::sqrt(cp.R2);
  // Sign s chosen so that |E1| < |E2|; L1 shares it.
  const double s = std::abs(tr - R) <= std::abs(tr + R) ? -1.0 : 1.0;
  cp.E1 = (tr + s * R) / (2.0 * d.G_C);
  cp.E2 = (tr - s * R) / (2.0 * d.G_C);
  cp.L1 = (d.F_C - d.G_V + s * R) / (2.0 * d.G_C);
  cp.L2 = (d.F_C - d.G_V - s * R) / (2.0 * d.G_C);
  cp.kind = cp.W > 0.0 ? PointKind::node : PointKind::saddle;
  return cp;
}

SlopeOrdering slope_ordering(const Model& model) {
  const CriticalPointSet set = critical_points(model);
  SlopeOrdering s;
  if (!set.present(Label::P9)) return s;
  const CriticalPoint& p9 = set.at(Label::P9);
  if (p9.kind != PointKind::node && p9.kind != PointKind::saddle) return s;
  s.g_slope = -p9.d.G_V / p9.d.G_C;
  s.f_slope = -p9.d.F_V / p9.d.F_C;
  s.L1 = p9.L1;
  s.L2 = p9.L2;
  s.holds = s.g_slope < s.L1 && s.L1 < s.f_slope && s.f_slope < -1.0 && 0.0 < s.L2;
  return s;
}

LayoutReport layout_check(const Model& model) {
  const auto& d = model.constants();
  // Lower branches of the nontrivial zero sets, NaN where they do not exist.
  auto c_f = [&](double V) {
    const double v = 1.0 + V, num = d.k1 * v * v - d.k2 * v + d.k3, den = 1.0 + d.alpha / v;
    return num > 0.0 && den > 0.0 ? -std::sqrt(num / den) : kNaN;
  };
  auto c_g = [&](double V) { return -std::sqrt(model.g_of_V(V)); };

  LayoutReport r;
  bool above = true;
  for (int i = 0; i <= 1200; ++i) {
    const double V = std::pow(10.0, -6.0 + 12.0 * i / 1200.0);
    const double cf = c_f(V), cg = c_g(V);
    if (!(std::isfinite(cf) && std::isfinite(cg) && cg > cf)) above = false;
  }
  const double f5 = c_f(1e5) / 1e5, f6 = c_f(1e6) / 1e6;
  const double g5 = c_g(1e5) / 1e5, g6 = c_g(1e6) / 1e6;
  r.f_slope_inf = f6;
  r.g_slope_inf = g6;
  const bool settled = std::fabs(f6 - f5) <= 1e-3 * std::fabs(f6) && std::fabs(g6 - g5) <= 1e-3 * std::fabs(g6);
  r.p1 = above && settled && f6 < 0.0 && g6 < 0.0;

  r.p2 = true;
  for (double C : {-1e-2, -0.5, -1.0, -10.0})
    for (double V : {1e4, 1e6}) {
      const double Vs = V * std::max(1.0, C * C);
      if (!(model.G(Vs, C) < 0.0 && model.F(Vs, C) > 0.0)) r.p2 = false;
    }
  return r;
}

InfinityChart infinity_chart(const Model& model) {
  const auto& d = model.constants();
  InfinityChart c;
  c.A = d.A;
  c.B = d.B;
  c.stable_slope = (model.n() + d.A) / d.B;
  c.v_exponent = -d.A / model.lambda();
  c.c_exponent = d.A / (2.0 * model.lambda());
  return c;
}

double infinity_chart_dzdw(double w, double z, const Model& model) {
  const auto& d = model.constants();
  return d.A * z / (d.B * z - model.n() * w);
}

double lazarus_w9(const Model& model) {
  const TriplePointRoots r = triple_point_roots(model);
  const double C9 = -(1.0 + r.V_plus);
  return model.constants().K * C9 * C9 * (r.V_plus - v4(model)) * (r.V_plus - r.V_minus);
}

double lazarus_w5(const Model& model) {
  const TriplePointRoots r = triple_point_roots(model);
  const double V4 = v4(model);
  const double c2 = model.g_of_V(V4);
  return model.constants().K * c2 * (V4 - r.V_minus) * (V4 - r.V_plus);
}

}  // namespace ril
