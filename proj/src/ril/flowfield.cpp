/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "ril/error.hpp"

namespace ril {

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

double r_of(double C_over_x, double c0, double eps) {
  return std::pow(C_over_x * C_over_x / c0, 1.0 / eps);
}

std::vector<TrajectorySample> merged(const Trajectory& inner, const Trajectory& outer) {
  std::vector<TrajectorySample> all;
  all.reserve(inner.samples.size() + outer.samples.size());
  for (const auto* t : {&inner, &outer})
    for (const auto& s : t->samples)
      if (all.empty() || s.lnx > all.back().lnx) all.push_back(s);
  return all;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

struct FlowField::Half {
  std::vector<double> lnx;
  Pchip V, lnC;
  double sign;  // sign of C on this half
  double x_first, V_first, C_first;
  double x_last, w_last, C_last;
  int origin_power;  // V ~ x^p below the first sample

  Half(const std::vector<TrajectorySample>& all, double V_star, bool vertical)
      : V(make(all, 0)), lnC(make(all, 1)) {
    sign = all.front().C < 0 ? -1.0 : 1.0;
    lnx.reserve(all.size());
    for (const auto& s : all) lnx.push_back(s.lnx);
    x_first = std::exp(all.front().lnx);
    V_first = all.front().V;
    C_first = all.front().C;
    x_last = std::exp(all.back().lnx);
    w_last = all.back().V - V_star;
    C_last = all.back().C;
    origin_power = vertical ? 2 : 1;
  }

  static Pchip make(const std::vector<TrajectorySample>& all, int which) {
    std::vector<double> xs, ys;
    xs.reserve(all.size());
    ys.reserve(all.size());
    for (const auto& s : all) {
      xs.push_back(s.lnx);
      ys.push_back(which == 0 ? s.V : std::log(std::fabs(s.C)));
    }
    return Pchip(std::move(xs), std::move(ys));
  }

  // (V, C) at |x| = ax.
  std::pair<double, double> at(double ax, double V_star, double lambda) const {
    const double L = std::log(ax);
    if (L < lnx.front()) {
      const double q = ax / x_first;
      return {V_first * std::pow(q, origin_power), C_first * q};
    }
    if (L > lnx.back()) {
      const double q = ax / x_last;
      return {V_star + w_last * std::pow(q, -2.0 / lambda), C_last * std::pow(q, 1.0 / lambda)};
    }
    return {V(L), sign * std::exp(lnC(L))};
  }
};

std::vector<double> density_similarity(const Trajectory& traj, double c0, double gamma) {
  if (!(c0 > 0.0)) throw Error(ErrorCode::invalid_argument, "c0 must be positive");
  std::vector<double> R;
  R.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double cx = s.C / std::exp(s.lnx);
    const double r = r_of(cx, c0, gamma - 1.0);
    if (!std::isfinite(cx) || cx == 0.0 || !(r > 0.0) || !std::isfinite(r))
      throw Error(ErrorCode::vacuum_encounter, "C/x vanishes along the branch");
    R.push_back(r);
  }
  return R;
}

CollapseProfile collapse_profile(const GlobalTrajectory& g) {
  const OriginLimits lim = origin_limits(g.lower_inner);
  CollapseProfile cp;
  cp.omega = lim.omega;
  cp.nu_fit = lim.nu;
  cp.vertical = g.seed.vertical;
  if (cp.vertical) {
    cp.nu = 0.0;
    cp.ell = kNaN;
  } else {
    cp.nu = lim.nu;
    cp.ell = lim.omega / lim.nu;
    cp.ell_consistent = std::fabs(cp.ell - g.seed.ell) <= 0.01 * std::fabs(g.seed.ell);
  }
  if (!(cp.omega < 0.0)) throw Error(ErrorCode::vacuum_encounter, "omega is not negative");
  return cp;
}

FlowField::FlowField(const Model& model, const GlobalTrajectory& g) : model_(model) {
  const double eps = model.gamma() - 1.0;
  const double V_star = model.constants().V_star;
  // R = 1 at the P9 anchor.
  const auto& node = g.lower_inner.samples.back();
  c0_ = std::pow(node.C / g.x9, 2);
  x9_ = g.x9;
  x8_ = g.x8;
  for (const auto* t : {&g.lower_inner, &g.lower_outer, &g.upper_inner, &g.upper_outer})
    density_similarity(*t, c0_, model.gamma());
  collapse_ = collapse_profile(g);
  R0_ = r_of(collapse_.omega, c0_, eps);
  lower_ = std::make_shared<const Half>(merged(g.lower_inner, g.lower_outer), V_star, collapse_.vertical);
  upper_ = std::make_shared<const Half>(merged(g.upper_inner, g.upper_outer), V_star, collapse_.vertical);
}

double FlowField::entropy_constant() const {
  const double l = model_.lambda();
  return c0_ / (l * l * model_.gamma());
}

double FlowField::x_inner() const { return std::max(lower_->x_first, upper_->x_first); }

Similarity FlowField::similarity(double x) const {
  if (x == 0.0) return {0.0, 0.0, R0_};
  const Half& h = x > 0.0 ? *lower_ : *upper_;
  const auto [V, C] = h.at(std::fabs(x), model_.constants().V_star, model_.lambda());
  return {V, C, r_of(C / x, c0_, model_.gamma() - 1.0)};
}

FlowSample FlowField::evaluate(double t, double r) const {
  if (t == 0.0 && r == 0.0) throw Error(ErrorCode::at_singularity, "(t, r) = (0, 0)");
  if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(t))
    throw Error(ErrorCode::invalid_argument, "r must be non-negative and finite");
  const double g = model_.gamma();
  const double l = model_.lambda();
  const double lnr = std::log(r);
  FlowSample s;
  s.t = t;
  s.r = r;
  if (r == 0.0) {
    // Centre at t != 0: C ~ K |x|^(1/lambda) makes rho and c finite and u vanish.
    const Half& h = t > 0.0 ? *lower_ : *upper_;
    const double K = h.C_last * std::pow(h.x_last, -1.0 / l);
    const double at = std::fabs(t);
    s.rho = std::pow(K * K * std::pow(at, 2.0 / l - 2.0) / c0_, 1.0 / (g - 1.0));
    s.u = 0.0;
    s.c = -K * std::pow(at, 1.0 / l) / (l * t);
  } else if (t == 0.0) {
    const double amp = std::exp((1.0 - l) * lnr) / l;
    s.rho = std::exp(model_.params().kappa * lnr) * R0_;
    s.u = collapse_.nu == 0.0 ? 0.0 : -collapse_.nu * amp;
    s.c = -collapse_.omega * amp;
  } else {
    const double x = t * std::exp(-l * lnr);
    const Similarity q = similarity(x);
    if (!(q.R > 0.0) || !std::isfinite(q.R)) throw Error(ErrorCode::vacuum_encounter, "density vanishes");
    const double k = -r / (l * t);
    s.rho = std::exp(model_.params().kappa * lnr) * q.R;
    s.u = k * q.V;
    s.c = k * q.C;
  }
  s.p = s.rho * s.c * s.c / g;
  s.e = s.c * s.c / (g * (g - 1.0));
  s.S_proxy = s.p / std::pow(s.rho, g);
  return s;
}

ConservedIntegrals conserved_integrals(const FlowField& field, double t, double r_max, int panels) {
  const Model& model = field.model();
  const double kn = model.params().kappa + model.n();
  if (!(kn > 0.0) || !(model.lambda() < 1.0 + 0.5 * kn))
    throw Error(ErrorCode::divergent_integral, "kappa + n <= 0 or lambda >= 1 + (kappa + n)/2");
  if (!(r_max > 0.0) || panels < 1) throw Error(ErrorCode::invalid_argument, "r_max and panels must be positive");
  const int m = model.n() - 1;

  auto integrand = [&](int which, double r) {
    const FlowSample s = field.evaluate(t, r);
    const double w = s.rho * std::pow(r, m);
    switch (which) {
      case 0: return w;
      case 1: return w * std::fabs(s.u);
      case 2: return w * s.u;
      default: return w * (0.5 * s.u * s.u + s.e);
    }
  };
  const double r_lo = r_max * 1e-8;
  // The field is only finitely smooth across the node, so a panel edge sits there.
  std::vector<double> edges{std::log(r_lo), std::log(r_max)};
  if (t != 0.0) {
    const double yn = std::log(t / field.x_node(t)) / model.lambda();
    if (yn > edges[0] && yn < edges[1]) edges.insert(edges.begin() + 1, yn);
  }
  auto one = [&](int which, int np) {
    const double span = edges.back() - edges.front();
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double a = edges[k], b = edges[k + 1];
      const int nk = std::max(1, static_cast<int>(std::ceil(np * (b - a) / span)));
      const double h = (b - a) / nk;
      for (int i = 0; i < nk; ++i) {
        sum += boost::math::quadrature::gauss<double, 10>::integrate(
            [&](double y) {
              const double r = std::exp(y);
              return integrand(which, r) * r;
            },
            a + i * h, a + (i + 1) * h);
      }
    }
    // Power-law tail on (0, r_lo).
    const double f0 = integrand(which, r_lo);
    if (f0 != 0.0) {
      const double f1 = integrand(which, 2.0 * r_lo);
      const double p = std::log(std::fabs(f1 / f0)) / std::log(2.0);
      if (!(p > -1.0)) throw Error(ErrorCode::divergent_integral, "integrand not integrable at r = 0");
      sum += f0 * r_lo / (p + 1.0);
    }
    return sum;
  };

  ConservedIntegrals out;
  double coarse[4], fine[4];
  for (int k = 0; k < 4; ++k) {
    coarse[k] = one(k, panels);
    fine[k] = one(k, 10 * panels);
  }
  out.mass = fine[0];
  out.momentum = fine[1];
  out.momentum_signed = fine[2];
  out.energy = fine[3];
  double conv = 0.0;
  for (int k : {0, 1, 3}) {
    const double scale = std::fabs(fine[k]);
    if (scale > 0.0) conv = std::max(conv, std::fabs(coarse[k] - fine[k]) / scale);
  }
  out.self_convergence = conv;
  return out;
}

IsentropyReport verify_isentropy(const FlowField& field, const std::vector<std::pair<double, double>>& grid) {
  IsentropyReport rep;
  rep.S_reference = field.entropy_constant();
  rep.rho_min = std::numeric_limits<double>::infinity();
  for (const auto& [t, r] : grid) {
    if (t == 0.0 && r == 0.0) continue;
    const FlowSample s = field.evaluate(t, r);
    rep.max_deviation = std::max(rep.max_deviation, std::fabs(s.S_proxy - rep.S_reference) / rep.S_reference);
    rep.rho_min = std::min(rep.rho_min, s.rho);
    ++rep.samples;
  }
  return rep;
}

CollapseCompression collapse_compression(const FlowField& field, double r, double dx) {
  const Model& m = field.model();
  const double l = m.lambda();
  const double h = dx * std::pow(r, l);
  const double dr = 1e-4 * r;
  const FlowSample s0 = field.evaluate(0.0, r);
  const FlowSample sp = field.evaluate(0.0, r + dr), sm = field.evaluate(0.0, r - dr);
  const double rho_t = (field.evaluate(h, r).rho - field.evaluate(-h, r).rho) / (2.0 * h);
  const double rho_r = (sp.rho - sm.rho) / (2.0 * dr);
  const double u_r = (sp.u - sm.u) / (2.0 * dr);
  const double nu = field.collapse().nu;
  CollapseCompression out;
  out.material_fd = rho_t + s0.u * rho_r;
  out.material_exact = -s0.rho * (nu / l) * (l - 1.0 - (m.n() - 1)) * std::pow(r, -l);
  out.gradient_fd = -s0.rho * u_r;
  out.gradient_formula = -std::pow(r, m.params().kappa - l) * field.R0() * (l - 1.0) * nu / l;
  return out;
}

double PowerFit::rel_error() const { return std::fabs(exponent - target) / std::fabs(target); }

std::pair<double, double> tail_exponents(const Trajectory& traj, const Model& model) {
  const double V_star = model.constants().V_star;
  const double L_end = traj.samples.back().lnx;
  std::vector<double> L, lw, lc;
  for (const auto& s : traj.samples) {
    if (s.lnx < L_end - std::log(100.0)) continue;
    L.push_back(s.lnx);
    lw.push_back(std::log(std::fabs(s.V - V_star)));
    lc.push_back(std::log(std::fabs(s.C)));
  }
  if (L.size() < 3) throw Error(ErrorCode::invalid_argument, "tail has too few samples");
  return {ls_slope(L, lw), ls_slope(L, lc)};
}

Asymptotics asymptotics(const FlowField& field, const GlobalTrajectory& g) {
  const Model& m = field.model();
  const double l = m.lambda();
  Asymptotics a;
  std::vector<double> lr, lrho, lu, lc;
  for (int i = 0; i <= 30; ++i) {
    const double r = std::pow(10.0, -6.0 + 0.1 * i);
    const FlowSample s = field.evaluate(0.0, r);
    lr.push_back(std::log(r));
    lrho.push_back(std::log(s.rho));
    lu.push_back(std::log(std::fabs(s.u)));
    lc.push_back(std::log(s.c));
  }
  a.rho_t0 = {ls_slope(lr, lrho), m.params().kappa};
  a.c_t0 = {ls_slope(lr, lc), 1.0 - l};
  if (!field.collapse().vertical) a.u_t0 = {ls_slope(lr, lu), 1.0 - l};

  const auto [ew, ec] = tail_exponents(g.lower_outer, m);
  a.tail_w = {ew, -2.0 / l};
  a.tail_c = {ec, 1.0 / l};

  a.u_slope = field.evaluate(1.0, 1e-6).u / 1e-6;
  a.u_slope_target = -m.constants().V_star / l;
  a.c_limit_ratio = field.evaluate(1.0, 1e-6).c / field.evaluate(1.0, 1e-4).c;

  double jump = 0.0;
  for (double r : {1e-3, 1e-2, 1e-1, 1.0}) {
    const FlowSample z = field.evaluate(0.0, r);
    for (double t : {-1e-9, 1e-9}) {
      const FlowSample s = field.evaluate(t, r);
      jump = std::max(jump, std::fabs(s.rho - z.rho) / z.rho);
      jump = std::max(jump, std::fabs(s.c - z.c) / z.c);
      jump = std::max(jump, std::fabs(s.u - z.u) / z.c);
    }
  }
  a.continuity_t0 = jump;
  return a;
}

}  // namespace ril
