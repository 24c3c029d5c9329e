/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "ril/error.hpp"
#include "ril/ode.hpp"

namespace ril {

namespace {

constexpr double kFar = 50.0;

std::string fmt_point(double V, double C) {
  std::ostringstream os;
  os.precision(10);
  os << "(V=" << V << ", C=" << C << ")";
  return os.str();
}

void require_relevant(const Model& model) {
  const auto& p = model.params();
  if (!is_relevant(p.n, p.gamma, p.lambda))
    throw Error(ErrorCode::domain, "parameters are outside the relevant band");
}

struct NodeInfo {
  PhasePoint p;
  double L1 = 0, L2 = 0;
  double slow_rate = 0;  // |(F_C + G_V - R)/2|
};

NodeInfo p9_info(const Model& model) {
  const CriticalPointSet set = critical_points(model);
  if (!set.present(Label::P9)) throw Error(ErrorCode::domain, "P9 is absent");
  const CriticalPoint& p9 = set.at(Label::P9);
  if (p9.kind != PointKind::node) throw Error(ErrorCode::domain, "P9 is not a node");
  NodeInfo info;
  info.p = p9.location;
  info.L1 = p9.L1;
  info.L2 = p9.L2;
  info.slow_rate = std::abs(0.5 * (p9.d.F_C + p9.d.G_V - std::sqrt(p9.R2)));
  return info;
}

TrajectorySample make_sample(const Model& model, double s, double V, double C, double lnx) {
  const FGD f = model.fgd({V, C});
  return {s, V, C, lnx, f.D, f.F, f.G};
}

// ln x increment from q to the node along the chord, using the linearized D/G (or D/F) ratio.
double bridge_lnx(const Model& model, PhasePoint node, PhasePoint q) {
  const double dV = q.V - node.V, dC = q.C - node.C;
  const PartialDerivatives d = model.partials(node);
  const double Dd = 2.0 * (1.0 + node.V) * dV - 2.0 * node.C * dC;
  const double Gd = d.G_V * dV + d.G_C * dC;
  const double Fd = d.F_V * dV + d.F_C * dC;
  if (std::abs(Gd) >= std::abs(Fd)) return model.lambda() * Dd / Gd * dV;
  return model.lambda() * Dd / Fd * dC;
}

void primal_rhs(const Model& model, int sigma, const double* x, double* f) {
  const double V = x[0], C = x[1];
  f[0] = sigma * model.G(V, C);
  f[1] = sigma * model.F(V, C);
  f[2] = -sigma * model.lambda() * Model::D(V, C);
}

// (w, z) = (V - V*, C^-2) chart, time tau with ds = z dtau; state (w, z, lnx, tau).
void chart_rhs(const Model& model, int sigma, const double* x, double* f) {
  const auto& d = model.constants();
  const double w = x[0], z = x[1];
  const double V = d.V_star + w, v = 1.0 + V, l = model.lambda();
  f[0] = sigma * (model.n() * w - z * V * v * (l + V));
  f[1] = -2.0 * sigma * z * ((1.0 + d.alpha / v) - z * (d.k1 * v * v - d.k2 * v + d.k3));
  f[2] = -sigma * l * (z * v * v - 1.0);
  f[3] = 1.0;
}

OdeOptions ode_options(const TraceOptions& opt) {
  OdeOptions o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_step = opt.max_step;
  return o;
}

double node_distance(PhasePoint a, double V, double C) { return std::hypot(V - a.V, C - a.C); }

// Integrates the sigma = -1 field from (V0, C0) into the node; samples start at the given point.
struct NodeRun {
  std::vector<TrajectorySample> samples;
};

NodeRun run_into_node(const Model& model, const NodeInfo& node, double V0, double C0,
                      const TraceOptions& opt) {
  NodeRun run;
  OdeSystem sys = [&model](const OdeState& x, OdeState& f, double) {
    primal_rhs(model, -1, x.data(), f.data());
  };
  DenseMarcher march(sys, {V0, C0, 0.0}, 0.0, ode_options(opt));
  run.samples.push_back(make_sample(model, 0.0, V0, C0, 0.0));
  for (std::size_t k = 0; k < opt.max_steps; ++k) {
    march.step();
    const auto& x = march.x();
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[0]) > kFar || std::abs(x[1]) > kFar)
      throw Error(ErrorCode::no_node_capture, "backward run left the bounded region");
    run.samples.push_back(make_sample(model, march.t(), x[0], x[1], x[2]));
    if (node_distance(node.p, x[0], x[1]) <= opt.node_radius) return run;
  }
  throw Error(ErrorCode::no_node_capture, "backward run not captured by P9 within the step budget");
}

// Appends the node itself with the bridged ln x and an s-value extrapolated from the slow rate.
void append_node(const Model& model, const NodeInfo& node, std::vector<TrajectorySample>& samples) {
  const TrajectorySample& q = samples.back();
  const double dist = node_distance(node.p, q.V, q.C);
  const double dlnx = bridge_lnx(model, node.p, {q.V, q.C});
  const double ds = std::log(std::max(dist, 1e-300) / 1e-16) / std::max(node.slow_rate, 1e-3);
  samples.push_back(make_sample(model, q.s + std::max(ds, 1.0), node.p.V, node.p.C, q.lnx + dlnx));
  samples.back().D = 0.0;
  samples.back().F = 0.0;
  samples.back().G = 0.0;
}

// ---- Sigma' machinery -------------------------------------------------------------------------

enum class Exit { none, G, F, deep, lost };

struct ChartPoint {
  bool chart = false;
  double a = 0, b = 0;  // (V, C) or (w, z)
  double lnx = 0, s = 0;
};

PhasePoint to_phase(const ChartPoint& p, const Model& model) {
  if (!p.chart) return {p.a, p.b};
  return {model.constants().V_star + p.a, -1.0 / std::sqrt(p.b)};
}

ChartPoint to_chart(const ChartPoint& p, const Model& model) {
  if (p.chart) return p;
  ChartPoint q = p;
  q.chart = true;
  q.a = p.a - model.constants().V_star;
  q.b = 1.0 / (p.b * p.b);
  return q;
}

Exit classify_point(const ChartPoint& p, const Model& model, double z_deep) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b)) return Exit::lost;
  const auto& d = model.constants();
  if (!p.chart) {
    const double V = p.a, C = p.b;
    if (std::abs(V) > kFar || C >= 0.0) return Exit::lost;
    if (model.G(V, C) <= 0.0) return Exit::G;
    if (model.F(V, C) >= 0.0 || V >= d.V_star) return Exit::F;
    return Exit::none;
  }
  const double w = p.a, z = p.b;
  if (z <= 0.0) return Exit::lost;
  const double V = d.V_star + w, v = 1.0 + V;
  const double gz = model.n() * w - z * V * v * (model.lambda() + V);
  const double h = (1.0 + d.alpha / v) - z * (d.k1 * v * v - d.k2 * v + d.k3);
  if (gz <= 0.0) return Exit::G;
  if (h <= 0.0 || w >= 0.0) return Exit::F;
  if (z <= z_deep) return Exit::deep;
  return Exit::none;
}

double separation(const ChartPoint& lo, const ChartPoint& hi, const Model& model) {
  if (!lo.chart) {
    const double scale = std::max(std::abs(lo.a - model.constants().V_star), 1e-300);
    return std::hypot(lo.a - hi.a, lo.b - hi.b) / scale;
  }
  return std::abs(lo.a - hi.a) / std::max(std::abs(lo.a), 1e-300) + std::abs(lo.b - hi.b) / lo.b;
}

// Step cap for Sigma' in the primal chart, where field rates grow like C^2.
double primal_cap(const TraceOptions& opt, double C) { return 0.15 * opt.max_step / std::max(1.0, C * C); }

struct BundleResult {
  std::vector<Exit> exits;
  std::vector<ChartPoint> samples;  // first member, excluding its seed
  bool separated = false;
};

// Marches one or two members of the sigma = +1 field in a shared chart and shared time.
BundleResult march_bundle(const Model& model, std::vector<ChartPoint> members, const TraceOptions& opt,
                          bool record, double sep_tol, double z_deep) {
  const std::size_t K = members.size();
  BundleResult out;
  out.exits.assign(K, Exit::none);
  for (std::size_t k = 0; k < K; ++k) out.exits[k] = classify_point(members[k], model, z_deep);
  for (Exit e : out.exits)
    if (e != Exit::none) return out;

  bool chart = members[0].chart;
  auto pack = [&](const std::vector<ChartPoint>& ms) {
    OdeState x;
    for (const auto& m : ms) {
      x.push_back(m.a);
      x.push_back(m.b);
      x.push_back(m.lnx);
      x.push_back(m.s);
    }
    return x;
  };
  auto unpack = [&](const OdeState& x) {
    std::vector<ChartPoint> ms(K);
    for (std::size_t k = 0; k < K; ++k) ms[k] = {chart, x[4 * k], x[4 * k + 1], x[4 * k + 2], x[4 * k + 3]};
    return ms;
  };
  auto make_system = [&model, K](bool in_chart) -> OdeSystem {
    return [&model, K, in_chart](const OdeState& x, OdeState& f, double) {
      for (std::size_t k = 0; k < K; ++k) {
        if (in_chart) {
          chart_rhs(model, 1, x.data() + 4 * k, f.data() + 4 * k);
        } else {
          primal_rhs(model, 1, x.data() + 4 * k, f.data() + 4 * k);
          f[4 * k + 3] = 1.0;
        }
      }
    };
  };
  OdeOptions oo = ode_options(opt);
  if (!chart) oo.max_step = primal_cap(opt, members[0].b);
  auto marcher = std::make_unique<DenseMarcher>(make_system(chart), pack(members), 0.0, oo);

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    marcher->step();
    std::vector<ChartPoint> ms = unpack(marcher->x());
    bool any = false;
    for (std::size_t k = 0; k < K; ++k) {
      out.exits[k] = classify_point(ms[k], model, z_deep);
      any = any || out.exits[k] != Exit::none;
    }
    if (K == 2 && separation(ms[0], ms[1], model) > sep_tol) {
      out.separated = true;
      return out;
    }
    if (any) {
      if (record && out.exits[0] == Exit::deep) out.samples.push_back(ms[0]);
      return out;
    }
    if (record) out.samples.push_back(ms[0]);
    if (!chart && ms[0].b * ms[0].b > opt.chart_switch_c2) {
      chart = true;
      for (auto& m : ms) m = to_chart(m, model);
      oo.max_step = opt.max_step;
      const double t = marcher->t();
      marcher = std::make_unique<DenseMarcher>(make_system(true), pack(ms), t, oo);
    } else if (!chart && primal_cap(opt, ms[0].b) < 0.5 * oo.max_step) {
      // Field rates grow like C^2 in the primal chart; keep the step cap proportional.
      oo.max_step = primal_cap(opt, ms[0].b);
      oo.initial_step = std::min(oo.max_step, marcher->t() - marcher->t_prev());
      const double t = marcher->t();
      marcher = std::make_unique<DenseMarcher>(make_system(false), marcher->x(), t, oo);
    }
  }
  out.exits.assign(K, Exit::lost);
  return out;
}

// Probes run far below z_end so that only trajectories on the stable manifold fail to exit.
Exit classify_seed(const Model& model, const ChartPoint& p, const TraceOptions& opt) {
  return march_bundle(model, {p}, opt, false, 0.0, opt.z_end * 1e-8).exits[0];
}

}  // namespace

std::string branch_name(Branch branch, double ell) {
  std::ostringstream os;
  switch (branch) {
    case Branch::Sigma: return "Sigma";
    case Branch::SigmaPrime: return "SigmaPrime";
    case Branch::SigmaMirror: return "SigmaMirror";
    case Branch::SigmaPrimeMirror: return "SigmaPrimeMirror";
    case Branch::Perturbed:
      os.precision(6);
      os << "Perturbed(" << ell << ")";
      return os.str();
    case Branch::PerturbedMirror:
      os.precision(6);
      os << "PerturbedMirror(" << ell << ")";
      return os.str();
  }
  return "Unknown";
}

std::array<double, 3> desingularized_field(PhasePoint q, const Model& model, int sigma) {
  std::array<double, 3> f{};
  const double x[3] = {q.V, q.C, 0.0};
  primal_rhs(model, sigma, x, f.data());
  return f;
}

Trajectory trace_sigma(const Model& model, SeedDirection seed, const TraceOptions& opt) {
  require_relevant(model);
  const auto& d = model.constants();
  const double l = model.lambda();
  const NodeInfo node = p9_info(model);
  const CriticalPointSet set = critical_points(model);
  const double V5 = set.at(Label::P5).location.V;
  const double beta = 2.0 * d.mu / (d.eps * l);
  const double beta1 = 2.0 * (2.0 + model.n() * d.eps) / (model.n() * l * d.eps * d.eps);
  const double beta2 = -node.p.V / ((1.0 + node.p.V) * (1.0 + node.p.V));

  Trajectory tr;
  tr.branch = seed.vertical ? Branch::Sigma : Branch::Perturbed;
  tr.ell = seed.vertical ? kNaN : seed.ell;
  tr.from = Label::P1;
  tr.to = Label::P9;
  tr.sigma = -1;
  tr.tail_bridged = true;

  if (!seed.vertical && !(std::isfinite(seed.ell) && seed.ell != 0.0))
    throw Error(ErrorCode::invalid_argument, "slope ell must be finite and nonzero");
  const double C0 = -opt.seed_distance;
  const double V0 = seed.vertical ? -beta * C0 * C0 : C0 / seed.ell;

  OdeSystem sys = [&model](const OdeState& x, OdeState& f, double) {
    primal_rhs(model, -1, x.data(), f.data());
  };
  DenseMarcher march(sys, {V0, C0, 0.0}, 0.0, ode_options(opt));
  tr.samples.push_back(make_sample(model, 0.0, V0, C0, 0.0));

  bool captured = false, crossed = false;
  double prevG = tr.samples.back().G;
  for (std::size_t k = 0; k < opt.max_steps && !captured; ++k) {
    march.step();
    const auto& x = march.x();
    const double V = x[0], C = x[1];
    if (!std::isfinite(V) || !std::isfinite(C) || std::abs(V) > kFar || std::abs(C) > kFar)
      throw Error(ErrorCode::no_node_capture, "trajectory left the bounded region at " + fmt_point(V, C));
    if (C >= 0.0)
      throw Error(ErrorCode::no_node_capture, "trajectory left the lower half-plane at " + fmt_point(V, C));
    const TrajectorySample smp = make_sample(model, march.t(), V, C, x[2]);
    const double dist = node_distance(node.p, V, C);
    if (smp.D <= 0.0)
      throw Error(ErrorCode::non_monotone,
                  "sonic line crossed away from the triple point at " + fmt_point(V, C));
    if (seed.vertical && !crossed && V > node.p.V && V < 0.0) {
      if (!(-beta1 * C * C < V && V < -beta2 * C * C))
        throw Error(ErrorCode::barrier_exit, "Sigma left the barrier region at " + fmt_point(V, C));
    }
    if (!crossed && prevG > 0.0 && smp.G <= 0.0) {
      const double tc = march.locate([&model](const OdeState& s) { return model.G(s[0], s[1]); });
      const OdeState sc = march.at(tc);
      tr.crossing_V = sc[0];
      tr.crossing_C = sc[1];
      crossed = true;
    }
    prevG = smp.G;
    const bool in_eye = smp.G < 0.0 && smp.F > 0.0 && V5 < V && V < node.p.V;
    if (in_eye && !tr.eye_entered) {
      tr.eye_entered = true;
      tr.eye_trapped = true;
    } else if (tr.eye_entered && !in_eye && dist > opt.node_radius) {
      tr.eye_trapped = false;
    }
    tr.samples.push_back(smp);
    captured = dist <= opt.node_radius;
  }
  if (!captured) throw Error(ErrorCode::no_node_capture, "P9 not reached within the step budget");

  for (double hi = 10.0; hi <= 1e5 && !(tr.approach_slope == tr.approach_slope); hi *= 10.0)
    tr.approach_slope = fitted_slope(tr, node.p, opt.node_radius, hi * opt.node_radius);

  append_node(model, node, tr.samples);
  const double shift = -tr.samples.back().lnx;
  for (auto& s : tr.samples) s.lnx += shift;
  return tr;
}

double barrier_quadratic(const Model& model, double b, double Z) {
  const auto& d = model.constants();
  const double eps = d.eps, mu = d.mu, l = model.lambda();
  return (2.0 * eps + 1.0) * b * b * Z * Z + (1.0 + ((mu - 2.0) * eps - (mu + 2.0)) * b) * Z +
         (l - 2.0 * mu / (b * eps));
}

BarrierReport barrier_check(const Model& model, const TraceOptions& opt) {
  const auto& d = model.constants();
  const double l = model.lambda();
  const int n = model.n();
  BarrierReport r;
  r.beta = 2.0 * d.mu / (d.eps * l);
  r.beta1 = 2.0 * (2.0 + n * d.eps) / (n * l * d.eps * d.eps);
  const TriplePointRoots roots = triple_point_roots(model);
  if (!std::isfinite(roots.V_plus)) return r;
  r.beta2 = -roots.V_plus / ((1.0 + roots.V_plus) * (1.0 + roots.V_plus));
  r.propA = r.beta1 > r.beta && r.beta > r.beta2;

  const double V4 = v4(model);
  r.Z5 = model.g_of_V(V4);
  r.Z9 = (1.0 + roots.V_plus) * (1.0 + roots.V_plus);

  // Direct form on the parabolas V = -b Z, C = -sqrt(Z): G + 2 b C F < 0 on Pi1, > 0 on Pi2.
  const int N = 1000;
  double mB = std::numeric_limits<double>::infinity(), mC = mB;
  if (r.Z5 > 0.0) {
    for (int i = 1; i < N; ++i) {
      const double Z = r.Z5 * i / N, C = -std::sqrt(Z), V = -r.beta1 * Z;
      mB = std::min(mB, -(model.G(V, C) + 2.0 * r.beta1 * C * model.F(V, C)) / Z);
    }
  }
  for (int i = 1; i < N; ++i) {
    const double Z = r.Z9 * i / N, C = -std::sqrt(Z), V = -r.beta2 * Z;
    mC = std::min(mC, (model.G(V, C) + 2.0 * r.beta2 * C * model.F(V, C)) / Z);
  }
  r.min_margin_B = r.Z5 > 0.0 ? mB : kNaN;
  r.min_margin_C = mC;
  r.propB = r.Z5 > 0.0 && mB > 0.0;
  r.propC = mC > 0.0;

  if (n == 3) {
    r.phi_at_zero = barrier_quadratic(model, r.beta1, 0.0);
    r.phi_at_Z5 = barrier_quadratic(model, r.beta1, r.Z5);
    const double h = 1e-6 * r.Z5;
    r.dphi_at_Z5 = (barrier_quadratic(model, r.beta1, r.Z5 + h) -
                    barrier_quadratic(model, r.beta1, r.Z5 - h)) / (2.0 * h);
    r.psi_at_zero = barrier_quadratic(model, r.beta2, 0.0);
    r.psi_at_Z9 = barrier_quadratic(model, r.beta2, r.Z9);
  }

  const auto& p = model.params();
  if (r.propA && r.propB && r.propC && is_relevant(p.n, p.gamma, p.lambda)) {
    try {
      r.crossing_V = trace_sigma(model, SeedDirection::vertical_branch(), opt).crossing_V;
    } catch (const Error&) {
      r.crossing_V = kNaN;
    }
  }
  return r;
}

Trajectory trace_sigma_prime(const Model& model, const TraceOptions& opt) {
  require_relevant(model);
  const NodeInfo node = p9_info(model);
  const double r0 = opt.departure_offset;
  const double n1 = std::hypot(1.0, node.L1), n2 = std::hypot(1.0, node.L2);
  const PhasePoint e1{1.0 / n1, node.L1 / n1}, e2{1.0 / n2, node.L2 / n2};
  auto departure = [&](double eta) {
    return ChartPoint{false, node.p.V + r0 * e1.V + eta * e2.V, node.p.C + r0 * e1.C + eta * e2.C, 0.0, 0.0};
  };

  Trajectory tr;
  tr.branch = Branch::SigmaPrime;
  tr.from = Label::P9;
  tr.to = Label::MinusInf;
  tr.sigma = 1;
  tr.head_bridged = true;

  // Stage 1 bracket: scan departure offsets transverse to the primary direction.
  const int scan = 36;
  double lo = kNaN, hi = kNaN;
  Exit elo = Exit::none, ehi = Exit::none;
  {
    double prev_eta = -0.9 * r0;
    Exit prev = classify_seed(model, departure(prev_eta), opt);
    for (int i = 1; i <= scan; ++i) {
      const double eta = -0.9 * r0 + 1.8 * r0 * i / scan;
      const Exit e = classify_seed(model, departure(eta), opt);
      if ((prev == Exit::G && e == Exit::F) || (prev == Exit::F && e == Exit::G)) {
        lo = prev_eta;
        hi = eta;
        elo = prev;
        ehi = e;
        break;
      }
      prev = e;
      prev_eta = eta;
    }
  }
  if (!std::isfinite(lo)) throw Error(ErrorCode::bisection_stall, "no departure bracket around P9");

  std::function<ChartPoint(double)> family = departure;
  std::vector<ChartPoint> forward;
  ChartPoint first_seed;
  double last_depth = std::numeric_limits<double>::infinity();
  int stalls = 0;
  bool done = false;

  for (int stage = 0; stage < 200 && !done; ++stage) {
    // Bisection inside the bracket.
    bool deep = false;
    for (int k = 0; k < opt.bisection_budget; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const Exit e = classify_seed(model, family(mid), opt);
      ++tr.bisection_steps;
      if (e == Exit::deep) {
        lo = hi = mid;
        deep = true;
        break;
      }
      if (e == elo) {
        lo = mid;
      } else if (e == ehi) {
        hi = mid;
      } else {
        throw Error(ErrorCode::bisection_stall, "probe trajectory left the region without a classified exit");
      }
    }
    if (stage == 0) {
      first_seed = family(lo);
      forward.push_back(first_seed);
    }

    BundleResult pair = deep ? march_bundle(model, {family(lo)}, opt, true, 0.0, opt.z_end)
                             : march_bundle(model, {family(lo), family(hi)}, opt, true, opt.stage_separation, opt.z_end);
    ++tr.stages;
    forward.insert(forward.end(), pair.samples.begin(), pair.samples.end());
    if (!pair.exits.empty() && pair.exits[0] == Exit::deep && !pair.separated) {
      done = true;
      break;
    }
    if (forward.size() < 2) throw Error(ErrorCode::bisection_stall, "Sigma' made no progress");
    const ChartPoint T = forward.back();
    const double depth = T.chart ? T.b : 1.0 / (T.b * T.b);
    if (depth < last_depth * (1.0 - 1e-6)) {
      stalls = 0;
      last_depth = depth;
    } else if (++stalls >= 3) {
      throw Error(ErrorCode::bisection_stall, "Sigma' bisection stages stopped gaining depth");
    }

    // Next family: vary the first chart coordinate at the truncation level.
    family = [T](double u) {
      ChartPoint p = T;
      p.a = u;
      return p;
    };
    double h = std::max(opt.stage_separation * std::abs(T.a), 4.0 * std::numeric_limits<double>::epsilon() * std::abs(T.a));
    bool bracketed = false;
    for (int k = 0; k < 80 && !bracketed; ++k, h *= 2.0) {
      const Exit a = classify_seed(model, family(T.a - h), opt);
      const Exit b = classify_seed(model, family(T.a + h), opt);
      if ((a == Exit::G && b == Exit::F) || (a == Exit::F && b == Exit::G)) {
        lo = T.a - h;
        hi = T.a + h;
        elo = a;
        ehi = b;
        bracketed = true;
      } else if (a == Exit::deep || b == Exit::deep) {
        lo = hi = (a == Exit::deep) ? T.a - h : T.a + h;
        elo = ehi = Exit::deep;
        bracketed = true;
      }
    }
    if (!bracketed) throw Error(ErrorCode::bisection_stall, "could not re-bracket Sigma' at the truncation level");
    forward.pop_back();  // the continuation seed replaces the truncation sample
  }
  if (!done) throw Error(ErrorCode::bisection_stall, "Sigma' did not reach the stable subspace");

  // Backward run from the stage-1 seed into P9, then bridge to the node.
  const PhasePoint s0 = to_phase(first_seed, model);
  NodeRun back = run_into_node(model, node, s0.V, s0.C, opt);
  append_node(model, node, back.samples);
  const double node_lnx = back.samples.back().lnx;
  const double node_s = back.samples.back().s;
  for (auto it = back.samples.rbegin(); it != back.samples.rend(); ++it) {
    TrajectorySample smp = *it;
    smp.lnx -= node_lnx;
    smp.s = -(smp.s - node_s) + 0.0;
    tr.samples.push_back(smp);
  }
  // tr.samples ends at the seed (lnx = -node_lnx, s = node_s shifted); forward samples follow.
  const double s_seed = tr.samples.back().s;
  for (std::size_t i = 1; i < forward.size(); ++i) {
    const ChartPoint& c = forward[i];
    const PhasePoint q = to_phase(c, model);
    tr.samples.push_back(make_sample(model, s_seed + c.s, q.V, q.C, c.lnx - node_lnx));
    if (c.chart) tr.samples.back().jac = c.b;
  }
  // Keep the first sample exactly at the node.
  tr.samples.front().D = tr.samples.front().F = tr.samples.front().G = 0.0;
  const double s_node = tr.samples.front().s;
  for (auto& s : tr.samples) s.s -= s_node;

  const ChartPoint& tail = forward.back();
  const InfinityChart ic = infinity_chart(model);
  if (tail.chart) tr.stable_residual = std::abs(tail.b - ic.stable_slope * tail.a) / tail.b;
  return tr;
}

Trajectory recover_x(Trajectory traj, AnchorAt where, double x0) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw Error(ErrorCode::invalid_argument, "anchor must be a positive |x|");
  if (traj.samples.empty()) throw Error(ErrorCode::invalid_argument, "empty trajectory");
  const double ref = where == AnchorAt::first ? traj.samples.front().lnx : traj.samples.back().lnx;
  const double shift = std::log(x0) - ref;
  for (auto& s : traj.samples) s.lnx += shift;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    if (!(traj.samples[i].lnx > traj.samples[i - 1].lnx)) {
      std::ostringstream os;
      os << "ln|x| not strictly increasing at sample " << i << " (" << traj.samples[i - 1].lnx << " -> "
         << traj.samples[i].lnx << ")";
      throw Error(ErrorCode::non_monotone, os.str());
    }
  }
  return traj;
}

Trajectory mirror(const Trajectory& traj) {
  Trajectory m = traj;
  for (auto& s : m.samples) {
    s.C = -s.C;
    s.F = -s.F;
  }
  switch (traj.branch) {
    case Branch::Sigma: m.branch = Branch::SigmaMirror; break;
    case Branch::SigmaPrime: m.branch = Branch::SigmaPrimeMirror; break;
    case Branch::Perturbed: m.branch = Branch::PerturbedMirror; break;
    case Branch::SigmaMirror: m.branch = Branch::Sigma; break;
    case Branch::SigmaPrimeMirror: m.branch = Branch::SigmaPrime; break;
    case Branch::PerturbedMirror: m.branch = Branch::Perturbed; break;
  }
  auto flip = [](Label l) {
    switch (l) {
      case Label::P9: return Label::P8;
      case Label::P8: return Label::P9;
      case Label::MinusInf: return Label::PlusInf;
      case Label::PlusInf: return Label::MinusInf;
      default: return l;
    }
  };
  m.from = flip(traj.from);
  m.to = flip(traj.to);
  if (traj.ell == traj.ell) m.ell = -traj.ell;
  m.crossing_C = -traj.crossing_C;
  m.approach_slope = -traj.approach_slope;
  return m;
}

OriginLimits origin_limits(const Trajectory& traj) {
  if (traj.samples.size() < 4 || traj.from != Label::P1)
    throw Error(ErrorCode::not_through_origin, "branch does not start at P1");
  const double x_first = std::exp(traj.samples.front().lnx);
  std::vector<double> xs, vs, cs;
  for (const auto& s : traj.samples) {
    const double x = std::exp(s.lnx);
    if (x > 10.0 * x_first) break;
    xs.push_back(x);
    vs.push_back(s.V / x);
    cs.push_back(s.C / x);
  }
  if (xs.size() < 4) throw Error(ErrorCode::not_through_origin, "too few samples near P1");
  // Quadratic least squares in x; the constant term is the limit.
  auto fit0 = [&](const std::vector<double>& y) {
    double S[5] = {0, 0, 0, 0, 0}, T[3] = {0, 0, 0};
    const double xs0 = xs.back();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double u = xs[i] / xs0;
      double p = 1.0;
      for (int k = 0; k < 5; ++k) {
        S[k] += p;
        if (k < 3) T[k] += p * y[i];
        p *= u;
      }
    }
    const double M[3][3] = {{S[0], S[1], S[2]}, {S[1], S[2], S[3]}, {S[2], S[3], S[4]}};
    auto det3 = [](const double A[3][3]) {
      return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
             A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    };
    double N[3][3];
    for (int i = 0; i < 3; ++i) {
      N[i][0] = T[i];
      N[i][1] = M[i][1];
      N[i][2] = M[i][2];
    }
    return det3(N) / det3(M);
  };
  return {fit0(vs), fit0(cs)};
}

double fitted_slope(const Trajectory& traj, PhasePoint p, double r_lo, double r_hi) {
  double sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& s : traj.samples) {
    const double dV = s.V - p.V, dC = s.C - p.C, r = std::hypot(dV, dC);
    if (r >= r_lo && r <= r_hi) {
      sxx += dV * dV;
      sxy += dV * dC;
      ++count;
    }
  }
  return count >= 3 ? sxy / sxx : kNaN;
}

GlobalTrajectory assemble_gamma(const Model& model, SeedDirection seed, double x9, const TraceOptions& opt) {
  if (!(x9 > 0.0)) throw Error(ErrorCode::invalid_argument, "x9 must be positive");
  GlobalTrajectory g;
  g.seed = seed;
  g.x9 = x9;
  Trajectory inner = trace_sigma(model, seed, opt);
  const Trajectory outer = trace_sigma_prime(model, opt);
  g.lower_inner = recover_x(inner, AnchorAt::last, x9);
  g.lower_outer = recover_x(outer, AnchorAt::first, x9);
  const OriginLimits low = origin_limits(g.lower_inner);

  Trajectory raw = seed.vertical ? inner : trace_sigma(model, SeedDirection::slope(-seed.ell), opt);
  const OriginLimits raw1 = origin_limits(recover_x(raw, AnchorAt::last, 1.0));
  // omega scales like 1/anchor, so the upper anchor matching omega on both sides is:
  const double a = raw1.omega / low.omega;
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::kink_at_origin, "collapse amplitudes have opposite signs");
  g.x8 = -a;
  g.upper_inner = mirror(recover_x(raw, AnchorAt::last, a));
  g.upper_outer = mirror(recover_x(outer, AnchorAt::first, a));

  const OriginLimits up_raw = origin_limits(recover_x(raw, AnchorAt::last, a));
  // Upper half: nu_up = -nu_raw, omega_up = omega_raw (x < 0).
  const double t_low = low.nu / low.omega, t_up = -up_raw.nu / up_raw.omega;
  g.origin_slope_lower = low.omega / low.nu;
  g.origin_slope_upper = up_raw.omega / -up_raw.nu;
  if (std::abs(t_low - t_up) > 0.01 * std::max(std::abs(t_low), std::abs(t_up)) + 1e-4 ||
      std::abs(up_raw.omega - low.omega) > 1e-6 * std::abs(low.omega))
    throw Error(ErrorCode::kink_at_origin, "entry and exit slopes at P1 differ");

  auto gap = [](const Trajectory& a_in, const Trajectory& b_out) {
    const auto& p = a_in.samples[a_in.samples.size() - 2];
    const auto& q = b_out.samples[1];
    return std::hypot(p.V - q.V, p.C - q.C);
  };
  g.junction_gap = std::max(gap(g.lower_inner, g.lower_outer), gap(g.upper_inner, g.upper_outer));
  if (g.junction_gap > 10.0 * opt.node_radius)
    throw Error(ErrorCode::no_node_capture, "branches do not meet at the triple point");
  return g;
}

std::vector<double> stagnation_points(const GlobalTrajectory& g) {
  std::vector<double> out;
  auto scan = [&out](const Trajectory& a, const Trajectory& b, double sign) {
    std::vector<TrajectorySample> all = a.samples;
    all.insert(all.end(), b.samples.begin() + 1, b.samples.end());
    for (std::size_t i = 1; i < all.size(); ++i) {
      const double v0 = all[i - 1].V, v1 = all[i].V;
      if ((v0 < 0.0 && v1 >= 0.0) || (v0 > 0.0 && v1 <= 0.0)) {
        const double f = v0 / (v0 - v1);
        const double lnx = all[i - 1].lnx + f * (all[i].lnx - all[i - 1].lnx);
        out.push_back(sign * std::exp(lnx));
      }
    }
  };
  scan(g.upper_inner, g.upper_outer, -1.0);
  scan(g.lower_inner, g.lower_outer, 1.0);
  std::sort(out.begin(), out.end());
  return out;
}

PerturbationRange perturbation_range(const Model& model, const TraceOptions& opt) {
  auto ok = [&](double tilt) {
    try {
      trace_sigma(model, SeedDirection::slope(1.0 / tilt), opt);
      trace_sigma(model, SeedDirection::slope(-1.0 / tilt), opt);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  double good = 0.0, bad = 1e-3;
  while (ok(bad)) {
    good = bad;
    bad *= 2.0;
    if (bad > 10.0) return {10.0, 0.1};
  }
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (good + bad);
    (ok(mid) ? good : bad) = mid;
  }
  return {good, 1.0 / good};
}

double reduced_residual(const Trajectory& traj, const Model& model, double exclusion) {
  const auto& s = traj.samples;
  const std::size_t begin = traj.head_bridged ? 1 : 0;
  const std::size_t end = traj.tail_bridged ? s.size() - 1 : s.size();
  const TriplePointRoots roots = triple_point_roots(model);
  const double Vp = roots.V_plus, Cp = 1.0 + roots.V_plus;
  auto excluded = [&](const TrajectorySample& q) {
    return std::hypot(q.V, q.C) < exclusion || std::hypot(q.V - Vp, q.C - Cp) < exclusion ||
           std::hypot(q.V - Vp, q.C + Cp) < exclusion;
  };
  double worst = 0.0;
  const double sg = traj.sigma;
  for (std::size_t i = begin + 1; i + 1 < end; ++i) {
    const auto &a = s[i - 1], &b = s[i], &c = s[i + 1];
    if (excluded(a) || excluded(b) || excluded(c)) continue;
    // Triples straddling the chart switch mix two parameterizations.
    if ((a.jac == 1.0) != (b.jac == 1.0) || (b.jac == 1.0) != (c.jac == 1.0)) continue;
    const double h0 = b.s - a.s, h1 = c.s - b.s, H = h0 + h1;
    if (!(h0 > 0.0) || !(h1 > 0.0)) continue;
    // Nonuniform Simpson weights.
    const double wa = H / 6.0 * (2.0 - h1 / h0), wb = H / 6.0 * H * H / (h0 * h1), wc = H / 6.0 * (2.0 - h0 / h1);
    const double intG = wa * a.G * a.jac + wb * b.G * b.jac + wc * c.G * c.jac;
    const double intF = wa * a.F * a.jac + wb * b.F * b.jac + wc * c.F * c.jac;
    const double res = std::abs(c.V - a.V - sg * intG) + std::abs(c.C - a.C - sg * intF);
    const double scale = (std::max({std::abs(a.F * a.jac), std::abs(b.F * b.jac), std::abs(c.F * c.jac)}) +
                          std::max({std::abs(a.G * a.jac), std::abs(b.G * b.jac), std::abs(c.G * c.jac)})) * H;
    if (scale > 0.0) worst = std::max(worst, res / scale);
  }
  return worst;
}

}  // namespace ril
