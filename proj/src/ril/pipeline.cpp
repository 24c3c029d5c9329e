/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include <json.hpp>

#include "ril/csv.hpp"
#include "ril/error.hpp"

namespace ril {

namespace {

using json = nlohmann::ordered_json;

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round15(v);
}

void add(Analysis& a, std::string name, bool passed, double value, double tol) {
  a.checks.push_back({std::move(name), passed, value, tol});
}

double rel(double v, double target) { return std::fabs(v - target) / std::fabs(target); }

template <class F>
void parallel_for(std::size_t count, int jobs, F&& body) {
  const int nt = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (nt == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first;
  std::vector<std::thread> pool;
  for (int k = 0; k < nt; ++k) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

void trajectory_checks(Analysis& a, const Model& model) {
  const auto& cps = a.critical;
  const auto& p9 = cps.at(Label::P9);
  const double V5 = cps.at(Label::P5).location.V;
  const double V9 = p9.location.V;
  const Trajectory& sig = a.gamma.lower_inner;
  const Trajectory& sp = a.gamma.lower_outer;

  if (a.options.seed.vertical)
    add(a, "sigma_crossing_inside", sig.crossing_V > V5 && sig.crossing_V < V9, sig.crossing_V, 0.0);
  add(a, "node_capture_slope", rel(sig.approach_slope, p9.L1) <= 0.01, rel(sig.approach_slope, p9.L1), 0.01);
  const auto [ew, ec] = tail_exponents(sp, model);
  const double l = model.lambda();
  add(a, "tail_exponent_w", rel(ew, -2.0 / l) <= 0.05, rel(ew, -2.0 / l), 0.05);
  add(a, "tail_exponent_c", rel(ec, 1.0 / l) <= 0.05, rel(ec, 1.0 / l), 0.05);
  const double gap_tol = 10.0 * a.options.trace.node_radius;
  add(a, "junction_gap", a.gamma.junction_gap <= gap_tol, a.gamma.junction_gap, gap_tol);
  double res = 0.0;
  for (const auto* t : {&a.gamma.lower_inner, &a.gamma.lower_outer}) res = std::max(res, reduced_residual(*t, model));
  add(a, "reduced_ode_residual", res <= 1e-6, res, 1e-6);
}

void field_checks(Analysis& a) {
  const FlowField& f = *a.field;
  const auto& cp = a.collapse;
  add(a, "omega_negative", cp.omega < 0.0, cp.omega, 0.0);
  if (!cp.vertical) add(a, "ell_consistency", cp.ell_consistent, rel(cp.ell, a.options.seed.ell), 0.01);

  // Sign of u(0, r) against -nu over six decades.
  bool sign_ok = true;
  for (int i = 0; i <= 60; ++i) {
    const double u = f.evaluate(0.0, std::pow(10.0, -4.0 + 0.1 * i)).u;
    sign_ok = sign_ok && (cp.vertical ? u == 0.0 : (cp.nu > 0.0 ? u < 0.0 : u > 0.0));
  }
  add(a, "collapse_velocity_sign", sign_ok, cp.nu, 0.0);
  const std::size_t ns = a.stagnation.size();
  bool stag_ok = cp.vertical ? ns == 0 : (ns == 1 && (a.stagnation[0] > 0.0) == (a.options.seed.ell < 0.0));
  add(a, "stagnation_points", stag_ok, static_cast<double>(ns), 0.0);

  add(a, "isentropy", a.isentropy.max_deviation <= 1e-7, a.isentropy.max_deviation, 1e-7);
  add(a, "no_vacuum", a.isentropy.rho_min > 0.0, a.isentropy.rho_min, 0.0);
  double conv = 0.0;
  for (const auto* ci : {&a.integrals_t0, &a.integrals_t1, &a.integrals_tm1}) conv = std::max(conv, ci->self_convergence);
  add(a, "integrals_self_convergence", conv <= 1e-6, conv, 1e-6);

  const Asymptotics& as = a.asymptotics;
  add(a, "blowup_density_exponent", as.rho_t0.rel_error() <= 0.02, as.rho_t0.exponent, 0.02);
  add(a, "blowup_sound_speed_exponent", as.c_t0.rel_error() <= 0.02, as.c_t0.exponent, 0.02);
  if (!cp.vertical) add(a, "blowup_velocity_exponent", as.u_t0.rel_error() <= 0.02, as.u_t0.exponent, 0.02);
  add(a, "velocity_linear_at_centre", rel(as.u_slope, as.u_slope_target) <= 1e-4, as.u_slope, 1e-4);
  add(a, "sound_speed_bounded_at_centre", std::fabs(as.c_limit_ratio - 1.0) <= 1e-3, as.c_limit_ratio, 1e-3);
  add(a, "continuity_at_collapse", as.continuity_t0 <= 1e-3, as.continuity_t0, 1e-3);

  const auto& cc = a.compression;
  const double err = std::fabs(cc.material_fd - cc.material_exact);
  const double scale = std::max(std::fabs(cc.material_exact), 1e-12);
  add(a, "material_derivative", err <= 1e-3 * scale + 1e-10, err / scale, 1e-3);
}

void hugoniot_checks(Analysis& a) {
  const auto& h = a.locus;
  add(a, "locus_admissible", h.all_admissible, static_cast<double>(h.samples.size()), 0.0);
  add(a, "jump_residuals", h.max_jump_residual <= 1e-10, h.max_jump_residual, 1e-10);
  add(a, "locus_endpoint", h.endpoint_distance <= 1e-5, h.endpoint_distance, 1e-5);
  add(a, "locus_near_slope", rel(h.near_slope, h.slope_target) <= 0.02, h.near_slope, 0.02);
  add(a, "locus_below_V9", h.below_V9, h.near_slope, 0.0);
}

std::vector<std::pair<double, double>> isentropy_grid(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ut = std::generate_canonical<double, 53>(rng);
    const double ur = std::generate_canonical<double, 53>(rng);
    const double t = (i % 2 ? 1.0 : -1.0) * std::pow(10.0, -3.0 + 5.0 * ut);
    const double r = std::pow(10.0, -4.0 + 6.0 * ur);
    grid.push_back({i % 10 == 0 ? 0.0 : t, r});
  }
  return grid;
}

json critical_json(const CriticalPointSet& set) {
  json arr = json::array();
  for (const auto& cp : set.points) {
    json j;
    j["label"] = label_name(cp.label);
    j["V"] = num(cp.location.V);
    j["C"] = cp.at_infinity != 0 ? json(cp.at_infinity > 0 ? "+inf" : "-inf") : num(cp.location.C);
    j["kind"] = kind_name(cp.kind);
    j["W"] = num(cp.W);
    j["R2"] = num(cp.R2);
    j["L1"] = num(cp.L1);
    j["L2"] = num(cp.L2);
    j["E1"] = num(cp.E1);
    j["E2"] = num(cp.E2);
    arr.push_back(j);
  }
  return arr;
}

json integrals_json(const ConservedIntegrals& c) {
  return {{"mass", num(c.mass)},
          {"momentum", num(c.momentum)},
          {"momentum_signed", num(c.momentum_signed)},
          {"energy", num(c.energy)},
          {"self_convergence", num(c.self_convergence)},
          {"tolerance", 1e-6}};
}

json fit_json(const PowerFit& f, double tol) {
  return {{"value", num(f.exponent)}, {"target", num(f.target)}, {"tolerance", tol}};
}

}  // namespace

Analysis run_analysis(const GasParams& params, const AnalysisOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  Analysis a;
  a.params = params;
  a.options = opt;
  auto finish = [&]() -> Analysis {
    a.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(a);
  };
  try {
    const Model model(params);
    a.thresholds = lambda_thresholds(params.n, params.gamma, params.lambda);
    a.relevant = a.thresholds.relevant;
    a.critical = critical_points(model);
    if (!a.relevant) {
      a.exit_code = 2;
      a.failure = "NotRelevant";
      return finish();
    }
    a.barrier = barrier_check(model, opt.trace);
    if (!(a.barrier.propA && a.barrier.propB && a.barrier.propC)) {
      a.exit_code = 2;
      a.failure = !a.barrier.propA ? "PropertyAFails" : !a.barrier.propB ? "PropertyBFails" : "PropertyCFails";
      return finish();
    }
    add(a, "critical_ordering", a.critical.ordering_ok, 0.0, 0.0);
    add(a, "p9_node", a.critical.at(Label::P9).kind == PointKind::node, a.critical.at(Label::P9).W, 0.0);
    a.layout = layout_check(model);
    add(a, "zero_set_layout", a.layout.p1 && a.layout.p2, a.layout.g_slope_inf - a.layout.f_slope_inf, 0.0);

    a.gamma = assemble_gamma(model, opt.seed, opt.x9, opt.trace);
    a.traced = true;
    trajectory_checks(a, model);

    a.field = std::make_shared<const FlowField>(model, a.gamma);
    a.collapse = a.field->collapse();
    a.stagnation = stagnation_points(a.gamma);
    a.integrals_t0 = conserved_integrals(*a.field, 0.0, 1.0);
    a.integrals_t1 = conserved_integrals(*a.field, 1.0, 1.0);
    a.integrals_tm1 = conserved_integrals(*a.field, -1.0, 1.0);
    a.isentropy = verify_isentropy(*a.field, isentropy_grid(opt.isentropy_samples, opt.seed_rng));
    a.asymptotics = asymptotics(*a.field, a.gamma);
    a.compression = collapse_compression(*a.field, 0.1);
    field_checks(a);

    a.locus = hugoniot_locus(a.gamma.lower_inner, model, a.field->c0());
    hugoniot_checks(a);
    IntersectionOptions io;
    io.tolerance = opt.intersection_tol;
    a.verdict = intersection_test(a.locus, a.gamma.lower_outer, io);

    const bool all = std::all_of(a.checks.begin(), a.checks.end(), [](const Check& c) { return c.passed; });
    a.exit_code = all ? 0 : 1;
    if (!all) a.failure = "CheckFailed";
  } catch (const Error& e) {
    a.exit_code = e.code() == ErrorCode::domain ? 2 : 1;
    a.failure = error_name(e.code());
  } catch (const std::exception& e) {
    a.exit_code = 1;
    a.failure = "InternalError";
  }
  return finish();
}

std::string report_json(const Analysis& a) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["params"] = {{"n", a.params.n}, {"gamma", num(a.params.gamma)}, {"lambda", num(a.params.lambda)},
                 {"kappa", num(a.params.kappa)}};
  j["seed"] = {{"vertical", a.options.seed.vertical}, {"ell", num(a.options.seed.ell)}};
  j["x9"] = num(a.options.x9);
  const auto& th = a.thresholds;
  j["thresholds"] = {{"lambda_tilde", num(th.lambda_tilde)}, {"lambda_hat", num(th.lambda_hat)},
                     {"lambda_check", num(th.lambda_check)}, {"lambda_star", num(th.lambda_star)},
                     {"lambda_circ", num(th.lambda_circ)},   {"q_n_positive", th.q_n_positive}};
  j["relevant"] = a.relevant;
  j["critical_points"] = critical_json(a.critical);
  j["layout"] = {{"p1", a.layout.p1},
                 {"p2", a.layout.p2},
                 {"f_slope_inf", num(a.layout.f_slope_inf)},
                 {"g_slope_inf", num(a.layout.g_slope_inf)}};
  const auto& b = a.barrier;
  j["barrier"] = {{"beta", num(b.beta)},
                  {"beta1", num(b.beta1)},
                  {"beta2", num(b.beta2)},
                  {"propA", b.propA},
                  {"propB", b.propB},
                  {"propC", b.propC},
                  {"crossing_V", num(b.crossing_V)},
                  {"Z5", num(b.Z5)},
                  {"Z9", num(b.Z9)},
                  {"phi_at_zero", num(b.phi_at_zero)},
                  {"phi_at_Z5", num(b.phi_at_Z5)},
                  {"dphi_at_Z5", num(b.dphi_at_Z5)},
                  {"psi_at_zero", num(b.psi_at_zero)},
                  {"psi_at_Z9", num(b.psi_at_Z9)},
                  {"min_margin_B", num(b.min_margin_B)},
                  {"min_margin_C", num(b.min_margin_C)}};
  j["traced"] = a.traced;
  if (a.traced) {
    const auto& g = a.gamma;
    const auto& s = g.lower_inner;
    const auto& sp = g.lower_outer;
    json tr;
    tr["sigma"] = {{"branch", branch_name(s.branch, s.ell)},
                   {"samples", s.samples.size()},
                   {"crossing_V", num(s.crossing_V)},
                   {"crossing_C", num(s.crossing_C)},
                   {"eye_entered", s.eye_entered},
                   {"eye_trapped", s.eye_trapped},
                   {"approach_slope", num(s.approach_slope)},
                   {"approach_target", num(a.critical.at(Label::P9).L1)},
                   {"tolerance", 0.01}};
    tr["sigma_prime"] = {{"samples", sp.samples.size()},
                         {"stages", sp.stages},
                         {"bisection_steps", sp.bisection_steps},
                         {"stable_residual", num(sp.stable_residual)},
                         {"lnx_end", num(sp.samples.back().lnx)},
                         {"tail_w", fit_json(a.asymptotics.tail_w, 0.05)},
                         {"tail_c", fit_json(a.asymptotics.tail_c, 0.05)}};
    tr["x8"] = num(g.x8);
    tr["junction_gap"] = num(g.junction_gap);
    tr["origin_slope_lower"] = num(g.origin_slope_lower);
    tr["origin_slope_upper"] = num(g.origin_slope_upper);
    j["trajectories"] = tr;

    const auto& cp = a.collapse;
    json stag = json::array();
    for (double x : a.stagnation) stag.push_back(num(x));
    j["collapse"] = {{"nu", num(cp.nu)},          {"nu_fit", num(cp.nu_fit)},       {"omega", num(cp.omega)},
                     {"ell", num(cp.ell)},        {"vertical", cp.vertical},        {"ell_consistent", cp.ell_consistent},
                     {"u_coeff", num(cp.u_coeff() / a.params.lambda)},
                     {"c_coeff", num(cp.c_coeff() / a.params.lambda)},
                     {"stagnation", stag}};

    const auto& as = a.asymptotics;
    const auto& cc = a.compression;
    j["field"] = {
        {"c0", num(a.field->c0())},
        {"R0", num(a.field->R0())},
        {"entropy_constant", num(a.field->entropy_constant())},
        {"isentropy",
         {{"max_deviation", num(a.isentropy.max_deviation)},
          {"samples", a.isentropy.samples},
          {"rho_min", num(a.isentropy.rho_min)},
          {"tolerance", 1e-7}}},
        {"integrals", {{"t0", integrals_json(a.integrals_t0)}, {"t1", integrals_json(a.integrals_t1)},
                       {"tm1", integrals_json(a.integrals_tm1)}}},
        {"asymptotics",
         {{"rho_t0", fit_json(as.rho_t0, 0.02)},
          {"u_t0", fit_json(as.u_t0, 0.02)},
          {"c_t0", fit_json(as.c_t0, 0.02)},
          {"u_slope", {{"value", num(as.u_slope)}, {"target", num(as.u_slope_target)}, {"tolerance", 1e-4}}},
          {"c_limit_ratio", {{"value", num(as.c_limit_ratio)}, {"target", 1.0}, {"tolerance", 1e-3}}},
          {"continuity_t0", {{"value", num(as.continuity_t0)}, {"tolerance", 1e-3}}}}},
        {"compression_r0_1",
         {{"material_fd", num(cc.material_fd)},
          {"material_exact", num(cc.material_exact)},
          {"gradient_fd", num(cc.gradient_fd)},
          {"gradient_formula", num(cc.gradient_formula)},
          {"tolerance", 1e-3}}}};

    const auto& h = a.locus;
    const auto& v = a.verdict;
    j["hugoniot"] = {{"samples", h.samples.size()},
                     {"endpoint_distance", num(h.endpoint_distance)},
                     {"near_slope", num(h.near_slope)},
                     {"slope_target", num(h.slope_target)},
                     {"all_admissible", h.all_admissible},
                     {"below_V9", h.below_V9},
                     {"max_jump_residual", num(h.max_jump_residual)},
                     {"verdict",
                      {{"result", v.intersects ? "Intersection" : "NoIntersection"},
                       {"min_distance", num(v.min_distance)},
                       {"x_s", num(v.x_s)},
                       {"v_gap", num(v.v_gap)},
                       {"locus_used", v.locus_used},
                       {"curve_used", v.curve_used},
                       {"tolerance", a.options.intersection_tol}}}};
  }
  json checks = json::array();
  for (const auto& c : a.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", num(c.value)}, {"tolerance", num(c.tolerance)}});
  j["checks"] = checks;
  j["exit_code"] = a.exit_code;
  j["failure"] = a.failure.empty() ? json(nullptr) : json(a.failure);
  return j.dump(2) + "\n";
}

FieldTable evaluate_grid(const FlowField& field, const std::vector<double>& ts, double r_min, double r_max,
                         std::size_t nr, int jobs) {
  if (!(r_max > 0.0) || !(r_min >= 0.0) || r_min > r_max)
    throw Error(ErrorCode::invalid_argument, "need 0 <= r_min <= r_max and r_max > 0");
  std::vector<double> rs;
  const bool centre = r_min == 0.0;
  const double lo = centre ? r_max * 1e-6 : r_min;
  const std::size_t nlog = centre ? (nr > 0 ? nr - 1 : 0) : nr;
  if (centre && nr > 0) rs.push_back(0.0);
  for (std::size_t i = 0; i < nlog; ++i) {
    const double f = nlog == 1 ? 0.0 : static_cast<double>(i) / (nlog - 1);
    rs.push_back(std::exp(std::log(lo) + f * (std::log(r_max) - std::log(lo))));
  }
  const std::size_t total = ts.size() * rs.size();
  std::vector<FlowSample> out(total);
  std::vector<char> ok(total, 0);
  parallel_for(total, jobs, [&](std::size_t k) {
    const double t = ts[k / rs.size()], r = rs[k % rs.size()];
    try {
      out[k] = field.evaluate(t, r);
      ok[k] = 1;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::at_singularity) throw;
    }
  });
  FieldTable table;
  for (std::size_t k = 0; k < total; ++k) {
    if (ok[k])
      table.samples.push_back(out[k]);
    else
      ++table.excluded;
  }
  return table;
}

double regime_edge(int n, double gamma, bool all_properties) {
  TraceOptions topt;
  auto holds = [&](double lambda) {
    try {
      if (all_properties && !is_relevant(n, gamma, lambda)) return false;
      const BarrierReport b = barrier_check(Model(make_isentropic(n, gamma, lambda)), topt);
      return all_properties ? (b.propA && b.propB && b.propC) : b.propA;
    } catch (const Error&) {
      return false;
    }
  };
  const ThresholdReport th = lambda_thresholds(n, gamma);
  double hi = std::isfinite(th.lambda_circ) ? th.lambda_circ : th.lambda_tilde;
  double lo = 1.0 + 1e-4;
  if (!holds(lo)) return kNaN;
  if (holds(hi * (1.0 - 1e-9))) return hi;
  for (int i = 0; i < 48 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

SweepResult run_sweep(const SweepOptions& opt) {
  if (opt.n != 2 && opt.n != 3) throw Error(ErrorCode::domain, "n must be 2 or 3");
  if (opt.lambda_steps < 1) throw Error(ErrorCode::invalid_argument, "lambda_steps must be positive");
  if (opt.gammas.size() * static_cast<std::size_t>(opt.lambda_steps) > 1000000)
    throw Error(ErrorCode::invalid_argument, "grid exceeds 1e6 points");
  SweepResult res;
  res.rows.resize(opt.gammas.size());
  for (std::size_t i = 0; i < opt.gammas.size(); ++i) {
    res.rows[i].gamma = opt.gammas[i];
    const ThresholdReport th = lambda_thresholds(opt.n, opt.gammas[i]);
    res.rows[i].lambda_circ = std::isfinite(th.lambda_circ) ? th.lambda_circ : th.lambda_tilde;
  }
  const std::size_t nl = static_cast<std::size_t>(opt.lambda_steps);
  res.points.resize(opt.gammas.size() * nl);
  parallel_for(res.points.size(), opt.jobs, [&](std::size_t k) {
    const SweepRow& row = res.rows[k / nl];
    SweepPoint& p = res.points[k];
    p.n = opt.n;
    p.gamma = row.gamma;
    p.lambda = 1.0 + (row.lambda_circ - 1.0) * static_cast<double>(k % nl + 1) / static_cast<double>(nl + 1);
    p.verdict = "skipped";
    try {
      const GasParams gp = make_isentropic(p.n, p.gamma, p.lambda);
      p.relevant = is_relevant(p.n, p.gamma, p.lambda);
      const BarrierReport b = barrier_check(Model(gp));
      p.propA = b.propA;
      p.propB = b.propB;
      p.propC = b.propC;
      if (opt.full && p.relevant && b.propA && b.propB && b.propC) {
        const Analysis a = run_analysis(gp);
        if (a.traced && a.failure.empty())
          p.verdict = a.verdict.intersects ? "Intersection" : "NoIntersection";
        else if (!a.failure.empty())
          p.verdict = a.failure;
      }
    } catch (const Error& e) {
      p.verdict = error_name(e.code());
    }
  });
  parallel_for(res.rows.size(), opt.jobs, [&](std::size_t i) {
    res.rows[i].lambda_A = regime_edge(opt.n, res.rows[i].gamma, false);
    res.rows[i].lambda_max = regime_edge(opt.n, res.rows[i].gamma, true);
  });
  return res;
}

}  // namespace ril
