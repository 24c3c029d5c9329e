/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ril/error.hpp"
#include "ril/flowfield.hpp"

using namespace ril;

namespace {

const Model& reference() {
  static const Model m(make_isentropic(3, 1.4, 1.05));
  return m;
}

struct Case {
  GlobalTrajectory gamma;
  FlowField field;
  explicit Case(SeedDirection seed, double x9 = 1.0)
      : gamma(assemble_gamma(reference(), seed, x9)), field(reference(), gamma) {}
};

const Case& vertical() {
  static const Case c(SeedDirection::vertical_branch());
  return c;
}
const Case& diverging() {
  static const Case c(SeedDirection::slope(21.4));
  return c;
}
const Case& converging() {
  static const Case c(SeedDirection::slope(-21.4));
  return c;
}

double loglog_slope(const FlowField& f, double t, double r0, double r1, double FlowSample::*q) {
  const double a = std::fabs(f.evaluate(t, r0).*q), b = std::fabs(f.evaluate(t, r1).*q);
  return std::log(b / a) / std::log(r1 / r0);
}

}  // namespace

TEST_CASE("density similarity: power law in c0 and positivity") {
  const Trajectory& s = vertical().gamma.lower_inner;
  // R scales as c0^(-1/(gamma-1)): a factor 4 in c0 quarters R at gamma = 2 and halves it at gamma = 3.
  const auto R1 = density_similarity(s, 0.7, 2.0);
  const auto R4 = density_similarity(s, 2.8, 2.0);
  const auto H1 = density_similarity(s, 0.7, 3.0);
  const auto H4 = density_similarity(s, 2.8, 3.0);
  REQUIRE(R1.size() == s.samples.size());
  for (std::size_t i = 0; i < R1.size(); i += 53) {
    CHECK(R1[i] > 0.0);
    CHECK(R4[i] == doctest::Approx(0.25 * R1[i]).epsilon(1e-14));
    CHECK(H4[i] == doctest::Approx(0.5 * H1[i]).epsilon(1e-14));
  }
  Trajectory bad = s;
  bad.samples[bad.samples.size() / 2].C = 0.0;
  try {
    density_similarity(bad, 0.7, 1.4);
    FAIL("expected VacuumEncounter");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::vacuum_encounter);
  }
}

TEST_CASE("free constant fixed by R = 1 at the anchor") {
  const FlowField& f = vertical().field;
  const PhasePoint p9 = critical_points(reference()).at(Label::P9).location;
  CHECK(f.c0() == doctest::Approx(p9.C * p9.C).epsilon(1e-12));
  CHECK(f.similarity(1.0).R == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.R0() == doctest::Approx(std::pow(f.collapse().omega * f.collapse().omega / f.c0(), 2.5)).epsilon(1e-12));
  CHECK(f.R0() > 0.0);
  CHECK(f.entropy_constant() == doctest::Approx(f.c0() / (1.05 * 1.05 * 1.4)).epsilon(1e-15));
}

TEST_CASE("collapse profiles: vertical, diverging, converging") {
  const CollapseProfile& v = vertical().field.collapse();
  CHECK(v.vertical);
  CHECK(v.nu == 0.0);
  CHECK(v.omega < 0.0);
  for (double r : {1e-4, 1e-2, 1.0}) CHECK(vertical().field.evaluate(0.0, r).u == 0.0);

  const CollapseProfile& d = diverging().field.collapse();
  CHECK(d.nu < 0.0);
  CHECK(d.omega < 0.0);
  CHECK(d.ell_consistent);
  CHECK(d.ell == doctest::Approx(21.4).epsilon(0.01));
  const CollapseProfile& c = converging().field.collapse();
  CHECK(c.nu > 0.0);
  CHECK(c.omega < 0.0);
  CHECK(c.ell_consistent);
  for (double r = 1e-6; r <= 10.0; r *= 3.7) {
    CHECK(diverging().field.evaluate(0.0, r).u > 0.0);
    CHECK(converging().field.evaluate(0.0, r).u < 0.0);
  }
  try {
    Trajectory t = vertical().gamma.lower_outer;
    GlobalTrajectory g = vertical().gamma;
    g.lower_inner = t;
    collapse_profile(g);
    FAIL("expected NotThroughOrigin");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_through_origin);
  }
}

TEST_CASE("profiles at collapse follow r^(1 - lambda) and r^kappa") {
  const FlowField& f = diverging().field;
  CHECK(loglog_slope(f, 0.0, 1e-5, 1e-1, &FlowSample::u) == doctest::Approx(-0.05).epsilon(1e-6));
  CHECK(loglog_slope(f, 0.0, 1e-5, 1e-1, &FlowSample::c) == doctest::Approx(-0.05).epsilon(1e-6));
  CHECK(loglog_slope(f, 0.0, 1e-5, 1e-1, &FlowSample::rho) == doctest::Approx(-0.25).epsilon(1e-6));
  const FlowSample s = f.evaluate(0.0, 0.3);
  CHECK(s.u == doctest::Approx(-f.collapse().nu / 1.05 * std::pow(0.3, -0.05)).epsilon(1e-14));
}

TEST_CASE("bounded state at the centre for t != 0") {
  for (const Case* c : {&vertical(), &diverging(), &converging()}) {
    const FlowField& f = c->field;
    for (double t : {1.0, -1.0, 0.25}) {
      const double target = -reference().constants().V_star / (1.05 * t);
      CHECK(f.evaluate(t, 1e-7).u / 1e-7 == doctest::Approx(target).epsilon(1e-4));
      CHECK(f.evaluate(t, 1e-7).c == doctest::Approx(f.evaluate(t, 1e-5).c).epsilon(1e-3));
      const FlowSample z = f.evaluate(t, 0.0);
      CHECK(z.u == 0.0);
      CHECK(z.rho == doctest::Approx(f.evaluate(t, 1e-8).rho).epsilon(1e-6));
      CHECK(z.c == doctest::Approx(f.evaluate(t, 1e-8).c).epsilon(1e-6));
      CHECK(z.c > 0.0);
    }
  }
}

TEST_CASE("thermodynamic consistency and far-field decay") {
  const FlowField& f = converging().field;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ut(-3.0, 3.0), ulr(-6.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const FlowSample s = f.evaluate(ut(rng), std::pow(10.0, ulr(rng)));
    CHECK(s.rho > 0.0);
    CHECK(s.c > 0.0);
    CHECK(s.p == doctest::Approx(0.4 * s.rho * s.e).epsilon(1e-12));
    CHECK(s.c * s.c == doctest::Approx(1.4 * s.p / s.rho).epsilon(1e-12));
  }
  CHECK(loglog_slope(f, 1.0, 1e3, 1e4, &FlowSample::rho) == doctest::Approx(-0.25).epsilon(0.01));
}

TEST_CASE("isentropy over random samples and anchors") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ut(-5.0, 5.0), ulr(-7.0, 3.0);
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < 10000; ++i) grid.push_back({ut(rng), std::pow(10.0, ulr(rng))});
  grid.push_back({0.0, 0.0});
  grid.push_back({0.0, 0.5});
  const IsentropyReport a = verify_isentropy(vertical().field, grid);
  CHECK(a.samples == grid.size() - 1);
  CHECK(a.max_deviation <= 1e-7);
  CHECK(a.rho_min > 0.0);
  const Case shifted(SeedDirection::vertical_branch(), 2.0);
  const IsentropyReport b = verify_isentropy(shifted.field, grid);
  CHECK(b.max_deviation <= 1e-7);
  CHECK(b.S_reference == doctest::Approx(a.S_reference / 4.0).epsilon(1e-12));
}

TEST_CASE("conserved integrals") {
  const FlowField& f = diverging().field;
  for (double t : {0.0, 1.0, -1.0}) {
    const ConservedIntegrals I = conserved_integrals(f, t, 1.0);
    CAPTURE(t);
    CHECK(std::isfinite(I.mass));
    CHECK(std::isfinite(I.momentum));
    CHECK(std::isfinite(I.energy));
    CHECK(I.mass > 0.0);
    CHECK(I.momentum >= std::fabs(I.momentum_signed));
    CHECK(I.self_convergence <= 1e-6);
  }
  // At t = 0, rho = R0 r^kappa exactly, so mass scales as r_max^(kappa + n).
  const double half = conserved_integrals(f, 0.0, 0.5).mass / conserved_integrals(f, 0.0, 1.0).mass;
  CHECK(half == doctest::Approx(std::pow(0.5, -0.25 + 3.0)).epsilon(1e-9));
  // Closed form at t = 0 without the solid-angle factor: R0 r_max^(kappa + n) / (kappa + n).
  CHECK(conserved_integrals(f, 0.0, 1.0).mass == doctest::Approx(f.R0() / 2.75).epsilon(1e-9));
}

TEST_CASE("divergent integrals are rejected") {
  GasParams p = make_isentropic(3, 1.4, 1.05);
  p.kappa = -3.5;  // kappa + n <= 0
  const FlowField f(Model(p), vertical().gamma);
  try {
    conserved_integrals(f, 0.0, 1.0);
    FAIL("expected DivergentIntegral");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::divergent_integral);
  }
}

TEST_CASE("singularity and argument checks") {
  const FlowField& f = vertical().field;
  try {
    f.evaluate(0.0, 0.0);
    FAIL("expected AtSingularity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::at_singularity);
  }
  CHECK_THROWS_AS(f.evaluate(1.0, -1.0), Error);
  CHECK_THROWS_AS(f.evaluate(NAN, 1.0), Error);
}

TEST_CASE("asymptotics report") {
  const Asymptotics a = asymptotics(diverging().field, diverging().gamma);
  CHECK(a.rho_t0.rel_error() <= 0.02);
  CHECK(a.u_t0.rel_error() <= 0.02);
  CHECK(a.c_t0.rel_error() <= 0.02);
  CHECK(a.tail_w.rel_error() <= 0.05);
  CHECK(a.tail_c.rel_error() <= 0.05);
  CHECK(a.u_slope == doctest::Approx(a.u_slope_target).epsilon(1e-4));
  CHECK(a.c_limit_ratio == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(a.continuity_t0 <= 1e-3);
}

TEST_CASE("density rate at collapse") {
  for (const Case* c : {&diverging(), &converging()}) {
    const CollapseCompression k = collapse_compression(c->field, 0.2);
    CHECK(k.material_fd == doctest::Approx(k.material_exact).epsilon(1e-3));
    CHECK(k.gradient_fd == doctest::Approx(k.gradient_formula).epsilon(1e-3));
    // The velocity-gradient term alone compresses when the flow diverges.
    CHECK((k.gradient_formula > 0.0) == (c->field.collapse().nu < 0.0));
  }
}
