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

#include "oracles.hpp"
#include "ril/error.hpp"
#include "ril/phaseplane.hpp"

using namespace ril;

namespace {

Model reference() { return Model(make_isentropic(3, 1.4, 1.05)); }

// Relevant draws with lambda in the lower 60% of (1, lambda_circ).
std::vector<GasParams> relevant_draws(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ug(1.05, 3.0), uf(0.02, 0.6);
  std::vector<GasParams> out;
  while (int(out.size()) < count) {
    const int n = out.size() % 2 ? 2 : 3;
    const double g = ug(rng);
    const double l = 1.0 + uf(rng) * (oracle::lambda_circ(n, g) - 1.0);
    if (is_relevant(n, g, l)) out.push_back(make_isentropic(n, g, l));
  }
  return out;
}

}  // namespace

TEST_CASE("F vanishes on the V-axis; G(V, 0) has roots 0, -1, -lambda") {
  const Model m = reference();
  for (double V = -3.0; V <= 2.0; V += 0.173) {
    CHECK(m.F(V, 0.0) == 0.0);
    CHECK(m.partials({V, 0.0}).F_V == 0.0);
  }
  for (double V : {0.0, -1.0, -1.05}) CHECK(std::abs(m.G(V, 0.0)) <= 1e-15);
  const double V = 0.3;
  CHECK(std::abs(m.G(V, 0.0)) == doctest::Approx(std::abs(V * (1 + V) * (1.05 + V))));
}

TEST_CASE("F and G proportional along the critical lines") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uV(-3.0, 2.0);
  for (const GasParams& p : relevant_draws(20, 5)) {
    const Model m(p);
    for (int i = 0; i < 200; ++i) {
      const double V = uV(rng);
      for (int s : {1, -1}) {
        const double C = s * (1.0 + V);
        const double G = m.G(V, C);
        CHECK(std::abs(m.F(V, C) + s * 0.5 * (p.gamma - 1.0) * G) <= 1e-12 * (1.0 + std::abs(G)));
        CHECK(Model::D(V, C) == doctest::Approx(0.0));
      }
    }
  }
}

TEST_CASE("analytic partials match central differences") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uV(-0.95, 1.0), uC(-2.0, 2.0);
  const Model m = reference();
  const oracle::Poly poly{3, 1.4, 1.05};
  for (int i = 0; i < 50; ++i) {
    const double V = uV(rng), C = uC(rng);
    const PartialDerivatives d = m.partials({V, C});
    const auto fd = poly.fd_partials(V, C);
    const double an[4] = {d.F_V, d.F_C, d.G_V, d.G_C};
    for (int k = 0; k < 4; ++k) {
      const double scale = std::max(std::abs(fd[k]), 1e-3);
      CHECK(std::abs(an[k] - fd[k]) / scale <= 1e-6);
    }
  }
}

TEST_CASE("partials at P9 reproduce the reduced forms") {
  const Model m = reference();
  const CriticalPointSet set = critical_points(m);
  const PhasePoint p9 = set.at(Label::P9).location;
  const PartialDerivatives d = m.partials(p9);
  CHECK(d.F_C == doctest::Approx(2.0 * p9.C * p9.C).epsilon(1e-12));
  CHECK(d.G_C == doctest::Approx(-2.0 * p9.V * (1.05 + p9.V)).epsilon(1e-12));
  CHECK(d.F_C == doctest::Approx(1.518352).epsilon(1e-6));
  CHECK(d.G_C == doctest::Approx(0.2371307).epsilon(1e-6));
  CHECK(d.G_V == doctest::Approx(1.7054842).epsilon(1e-6));
  // G_V from the reduced form n C^2 - (1 + 2V)(lambda + V) - V(1 + V) at P9.
  const double V = p9.V;
  CHECK(d.G_V == doctest::Approx(3 * p9.C * p9.C - (1 + 2 * V) * (1.05 + V) - V * (1 + V)).epsilon(1e-12));
}

TEST_CASE("closed-form critical points at the reference point") {
  const Model m = reference();
  const CriticalPointSet set = critical_points(m);
  CHECK(set.ordering_ok);
  CHECK(set.at(Label::P1).location.V == 0.0);
  CHECK(set.at(Label::P1).location.C == 0.0);
  CHECK(set.at(Label::P1).kind == PointKind::star);
  CHECK(set.at(Label::P2).location.V == -1.0);
  CHECK(set.at(Label::P3).location.V == -1.05);
  CHECK(set.at(Label::P5).location.V == doctest::Approx(-0.65625).epsilon(1e-15));
  CHECK(set.at(Label::P9).location.V == doctest::Approx(-0.128693).epsilon(1e-6));
  CHECK(set.at(Label::P7).location.V == doctest::Approx(-0.971307).epsilon(1e-6));
  CHECK(set.at(Label::P9).location.C == doctest::Approx(-0.871307).epsilon(1e-6));
  CHECK(m.constants().V_star == doctest::Approx(-1.0 / 12.0).epsilon(1e-15));
  CHECK(set.at(Label::MinusInf).at_infinity == -1);
  CHECK(set.at(Label::PlusInf).kind == PointKind::at_infinity_saddle);
}

TEST_CASE("closed forms agree with damped Newton on (F, G) = 0") {
  int pairs = 0;
  for (const GasParams& p : relevant_draws(6, 17)) {
    const Model m(p);
    const oracle::Poly poly{p.n, p.gamma, p.lambda};
    const auto roots = oracle::newton_roots(poly, 60, -1.6, 0.4, -1.6, 1.6);
    const CriticalPointSet set = critical_points(m);
    for (const auto& cp : set.points) {
      if (cp.at_infinity || cp.kind == PointKind::absent) continue;
      const auto* r = oracle::nearest(roots, cp.location.V, cp.location.C);
      REQUIRE(r != nullptr);
      CAPTURE(label_name(cp.label));
      CHECK(std::hypot(r->V - cp.location.V, r->C - cp.location.C) <= 1e-10);
    }
    ++pairs;
  }
  CHECK(pairs == 6);
}

TEST_CASE("triple points lie on the critical lines") {
  for (const GasParams& p : relevant_draws(50, 23)) {
    const Model m(p);
    const TriplePointRoots r = triple_point_roots(m);
    for (double V : {r.V_plus, r.V_minus})
      CHECK(m.g_of_V(V) == doctest::Approx((1 + V) * (1 + V)).epsilon(1e-10));
  }
}

TEST_CASE("classification at P9, P5 and P8") {
  const Model m = reference();
  const CriticalPointSet set = critical_points(m);
  const CriticalPoint& p9 = set.at(Label::P9);
  CHECK(p9.kind == PointKind::node);

  // Oracle: Wronskian and discriminant from finite-difference partials.
  const oracle::Poly poly{3, 1.4, 1.05};
  const auto fd = poly.fd_partials(p9.location.V, p9.location.C, 1e-5);
  const double W = fd[1] * fd[2] - fd[0] * fd[3];
  const double tr = fd[1] + fd[2];
  CHECK(p9.W == doctest::Approx(W).epsilon(1e-8));
  CHECK(p9.R2 == doctest::Approx(tr * tr - 4 * W).epsilon(1e-8));
  CHECK(p9.W == doctest::Approx(2.15984126).epsilon(1e-8));
  CHECK(p9.R2 == doctest::Approx(1.75376451).epsilon(1e-8));
  CHECK(p9.L1 == doctest::Approx(-3.18690955).epsilon(1e-8));
  CHECK(p9.L2 == doctest::Approx(2.39776368).epsilon(1e-8));
  CHECK(p9.E1 == doctest::Approx(4.00525864).epsilon(1e-8));
  CHECK(p9.E2 == doctest::Approx(9.58993187).epsilon(1e-8));
  CHECK(std::abs(p9.E1) < std::abs(p9.E2));
  CHECK(p9.W == doctest::Approx(lazarus_w9(m)).epsilon(1e-10));

  // Eigen-directions: (1, L) solves the linearization with rate E G_C.
  for (auto [L, E] : {std::pair{p9.L1, p9.E1}, std::pair{p9.L2, p9.E2}}) {
    const double lhsV = p9.d.G_V + p9.d.G_C * L;
    const double lhsC = p9.d.F_V + p9.d.F_C * L;
    CHECK(lhsV == doctest::Approx(E * p9.d.G_C).epsilon(1e-10));
    CHECK(lhsC == doctest::Approx(E * p9.d.G_C * L).epsilon(1e-10));
  }

  const CriticalPoint& p5 = set.at(Label::P5);
  CHECK(p5.kind == PointKind::saddle);
  CHECK(p5.W < 0.0);
  CHECK(p5.W == doctest::Approx(lazarus_w5(m)).epsilon(1e-10));

  const CriticalPoint& p8 = set.at(Label::P8);
  CHECK(p8.kind == PointKind::node);
  CHECK(p8.L1 == doctest::Approx(-p9.L1).epsilon(1e-12));
  CHECK(p8.L2 == doctest::Approx(-p9.L2).epsilon(1e-12));
}

TEST_CASE("Wronskian identities over random relevant draws") {
  for (const GasParams& p : relevant_draws(200, 29)) {
    const Model m(p);
    const CriticalPointSet set = critical_points(m);
    for (Label l : {Label::P9, Label::P5}) {
      const CriticalPoint& cp = set.at(l);
      if (!(cp.R2 > 0.0)) continue;
      CHECK(cp.E1 * cp.E2 * cp.d.G_C * cp.d.G_C == doctest::Approx(cp.W).epsilon(1e-10));
    }
    CHECK(set.at(Label::P9).W == doctest::Approx(lazarus_w9(m)).epsilon(1e-10));
    CHECK(set.at(Label::P5).W == doctest::Approx(lazarus_w5(m)).epsilon(1e-10));
    CHECK(set.at(Label::P9).kind == PointKind::node);
  }
}

TEST_CASE("slope ordering at P9") {
  const SlopeOrdering s = slope_ordering(reference());
  CHECK(s.holds);
  CHECK(s.g_slope == doctest::Approx(-7.19216819).epsilon(1e-8));
  CHECK(s.g_slope < s.L1);
  CHECK(s.L1 < s.f_slope);
  CHECK(s.f_slope < -1.0);
  CHECK(s.L2 > 0.0);
  for (const GasParams& p : relevant_draws(60, 31)) {
    const SlopeOrdering o = slope_ordering(Model(p));
    CAPTURE(p.n);
    CAPTURE(p.gamma);
    CAPTURE(p.lambda);
    CHECK(o.L1 < -1.0);
  }
}

TEST_CASE("double triple root at gamma = 3, lambda = 1.5") {
  const Model m(make_isentropic(3, 3.0, 1.5));
  const TriplePointRoots r = triple_point_roots(m);
  CHECK(std::abs(r.radicand) <= 1e-12);
  CHECK(r.V_plus == doctest::Approx(r.V_minus).epsilon(1e-6));
  const CriticalPointSet set = critical_points(m);
  CHECK(set.at(Label::P9).kind == PointKind::degenerate);
}

TEST_CASE("absent points when the triple-point radicand is negative") {
  const Model m(make_isentropic(3, 1.4, 1.3));
  const CriticalPointSet set = critical_points(m);
  CHECK_FALSE(set.present(Label::P9));
  CHECK(set.at(Label::P9).kind == PointKind::absent);
  CHECK_FALSE(set.ordering_ok);
}

TEST_CASE("classify rejects points where the classification is undefined") {
  const Model m = reference();
  CriticalPoint cp;
  cp.label = Label::P4;
  cp.location = {m.constants().V_star, -0.5};  // G_C = 0
  try {
    classify(cp, m);
    FAIL("expected Degenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }
  // The double root at gamma = 3, lambda = 1.5 has W = 0 but a positive discriminant.
  const Model m3(make_isentropic(3, 3.0, 1.5));
  cp.label = Label::P9;
  cp.location = critical_points(m3).at(Label::P9).location;
  const CriticalPoint c3 = classify(cp, m3);
  CHECK(std::abs(c3.W) <= 1e-12);
  CHECK(c3.R2 == doctest::Approx(2.25));
}

TEST_CASE("infinity chart") {
  const Model m = reference();
  const InfinityChart c = infinity_chart(m);
  CHECK(c.A == doctest::Approx(2.0).epsilon(1e-14));
  const double Vs = -1.0 / 12.0;
  CHECK(c.B == doctest::Approx(Vs * (1 + Vs) * (1.05 + Vs)).epsilon(1e-12));
  CHECK(c.B == doctest::Approx(-0.0738426).epsilon(1e-6));
  CHECK(c.stable_slope == doctest::Approx(5.0 / c.B).epsilon(1e-14));
  CHECK(c.stable_slope == doctest::Approx(-67.7116).epsilon(1e-6));
  CHECK(c.v_exponent == doctest::Approx(-2.0 / 1.05));
  CHECK(c.c_exponent == doctest::Approx(1.0 / 1.05));
  // On the stable subspace the linear field is tangent to it.
  const double w = 1e-3, z = c.stable_slope * w;
  CHECK(infinity_chart_dzdw(w, z, m) == doctest::Approx(c.stable_slope).epsilon(1e-12));
}

TEST_CASE("zero-set layout in the fourth quadrant") {
  const LayoutReport r = layout_check(reference());
  CHECK(r.p1);
  CHECK(r.p2);
  // Closed-form limits: {F = 0} ~ -sqrt(k1) V, {G = 0} ~ -V / sqrt(n).
  CHECK(r.f_slope_inf == doctest::Approx(-std::sqrt(reference().constants().k1)).epsilon(1e-5));
  CHECK(r.g_slope_inf == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-5));
  for (const GasParams& p : relevant_draws(40, 37)) {
    const LayoutReport q = layout_check(Model(p));
    CHECK(q.p1);
    CHECK(q.p2);
  }
}
