/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "ril/error.hpp"
#include "ril/pipeline.hpp"

namespace ril {

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt15(v).c_str(), nullptr);
}

void write_trajectory_csv(std::ostream& os, const std::vector<const Trajectory*>& branches) {
  os << "s,V,C,lnx,D,F,G,branch\n";
  for (const Trajectory* t : branches) {
    const std::string name = branch_name(t->branch, t->ell);
    for (const auto& s : t->samples) {
      os << fmt15(s.s) << ',' << fmt15(s.V) << ',' << fmt15(s.C) << ',' << fmt15(s.lnx) << ',' << fmt15(s.D)
         << ',' << fmt15(s.F) << ',' << fmt15(s.G) << ',' << name << '\n';
    }
  }
}

void write_trajectory_csv(std::ostream& os, const GlobalTrajectory& g) {
  write_trajectory_csv(os, {&g.lower_inner, &g.lower_outer, &g.upper_inner, &g.upper_outer});
}

void write_locus_csv(std::ostream& os, const HugoniotLocus& locus) {
  os << "x,V_ahead,C_ahead,V_behind,C_behind,entropy_jump\n";
  for (const auto& s : locus.samples) {
    const auto& p = s.pair;
    os << fmt15(s.x) << ',' << fmt15(p.ahead.V) << ',' << fmt15(p.ahead.C) << ',' << fmt15(p.behind.V) << ','
       << fmt15(p.behind.C) << ',' << fmt15(p.entropy_jump) << '\n';
  }
}

void write_field_header(std::ostream& os) { os << "t,r,rho,u,c,p,e,S_proxy\n"; }

void write_field_row(std::ostream& os, const FlowSample& s) {
  os << fmt15(s.t) << ',' << fmt15(s.r) << ',' << fmt15(s.rho) << ',' << fmt15(s.u) << ',' << fmt15(s.c) << ','
     << fmt15(s.p) << ',' << fmt15(s.e) << ',' << fmt15(s.S_proxy) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "n,gamma,lambda,relevant,propA,propB,propC,verdict\n";
  for (const auto& p : sweep.points) {
    os << p.n << ',' << fmt15(p.gamma) << ',' << fmt15(p.lambda) << ',' << int(p.relevant) << ',' << int(p.propA)
       << ',' << int(p.propB) << ',' << int(p.propC) << ',' << p.verdict << '\n';
  }
}

void write_regime_csv(std::ostream& os, const SweepResult& sweep) {
  os << "gamma,lambda_circ,lambda_A,lambda_max\n";
  for (const auto& r : sweep.rows)
    os << fmt15(r.gamma) << ',' << fmt15(r.lambda_circ) << ',' << fmt15(r.lambda_A) << ',' << fmt15(r.lambda_max)
       << '\n';
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path);
  body(os);
  os.flush();
  if (!os) throw Error(ErrorCode::io, "write failed for " + path);
}

}  // namespace ril
