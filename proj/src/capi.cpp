/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include "ril/ril.h"

#include <cmath>
#include <cstring>
#include <string>

#include "ril/csv.hpp"
#include "ril/error.hpp"
#include "ril/hugoniot.hpp"
#include "ril/pipeline.hpp"

struct ril_analysis {
  ril::Analysis analysis;
  std::string report;
};

namespace {

thread_local std::string last_error;

ril_status fail(ril_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
ril_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return RIL_OK;
  } catch (const ril::Error& e) {
    return fail(static_cast<ril_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(RIL_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(RIL_INTERNAL_ERROR, "unknown exception");
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw ril::Error(ril::ErrorCode::invalid_argument, what);
}

const ril::FlowField& field_of(const ril_analysis* a) {
  require(a != nullptr, "null analysis");
  if (!a->analysis.field) throw ril::Error(ril::ErrorCode::invalid_argument, "analysis has no traced trajectory");
  return *a->analysis.field;
}

}  // namespace

extern "C" {

const char* ril_version(void) { return "1.0.0"; }

const char* ril_status_name(ril_status status) {
  switch (status) {
    case RIL_OK: return "Ok";
    case RIL_INTERNAL_ERROR: return "InternalError";
    default:
      if (status >= 1 && status <= 17) return ril::error_name(static_cast<ril::ErrorCode>(status));
      return "Unknown";
  }
}

const char* ril_last_error(void) { return last_error.c_str(); }

void ril_options_init(ril_options* opt) {
  if (!opt) return;
  opt->n = 3;
  opt->gamma = 1.4;
  opt->lambda = 1.05;
  opt->vertical = 1;
  opt->ell = NAN;
  opt->x9 = 1.0;
  opt->tol = 1e-6;
}

ril_status ril_analyze(const ril_options* opt, ril_analysis** out) {
  return guarded([&] {
    require(opt != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    require(std::isfinite(opt->x9) && opt->x9 > 0.0, "x9 must be positive");
    require(std::isfinite(opt->tol) && opt->tol > 0.0, "tol must be positive");
    require(opt->vertical || (std::isfinite(opt->ell) && opt->ell != 0.0), "ell must be finite and nonzero");
    ril::GasParams p;
    p.n = opt->n;
    p.gamma = opt->gamma;
    p.lambda = opt->lambda;
    p.kappa = -2.0 * (opt->lambda - 1.0) / (opt->gamma - 1.0);
    ril::AnalysisOptions ao;
    ao.seed = opt->vertical ? ril::SeedDirection::vertical_branch() : ril::SeedDirection::slope(opt->ell);
    ao.x9 = opt->x9;
    ao.intersection_tol = opt->tol;
    auto* a = new ril_analysis{ril::run_analysis(p, ao), {}};
    a->report = ril::report_json(a->analysis);
    *out = a;
  });
}

void ril_analysis_destroy(ril_analysis* a) { delete a; }

int ril_analysis_exit_code(const ril_analysis* a) { return a ? a->analysis.exit_code : 1; }

int ril_analysis_traced(const ril_analysis* a) { return a && a->analysis.traced ? 1 : 0; }

ril_status ril_analysis_report(const ril_analysis* a, char* buf, size_t cap, size_t* len) {
  return guarded([&] {
    require(a != nullptr, "null analysis");
    if (len) *len = a->report.size();
    if (buf && cap > a->report.size()) std::memcpy(buf, a->report.c_str(), a->report.size() + 1);
    else if (buf && cap > 0) throw ril::Error(ril::ErrorCode::invalid_argument, "buffer too small");
  });
}

ril_status ril_analysis_write_report(const ril_analysis* a, const char* path) {
  return guarded([&] {
    require(a != nullptr && path != nullptr, "null argument");
    ril::write_file(path, [&](std::ostream& os) { os << a->report; });
  });
}

ril_status ril_analysis_write_trajectory(const ril_analysis* a, const char* path) {
  return guarded([&] {
    require(a != nullptr && path != nullptr, "null argument");
    require(a->analysis.traced, "analysis has no traced trajectory");
    ril::write_file(path, [&](std::ostream& os) { ril::write_trajectory_csv(os, a->analysis.gamma); });
  });
}

ril_status ril_analysis_write_locus(const ril_analysis* a, const char* path) {
  return guarded([&] {
    require(a != nullptr && path != nullptr, "null argument");
    require(a->analysis.traced, "analysis has no traced trajectory");
    ril::write_file(path, [&](std::ostream& os) { ril::write_locus_csv(os, a->analysis.locus); });
  });
}

ril_status ril_evaluate(const ril_analysis* a, double t, double r, ril_flow_sample* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const ril::FlowSample s = field_of(a).evaluate(t, r);
    *out = {s.t, s.r, s.rho, s.u, s.c, s.p, s.e, s.S_proxy};
  });
}

ril_status ril_write_field(const ril_analysis* a, const double* ts, size_t nt, double r_min, double r_max,
                           size_t nr, int jobs, const char* path, size_t* excluded) {
  return guarded([&] {
    require(path != nullptr && (nt == 0 || ts != nullptr), "null argument");
    const ril::FlowField& f = field_of(a);
    const ril::FieldTable table = ril::evaluate_grid(f, std::vector<double>(ts, ts + nt), r_min, r_max, nr, jobs);
    ril::write_file(path, [&](std::ostream& os) {
      ril::write_field_header(os);
      for (const auto& s : table.samples) ril::write_field_row(os, s);
    });
    if (excluded) *excluded = table.excluded;
  });
}

ril_status ril_sweep(int n, const double* gammas, size_t ng, int lambda_steps, int full, int jobs,
                     const char* points_path, const char* regime_path) {
  return guarded([&] {
    require(points_path != nullptr && (ng == 0 || gammas != nullptr), "null argument");
    ril::SweepOptions so;
    so.n = n;
    so.gammas.assign(gammas, gammas + ng);
    so.lambda_steps = lambda_steps;
    so.full = full != 0;
    so.jobs = jobs;
    const ril::SweepResult res = ril::run_sweep(so);
    ril::write_file(points_path, [&](std::ostream& os) { ril::write_sweep_csv(os, res); });
    if (regime_path) ril::write_file(regime_path, [&](std::ostream& os) { ril::write_regime_csv(os, res); });
  });
}

ril_status ril_sigma_h(double slope, double gamma, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = ril::sigma_h(slope, gamma);
  });
}

ril_status ril_rh_jump(const double ahead[3], double gamma, double behind[3], int* admissible, double* entropy_jump) {
  return guarded([&] {
    require(ahead != nullptr && behind != nullptr, "null argument");
    const ril::ShockPair p = ril::rh_jump({ahead[0], ahead[1], ahead[2]}, gamma);
    behind[0] = p.behind.V;
    behind[1] = p.behind.C;
    behind[2] = p.behind.R;
    if (admissible) *admissible = p.admissible ? 1 : 0;
    if (entropy_jump) *entropy_jump = p.entropy_jump;
  });
}

}  // extern "C"
