/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ril/ril.h"

namespace {

struct PointArgs {
  int n = 3;
  double gamma = 1.4;
  double lambda = 1.05;
  double ell = NAN;
  bool vertical = false;
  double x9 = 1.0;
  double tol = 1e-6;
};

void add_point_flags(CLI::App* cmd, PointArgs& p) {
  cmd->add_option("--n", p.n, "space dimension")->check(CLI::IsMember({2, 3}))->capture_default_str();
  cmd->add_option("--gamma", p.gamma, "adiabatic exponent")->capture_default_str();
  cmd->add_option("--lambda", p.lambda, "similarity exponent")->capture_default_str();
  auto* ell = cmd->add_option("--ell", p.ell, "slope dC/dV of the trajectory at the origin");
  auto* vert = cmd->add_flag("--vertical", p.vertical, "vertical branch through the origin (default)");
  ell->excludes(vert);
  cmd->add_option("--x9", p.x9, "x-anchor of P9")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--tol", p.tol, "closest approach counted as a Hugoniot intersection")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

ril_options to_options(const PointArgs& p) {
  ril_options o;
  ril_options_init(&o);
  o.n = p.n;
  o.gamma = p.gamma;
  o.lambda = p.lambda;
  o.vertical = std::isnan(p.ell) ? 1 : 0;
  o.ell = p.ell;
  o.x9 = p.x9;
  o.tol = p.tol;
  return o;
}

int report_status(ril_status s) {
  std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n", ril_status_name(s), ril_last_error());
  return 1;
}

std::string in_dir(const std::string& dir, const char* name) { return (std::filesystem::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
}

// Runs the pipeline; on success *out holds the handle.
int analyze(const PointArgs& p, ril_analysis** out) {
  const ril_options o = to_options(p);
  const ril_status s = ril_analyze(&o, out);
  return s == RIL_OK ? 0 : report_status(s);
}

int cmd_analyze(const PointArgs& p, const std::string& dir) {
  ril_analysis* a = nullptr;
  if (analyze(p, &a) != 0) return 1;
  ensure_dir(dir);
  const std::string report = in_dir(dir, "report.json");
  ril_status s = ril_analysis_write_report(a, report.c_str());
  if (s == RIL_OK && ril_analysis_traced(a)) {
    s = ril_analysis_write_trajectory(a, in_dir(dir, "trajectory.csv").c_str());
    if (s == RIL_OK) s = ril_analysis_write_locus(a, in_dir(dir, "locus.csv").c_str());
  }
  const int code = ril_analysis_exit_code(a);
  ril_analysis_destroy(a);
  if (s != RIL_OK) return report_status(s);
  std::printf("{\"exit_code\":%d,\"report\":\"%s\"}\n", code, report.c_str());
  return code;
}

int cmd_field(const PointArgs& p, const std::string& dir, const std::vector<double>& ts, double r_min, double r_max,
              std::size_t samples, int jobs) {
  ril_analysis* a = nullptr;
  if (analyze(p, &a) != 0) return 1;
  const int code = ril_analysis_exit_code(a);
  if (!ril_analysis_traced(a)) {
    ril_analysis_destroy(a);
    std::fprintf(stderr, "{\"error\":\"NotTraced\",\"exit_code\":%d}\n", code);
    return code == 0 ? 1 : code;
  }
  ensure_dir(dir);
  const std::string path = in_dir(dir, "field.csv");
  std::size_t excluded = 0;
  const ril_status s = ril_write_field(a, ts.data(), ts.size(), r_min, r_max, samples, jobs, path.c_str(), &excluded);
  ril_analysis_destroy(a);
  if (s != RIL_OK) return report_status(s);
  std::printf("{\"field\":\"%s\",\"excluded\":%zu}\n", path.c_str(), excluded);
  return 0;
}

int cmd_sweep(int n, std::vector<double> gammas, double gmin, double gmax, int gsteps, int lsteps, bool full,
              int jobs, const std::string& dir) {
  if (gammas.empty()) {
    for (int i = 0; i < gsteps; ++i)
      gammas.push_back(gsteps == 1 ? gmin : gmin + (gmax - gmin) * i / (gsteps - 1));
  }
  ensure_dir(dir);
  const std::string points = in_dir(dir, "sweep.csv"), regime = in_dir(dir, "regime.csv");
  const ril_status s = ril_sweep(n, gammas.data(), gammas.size(), lsteps, full ? 1 : 0, jobs, points.c_str(),
                                 regime.c_str());
  if (s != RIL_OK) return report_status(s);
  std::printf("{\"sweep\":\"%s\",\"regime\":\"%s\"}\n", points.c_str(), regime.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar radial Euler flows: trajectory construction, field reconstruction, shock tests"};
  app.set_config("--config", "", "INI/TOML defaults; command-line flags win");
  app.require_subcommand(1);
  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory")->envname("RIL_OUT_DIR");

  PointArgs pa, pf;
  auto* an = app.add_subcommand("analyze", "run the single-point pipeline and write report.json");
  add_point_flags(an, pa);
  an->add_option("--out", out_dir, "output directory")->envname("RIL_OUT_DIR");

  auto* fd = app.add_subcommand("field", "evaluate physical fields on a (t, r) grid into field.csv");
  add_point_flags(fd, pf);
  fd->add_option("--out", out_dir, "output directory")->envname("RIL_OUT_DIR");
  std::string t_list = "0,1,-1";
  double r_min = 1e-6, r_max = 1.0;
  std::size_t samples = 61;
  int jobs = 1;
  fd->add_option("--t", t_list, "times, comma separated (empty for none)")->capture_default_str();
  fd->add_option("--r-min", r_min, "smallest radius (0 adds the centre)")->capture_default_str();
  fd->add_option("--r-max", r_max, "largest radius")->capture_default_str();
  fd->add_option("--samples", samples, "radii per time")->capture_default_str();
  fd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* sw = app.add_subcommand("sweep", "map propA/B/C and the regime edges over a gamma grid");
  sw->add_option("--out", out_dir, "output directory")->envname("RIL_OUT_DIR");
  int sn = 3, gsteps = 5, lsteps = 8;
  double gmin = 1.1, gmax = 3.0;
  std::vector<double> gammas;
  bool full = false;
  sw->add_option("--n", sn, "space dimension")->check(CLI::IsMember({2, 3}))->capture_default_str();
  sw->add_option("--gamma", gammas, "explicit gamma values, comma separated")->delimiter(',');
  sw->add_option("--gamma-min", gmin)->capture_default_str();
  sw->add_option("--gamma-max", gmax)->capture_default_str();
  sw->add_option("--gamma-steps", gsteps)->check(CLI::PositiveNumber)->capture_default_str();
  sw->add_option("--lambda-steps", lsteps, "interior lambda points of (1, lambda_circ)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sw->add_flag("--full", full, "run the pipeline where the regime holds to get a Hugoniot verdict");
  sw->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*an) return cmd_analyze(pa, out_dir);
  if (*fd) {
    std::vector<double> ts;
    std::stringstream ss(t_list);
    for (std::string item; std::getline(ss, item, ',');) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        ts.push_back(std::stod(item));
      } catch (const std::exception&) {
        std::fprintf(stderr, "{\"error\":\"InvalidArgument\",\"message\":\"bad time '%s'\"}\n", item.c_str());
        return 1;
      }
    }
    return cmd_field(pf, out_dir, ts, r_min, r_max, samples, jobs);
  }
  return cmd_sweep(sn, gammas, gmin, gmax, gsteps, lsteps, full, jobs, out_dir);
}
