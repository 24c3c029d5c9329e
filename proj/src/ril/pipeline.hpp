/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ril/flowfield.hpp"
#include "ril/hugoniot.hpp"
#include "ril/integrator.hpp"
#include "ril/params.hpp"
#include "ril/phaseplane.hpp"

namespace ril {

inline constexpr int kReportSchemaVersion = 1;

struct AnalysisOptions {
  SeedDirection seed = SeedDirection::vertical_branch();
  double x9 = 1.0;
  double intersection_tol = 1e-6;
  TraceOptions trace;
  std::size_t isentropy_samples = 10000;
  unsigned seed_rng = 20260101u;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = kNaN;
  double tolerance = kNaN;
};

// Outcome of the single-point pipeline. Exit codes: 0 all checks pass, 2 outside the proven regime, 1 failure.
struct Analysis {
  GasParams params;
  AnalysisOptions options;
  ThresholdReport thresholds;
  CriticalPointSet critical;
  LayoutReport layout;
  BarrierReport barrier;
  bool relevant = false;
  bool traced = false;

  GlobalTrajectory gamma;
  std::shared_ptr<const FlowField> field;
  CollapseProfile collapse;
  std::vector<double> stagnation;
  ConservedIntegrals integrals_t0, integrals_t1, integrals_tm1;
  IsentropyReport isentropy;
  Asymptotics asymptotics;
  CollapseCompression compression;
  HugoniotLocus locus;
  IntersectionVerdict verdict;

  std::vector<Check> checks;
  int exit_code = 1;
  std::string failure;  // machine-readable cause, empty on success
  double seconds = 0;
};

// Never throws for parameter problems; they are recorded in failure/exit_code.
Analysis run_analysis(const GasParams& params, const AnalysisOptions& opt = {});

std::string report_json(const Analysis& a);

struct SweepPoint {
  int n = 3;
  double gamma = kNaN, lambda = kNaN;
  bool relevant = false, propA = false, propB = false, propC = false;
  std::string verdict;  // NoIntersection, Intersection, skipped, or an error name
};

struct SweepRow {
  double gamma = kNaN;
  double lambda_circ = kNaN;
  double lambda_A = kNaN;    // upper end of the propA interval starting at lambda = 1
  double lambda_max = kNaN;  // upper end of the interval where relevant, A, B and C all hold
};

struct SweepOptions {
  int n = 3;
  std::vector<double> gammas;
  int lambda_steps = 8;  // interior points of (1, lambda_circ)
  bool full = false;     // run the full pipeline where the regime is proven to get a verdict
  int jobs = 1;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ordered by (gamma, lambda)
  std::vector<SweepRow> rows;      // ordered by gamma
};

SweepResult run_sweep(const SweepOptions& opt);

struct FieldTable {
  std::vector<FlowSample> samples;  // ordered by (t, r)
  std::size_t excluded = 0;         // grid points at (0, 0)
};

// Log-spaced r on [r_min, r_max]; r_min = 0 adds the centre in front of a grid starting at r_max 1e-6.
FieldTable evaluate_grid(const FlowField& field, const std::vector<double>& ts, double r_min, double r_max,
                         std::size_t nr, int jobs = 1);

// Bisection for the end of the interval (1, lambda) on which pred holds; NaN if pred fails near 1.
double regime_edge(int n, double gamma, bool all_properties);

}  // namespace ril
