/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */


#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ril/flowfield.hpp"
#include "ril/hugoniot.hpp"
#include "ril/integrator.hpp"

namespace ril {

struct SweepResult;

// %.15g; "nan"/"inf" spelled as printf does.
std::string fmt15(double v);
// Value rounded to 15 significant digits.
double round15(double v);

void write_trajectory_csv(std::ostream& os, const std::vector<const Trajectory*>& branches);
void write_trajectory_csv(std::ostream& os, const GlobalTrajectory& gamma);
void write_locus_csv(std::ostream& os, const HugoniotLocus& locus);
void write_field_header(std::ostream& os);
void write_field_row(std::ostream& os, const FlowSample& s);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_regime_csv(std::ostream& os, const SweepResult& sweep);

// Opens path for writing, runs body, throws Error(io) on failure.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace ril
