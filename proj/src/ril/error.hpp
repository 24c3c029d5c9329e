/*
 * (C) Copyright 2026 The ril authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace ril {

// Numbering matches ril_status in the public C header.
enum class ErrorCode : int {
  domain = 1,
  degenerate = 2,
  barrier_exit = 3,
  no_node_capture = 4,
  bisection_stall = 5,
  non_monotone = 6,
  kink_at_origin = 7,
  vacuum_encounter = 8,
  at_singularity = 9,
  not_through_origin = 10,
  divergent_integral = 11,
  sonic_ahead = 12,
  no_admissible_branch = 13,
  at_pole = 14,
  insufficient_overlap = 15,
  io = 16,
  invalid_argument = 17,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::degenerate: return "Degenerate";
    case ErrorCode::barrier_exit: return "BarrierExit";
    case ErrorCode::no_node_capture: return "NoNodeCapture";
    case ErrorCode::bisection_stall: return "BisectionStall";
    case ErrorCode::non_monotone: return "NonMonotone";
    case ErrorCode::kink_at_origin: return "KinkAtOrigin";
    case ErrorCode::vacuum_encounter: return "VacuumEncounter";
    case ErrorCode::at_singularity: return "AtSingularity";
    case ErrorCode::not_through_origin: return "NotThroughOrigin";
    case ErrorCode::divergent_integral: return "DivergentIntegral";
    case ErrorCode::sonic_ahead: return "SonicAhead";
    case ErrorCode::no_admissible_branch: return "NoAdmissibleBranch";
    case ErrorCode::at_pole: return "AtPole";
    case ErrorCode::insufficient_overlap: return "InsufficientOverlap";
    case ErrorCode::io: return "IoError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ril
