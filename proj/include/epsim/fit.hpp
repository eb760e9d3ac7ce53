#pragma once

#include <map>
#include <string>
#include <vector>

#include "epsim/geometry.hpp"
#include "epsim/material.hpp"
#include "epsim/optimize.hpp"
#include "epsim/protocol.hpp"
#include "epsim/stepper.hpp"
#include "epsim/trace.hpp"

namespace epsim {

/// One measured waveform with the nominal field level it was driven at
/// (amplitude = field_level * sample height) and its weight in the loss.
struct FitTrace {
  MeasuredTrace data;
  double field_level = 0.0;  ///< V/m
  double weight = 1.0;
};

struct ParamBounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Weighted relative least-squares fit of selected pore-kinetics parameters
/// to measured terminal currents, simulated on the fast lumped path.
struct FitProblem {
  MaterialModel base;        ///< material with the starting parameter set
  AxiGeometry geometry;
  PulseProtocol protocol;    ///< pulse shape; amplitude set per trace
  StepController controller;
  std::vector<FitTrace> traces;
  std::vector<std::string> free_params;
  std::map<std::string, ParamBounds> bounds;
  unsigned rng_seed = 2024;
  int max_evals_per_start = 6000;
};

struct SensitivityEntry {
  std::string name;
  double curvature = 0.0;  ///< relative objective curvature over a 2% probe
  bool insensitive = false;
};

struct FitResult {
  EpParams params;
  double objective = 0.0;
  std::vector<double> per_trace_residual;  ///< relative L2 per trace
  std::vector<SensitivityEntry> sensitivity;
  std::vector<SimplexResult> restarts;
  int total_evals = 0;
};

/// Objective: weighted mean over traces of |I_sim - I_meas|^2 / |I_meas|^2,
/// the simulated current resampled onto each measured grid.
double fit_objective(const FitProblem& problem, const EpParams& candidate);

/// Simplex minimization restarted from the bounds midpoint, the base
/// parameter set and one seeded random point; returns the best restart.
/// Throws FitError when the objective is non-finite at every start.
FitResult fit_parameters(const FitProblem& problem);

/// Trace comparison report.
struct PulsePlateauRow {
  int pulse = 0;
  double t_start = 0.0, t_end = 0.0;
  double I_meas = 0.0, I_sim = 0.0;
};

struct CompareReport {
  double rel_l2 = 0.0;
  std::size_t samples = 0;
  std::vector<PulsePlateauRow> plateaus;
};

/// Resampled residual metrics over the overlapping time range; pulses are
/// detected from the measured voltage column when present. Throws
/// ConfigError for disjoint time ranges.
CompareReport compare_traces(const SimTrace& sim, const MeasuredTrace& meas);

}  // namespace epsim
