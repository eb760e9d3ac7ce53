#pragma once

#include <string>
#include <vector>

#include "epsim/dispersion.hpp"
#include "epsim/electroporation.hpp"
#include "epsim/geometry.hpp"
#include "epsim/material.hpp"
#include "epsim/protocol.hpp"
#include "epsim/stepper.hpp"
#include "epsim/trace.hpp"

namespace epsim {

/// Result of a protocol run: the resampled trace plus raw (per-step)
/// samples for numerically sensitive checks. `ok` is false when the run
/// aborted; the trace then holds the samples up to the failure.
struct RunResult {
  SimTrace trace;            ///< uniformly resampled output
  SimTrace raw;              ///< per-step samples
  std::vector<double> I_ground;  ///< per-step ground current (field solver only)
  std::vector<std::vector<double>> ade;  ///< per-step aux fields, when recorded
  bool ok = true;
  std::string error;
};

/// Scalar reduction of the coupled model under a uniform field E = U/h over
/// a plate area A: per step the material response, pore kinetics and
/// adiabatic heating are advanced with the same update rules as the field
/// solver, but with no spatial coupling. Serves as the independent oracle
/// for the field solver and as a fast preview path.
class LumpedIntegrator {
 public:
  LumpedIntegrator(const MaterialModel& m, double height, double area);

  struct Sample {
    double E = 0.0;        ///< V/m
    double J = 0.0;        ///< A/m^2 (total: conductive + displacement + poles)
    double I = 0.0;        ///< A
    PoreConcentrations p;
    double sigma_app = 0.0;  ///< S/m, after the step
    double T = 0.0;          ///< K, after the step
  };

  /// Advance one step: the terminal voltage is U_next at the end of the
  /// step and the field is held constant across it.
  Sample step(double u_next, double dt);

  const MaterialModel& material() const { return m_; }
  const std::vector<double>& ade_values() const { return e_; }
  double temperature() const { return T_; }
  const PoreConcentrations& pores() const { return p_; }

 private:
  MaterialModel m_;
  double h_, area_;
  std::vector<double> e_;   // per-pole auxiliary fields
  PoreConcentrations p_;
  double T_;
  double e_prev_ = 0.0;
  // cached per-dt coefficients
  double dt_cached_ = -1.0;
  AdeCoeffs coeffs_;
};

/// Run a full protocol on the lumped model. dt scheduling, output grid and
/// trace schema match the field solver. With record_ade the per-step
/// auxiliary fields are kept for diagnostics.
RunResult lumped_run(const MaterialModel& m, const PulseProtocol& protocol,
                     const AxiGeometry& geom, const StepController& controller,
                     double output_dt = 1e-7, bool record_ade = false);

}  // namespace epsim
