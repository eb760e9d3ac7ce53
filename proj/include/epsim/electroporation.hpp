#pragma once

#include "epsim/material.hpp"

namespace epsim {

/// Concentrations of the three conductivity-contributing membrane states
/// at one spatial degree of freedom. Always within [0, 1].
struct PoreConcentrations {
  double p0 = 0.0;  ///< prepores
  double p1 = 0.0;  ///< initial pores
  double p2 = 0.0;  ///< expanded pores
};

/// Logistic saturation of the prepore state vs field magnitude:
/// 1 / (1 + exp(-(E - E0)/dE0)). Strictly increasing, range (0, 1).
double beta0(double e_mag, const EpParams& ep);

/// Logistic saturation of the initial-pore state vs field magnitude.
double beta1(double e_mag, const EpParams& ep);

/// Time constant of the initial-pore state. Growth is accelerated by the
/// prepore concentration: tau1G * (1 - 0.5*p0); decay uses tau1D.
double tau1_effective(double p0, bool growing, const EpParams& ep);

/// Time constant of the expanded-pore state: tau2G growing, tau2D decaying.
double tau2_effective(bool growing, const EpParams& ep);

/// Advance the three states over dt under field magnitude e_mag (V/m).
/// Each state relaxes exponentially toward its target (beta0, beta1 and the
/// initial-pore concentration respectively) with the branch and the
/// p0-dependent tau1 chosen from pre-step values; the update is exact for
/// targets held constant over the step. Results are clamped to [0, 1].
PoreConcentrations state_step(const PoreConcentrations& p, double e_mag,
                              double dt, const EpParams& ep);

}  // namespace epsim
