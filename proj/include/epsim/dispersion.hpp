#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "epsim/material.hpp"

namespace epsim {

/// Auxiliary relaxation fields: one delayed copy of the driving electric
/// field per pole and per scalar degree of freedom. For a meshed field with
/// two in-plane components, dof_count = node_count * 2; the lumped model
/// uses dof_count = 1.
class AdeState {
 public:
  AdeState() = default;
  AdeState(std::size_t pole_count, std::size_t dof_count)
      : poles_(pole_count), dofs_(dof_count), e_(pole_count * dof_count, 0.0) {}

  std::size_t pole_count() const { return poles_; }
  std::size_t dof_count() const { return dofs_; }

  double& at(std::size_t pole, std::size_t dof) { return e_[pole * dofs_ + dof]; }
  double at(std::size_t pole, std::size_t dof) const { return e_[pole * dofs_ + dof]; }

  std::span<double> pole_values(std::size_t pole) {
    return {e_.data() + pole * dofs_, dofs_};
  }
  std::span<const double> pole_values(std::size_t pole) const {
    return {e_.data() + pole * dofs_, dofs_};
  }

 private:
  std::size_t poles_ = 0;
  std::size_t dofs_ = 0;
  std::vector<double> e_;
};

/// Per-step coefficients of the exponential pole update: the decay factor
/// exp(-dt/tau_k) and the pole conductance eps0*delta_eps_k/tau_k.
struct AdeCoeffs {
  std::vector<double> decay;        ///< exp(-dt/tau_k)
  std::vector<double> conductance;  ///< S/m
  double dt = 0.0;
};
AdeCoeffs ade_coeffs(const MaterialModel& m, double dt);

/// One exponential-integrator step with the field held constant over dt:
/// e_k <- E + (e_k - E) * exp(-dt/tau_k), exact for piecewise-constant E.
/// Throws NumericalError on non-finite field samples, ConfigError on layout
/// mismatch.
void ade_step(AdeState& state, std::span<const double> e_field, double dt,
              const MaterialModel& m);

/// Scalar convenience overload (dof_count == 1).
void ade_step(AdeState& state, double e_field, double dt, const MaterialModel& m);

/// Total dispersive current density sum_k (eps0*delta_eps_k/tau_k)*(E - e_k)
/// written per dof into `out`. Throws ConfigError on layout mismatch.
void pole_current_density(const AdeState& state, std::span<const double> e_field,
                          const MaterialModel& m, std::span<double> out);

/// Scalar convenience overload (dof_count == 1).
double pole_current_density(const AdeState& state, double e_field,
                            const MaterialModel& m);

/// Validation drive: integrates the pole system under a unit sinusoid at
/// `freq` for `cycles` periods and extracts the equivalent complex
/// conductivity (A/m^2 per V/m) of the total current density from the last
/// full cycle. At steady state this must equal j*omega*eps0*eps_r(omega).
/// Throws NumericalError if the last two cycles disagree (no steady state)
/// and std::invalid_argument for freq <= 0 or cycles < 10.
std::complex<double> sinusoidal_admittance_check(const MaterialModel& m,
                                                 double freq, int cycles = 12);

}  // namespace epsim
