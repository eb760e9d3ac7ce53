#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace epsim {

/// One first-order relaxation pole of a dispersive dielectric.
struct DebyePole {
  double delta_eps = 0.0;  ///< relative-permittivity increment (dimensionless)
  double tau = 0.0;        ///< relaxation time, s
};

/// Pore-dynamics parameters: logistic field thresholds/slopes, state time
/// constants, and the conductivity increment of each pore state.
struct EpParams {
  double E0 = 0.0;      ///< prepore logistic center, V/m
  double dE0 = 0.0;     ///< prepore logistic slope, V/m
  double E1 = 0.0;      ///< initial-pore logistic center, V/m
  double dE1 = 0.0;     ///< initial-pore logistic slope, V/m
  double tau0 = 0.0;    ///< prepore time constant, s
  double tau1G = 0.0;   ///< initial-pore growth time constant, s
  double tau1D = 0.0;   ///< initial-pore decay time constant, s
  double tau2G = 0.0;   ///< expanded-pore growth time constant, s
  double tau2D = 0.0;   ///< expanded-pore decay time constant, s
  double sigP0 = 0.0;   ///< prepore conductivity increment, S/m
  double sigP1 = 0.0;   ///< initial-pore conductivity increment, S/m
  double sigP2 = 0.0;   ///< expanded-pore conductivity increment, S/m

  void validate() const;  ///< throws ConfigError on invariant violation

  static const std::array<const char*, 12>& field_names();
  double get(const std::string& name) const;
  void set(const std::string& name, double value);
};

/// Electrical dispersion, static conductivity and thermophysical constants
/// of one material region. Immutable after construction by convention; all
/// operations on it are pure.
struct MaterialModel {
  double eps_inf = 1.0;          ///< high-frequency relative permittivity
  double sigma_s = 0.0;          ///< static conductivity, S/m
  std::vector<DebyePole> poles;  ///< relaxation poles (may be empty)
  double rho = 0.0;              ///< density, kg/m^3
  double cp = 0.0;               ///< specific heat, J/(kg K)
  double k_thermal = 0.0;        ///< thermal conductivity, W/(m K)
  double chi = 0.0;              ///< conductivity temperature coefficient, 1/K
  double T0 = 293.15;            ///< reference temperature, K
  std::optional<EpParams> ep;    ///< pore-dynamics parameters, if any

  void validate() const;  ///< throws ConfigError on invariant violation
};

/// Complex relative permittivity of the multipole relaxation model at
/// angular frequency omega (rad/s). Throws std::invalid_argument for
/// omega <= 0 (the conduction term is singular at DC).
std::complex<double> complex_permittivity(const MaterialModel& m, double omega);

/// Real (conductive) part of the equivalent admittivity at angular
/// frequency omega >= 0: sigma_s plus the per-pole relaxation losses.
/// Monotonically non-decreasing in omega.
double equivalent_conductivity(const MaterialModel& m, double omega);

/// Conductivity augmented by the pore-state concentrations {p0, p1, p2}.
/// Each concentration must lie in [0, 1]; throws std::invalid_argument
/// otherwise.
double sigma_p(double base, const std::array<double, 3>& p, const EpParams& ep);

/// Temperature correction: sig_p * (1 + chi * (T - T0)).
double sigma_t(double sig_p, double T, const MaterialModel& m);

/// JSON (de)serialization of material presets. The schema uses SI units:
/// {eps_inf, sigma_s, poles:[{delta_eps,tau}], rho, cp, k_thermal, chi, T0,
///  ep:{E0,dE0,E1,dE1,tau0,tau1G,tau1D,tau2G,tau2D,sigP0,sigP1,sigP2}?}
MaterialModel material_from_json_text(const std::string& text);
std::string material_to_json_text(const MaterialModel& m);
MaterialModel load_material(const std::string& path);
void save_material(const MaterialModel& m, const std::string& path);

}  // namespace epsim
