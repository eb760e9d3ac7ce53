#pragma once

#include <span>
#include <vector>

#include "epsim/geometry.hpp"
#include "epsim/material.hpp"

namespace epsim {

enum class ThermalMode { Adiabatic, Diffusive };

/// Nodal temperature field with its reference (initial) temperature.
struct ThermalField {
  std::vector<double> T;  ///< K, per node
  double T0 = 293.15;     ///< K

  explicit ThermalField(std::size_t n = 0, double t0 = 293.15)
      : T(n, t0), T0(t0) {}
};

/// Pointwise volumetric heating J.E for planar (r,z) vector fields laid out
/// as [r0, z0, r1, z1, ...]. Throws ConfigError on layout mismatch.
void joule_power_density(std::span<const double> J, std::span<const double> E,
                         std::span<double> q_out);

/// Scalar convenience overload.
double joule_power_density(double J, double E);

/// Adiabatic heating: T += q * dt / (rho * cp), per node.
void thermal_step_adiabatic(ThermalField& field, std::span<const double> q,
                            double dt, const MaterialModel& m);

/// Explicit conduction on the sample region of a mesh, with insulated
/// exterior. Substeps are chosen from a Gershgorin bound on the explicit
/// stability limit; if the required substep count exceeds the cap the step
/// is split in half recursively, and rejected if still too stiff.
class ThermalDiffusion {
 public:
  ThermalDiffusion(const Mesh& mesh, const MaterialModel& m);

  /// Advance temperature by dt with nodal heating q (W/m^3).
  void step(ThermalField& field, std::span<const double> q, double dt) const;

  /// Lumped nodal heat capacities, J/K (zero for nodes outside the sample).
  const std::vector<double>& capacity() const { return capacity_; }

 private:
  void substepped(ThermalField& field, std::span<const double> q, double dt,
                  int depth) const;

  const Mesh& mesh_;
  double rho_cp_;
  double dt_stable_;
  std::vector<double> capacity_;
  // thermal stiffness in triplet form (small meshes; applied matrix-free)
  struct Entry { int row, col; double val; };
  std::vector<Entry> stiffness_;
};

}  // namespace epsim
