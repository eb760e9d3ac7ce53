#include "epsim/thermal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "epsim/errors.hpp"

namespace epsim {

void joule_power_density(std::span<const double> J, std::span<const double> E,
                         std::span<double> q_out) {
  if (J.size() != E.size() || J.size() % 2 != 0 || q_out.size() != J.size() / 2) {
    throw ConfigError("joule_power_density: layout mismatch between J, E and q");
  }
  for (std::size_t i = 0; i < q_out.size(); ++i) {
    q_out[i] = J[2 * i] * E[2 * i] + J[2 * i + 1] * E[2 * i + 1];
  }
}

double joule_power_density(double J, double E) { return J * E; }

void thermal_step_adiabatic(ThermalField& field, std::span<const double> q,
                            double dt, const MaterialModel& m) {
  if (q.size() != field.T.size()) {
    throw ConfigError("thermal_step_adiabatic: q layout does not match field");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("thermal_step_adiabatic: dt must be > 0");
  const double scale = dt / (m.rho * m.cp);
  for (std::size_t i = 0; i < q.size(); ++i) field.T[i] += q[i] * scale;
}

ThermalDiffusion::ThermalDiffusion(const Mesh& mesh, const MaterialModel& m)
    : mesh_(mesh), rho_cp_(m.rho * m.cp) {
  const std::size_t n = mesh.nodes.size();
  capacity_.assign(n, 0.0);
  std::vector<double> row_abs(n, 0.0);

  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const auto& el = mesh.elements[e];
    if (el.region != Region::Sample) continue;
    const auto& p0 = mesh.nodes[el.n[0]];
    const auto& p1 = mesh.nodes[el.n[1]];
    const auto& p2 = mesh.nodes[el.n[2]];
    const double area = mesh.element_area(e);
    const double rbar = mesh.element_centroid_r(e);
    const double w = 2.0 * std::numbers::pi * rbar * area;

    // P1 gradients: grad N_i = (b_i, c_i) / (2A)
    const std::array<double, 3> b = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const std::array<double, 3> c = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    for (int i = 0; i < 3; ++i) {
      // lumped axisymmetric capacity: rho*cp * integral of N_i * 2*pi*r
      const double ri = mesh.nodes[el.n[i]][0];
      const double r_sum = p0[0] + p1[0] + p2[0];
      capacity_[el.n[i]] +=
          rho_cp_ * 2.0 * std::numbers::pi * (area / 12.0) * (ri + r_sum);
      for (int jn = 0; jn < 3; ++jn) {
        const double kij =
            m.k_thermal * (b[i] * b[jn] + c[i] * c[jn]) / (4.0 * area * area) * w;
        stiffness_.push_back({el.n[i], el.n[jn], kij});
        row_abs[el.n[i]] += std::abs(kij);
      }
    }
  }

  // Gershgorin bound on the largest eigenvalue of M^-1 K
  double lambda_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (capacity_[i] > 0.0) lambda_max = std::max(lambda_max, row_abs[i] / capacity_[i]);
  }
  dt_stable_ = lambda_max > 0.0 ? 1.8 / lambda_max : std::numeric_limits<double>::max();
}

void ThermalDiffusion::step(ThermalField& field, std::span<const double> q,
                            double dt) const {
  if (q.size() != field.T.size() || field.T.size() != mesh_.nodes.size()) {
    throw ConfigError("ThermalDiffusion::step: layout mismatch");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("ThermalDiffusion::step: dt must be > 0");
  substepped(field, q, dt, 0);
}

void ThermalDiffusion::substepped(ThermalField& field, std::span<const double> q,
                                  double dt, int depth) const {
  constexpr int kMaxSubsteps = 10000;
  const int nsub = std::max(1, static_cast<int>(std::ceil(dt / dt_stable_)));
  if (nsub > kMaxSubsteps) {
    if (depth >= 8) {
      throw NumericalError("ThermalDiffusion: substep limit exceeded; step rejected");
    }
    substepped(field, q, dt / 2.0, depth + 1);
    substepped(field, q, dt / 2.0, depth + 1);
    return;
  }
  const double h = dt / nsub;
  const std::size_t n = field.T.size();
  std::vector<double> flux(n);
  for (int s = 0; s < nsub; ++s) {
    std::fill(flux.begin(), flux.end(), 0.0);
    for (const auto& entry : stiffness_) {
      flux[entry.row] += entry.val * field.T[entry.col];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (capacity_[i] <= 0.0) continue;  // node outside the thermal domain
      const double source = q[i] * capacity_[i] / rho_cp_;  // W
      field.T[i] += h * (source - flux[i]) / capacity_[i];
    }
  }
}

}  // namespace epsim
