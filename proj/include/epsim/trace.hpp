#pragma once

#include <span>
#include <string>
#include <vector>

namespace epsim {

/// Simulation output sampled on a common time grid. Columns are SI:
/// t [s], U [V], I [A], pore concentrations at the sample centre,
/// apparent conductivity sigma_app [S/m] and temperature T [K] there.
struct SimTrace {
  std::vector<double> t, U, I, p0, p1, p2, sigma, T;

  std::size_t size() const { return t.size(); }
  void push(double t_, double U_, double I_, double p0_, double p1_, double p2_,
            double sigma_, double T_);
};

void write_trace_csv(const SimTrace& trace, const std::string& path);
SimTrace read_trace_csv(const std::string& path);

/// Measured terminal waveform, CSV columns `t,U,I` in SI units. Leading
/// `# key: value` comment lines may carry sample metadata.
struct MeasuredTrace {
  std::vector<double> t, U, I;
  std::string sample_id;
  double temperature = 0.0;  ///< K, 0 when unknown
};

void write_measured_csv(const MeasuredTrace& trace, const std::string& path);
MeasuredTrace read_measured_csv(const std::string& path);

/// Linear interpolation of (ts, ys) at x; clamps outside the range.
double interp_at(std::span<const double> ts, std::span<const double> ys, double x);

/// Resample every column onto the uniform grid 0, dt_out, 2*dt_out, ...
/// covering [0, t.back()].
SimTrace resample_uniform(const SimTrace& trace, double dt_out);

}  // namespace epsim
