#pragma once

#include <vector>

namespace epsim {

/// Trapezoidal pulse train. A pulse occupies [k/rate, k/rate + pulse_width]
/// with a linear rise over rise_time, a plateau, and a linear fall over
/// fall_time; the voltage is zero between pulses. pulse_width is the full
/// base width (rise start to fall end).
struct PulseProtocol {
  double amplitude = 0.0;        ///< plateau voltage, V
  double pulse_width = 100e-6;   ///< s
  int count = 8;                 ///< number of pulses (0 = no stimulus)
  double repetition_rate = 5e3;  ///< Hz
  double rise_time = 1e-6;       ///< s
  double fall_time = 1e-6;       ///< s
  double post_burst_hold = 1e-4; ///< observation time after the last pulse, s

  void validate() const;  ///< throws ConfigError on invariant violation
  double period() const { return 1.0 / repetition_rate; }
  /// Total simulated time: last fall end plus the post-burst hold.
  double duration() const;
};

/// Instantaneous terminal voltage at time t >= 0.
double voltage_at(const PulseProtocol& p, double t);

/// All rise/fall start and end instants, sorted ascending (4 per pulse).
std::vector<double> edge_times(const PulseProtocol& p);

/// Standard electrochemotherapy burst: 8 pulses of 100 us at 5 kHz.
PulseProtocol esope_protocol(double amplitude_V);

}  // namespace epsim
