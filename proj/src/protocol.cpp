#include "epsim/protocol.hpp"

#include <cmath>

#include "epsim/errors.hpp"

namespace epsim {

void PulseProtocol::validate() const {
  if (count < 0) throw ConfigError("protocol: count must be >= 0");
  if (!(pulse_width > 0.0)) throw ConfigError("protocol: pulse_width must be > 0");
  if (!(repetition_rate > 0.0)) throw ConfigError("protocol: repetition_rate must be > 0");
  if (!(rise_time > 0.0)) throw ConfigError("protocol: rise_time must be > 0");
  if (!(fall_time > 0.0)) throw ConfigError("protocol: fall_time must be > 0");
  if (!(post_burst_hold >= 0.0)) throw ConfigError("protocol: post_burst_hold must be >= 0");
  if (!(pulse_width * repetition_rate < 1.0)) {
    throw ConfigError("protocol: pulse_width * repetition_rate must be < 1");
  }
  if (!(rise_time + fall_time < pulse_width)) {
    throw ConfigError("protocol: rise_time + fall_time must be < pulse_width");
  }
  if (!(amplitude >= 0.0)) throw ConfigError("protocol: amplitude must be >= 0");
}

double PulseProtocol::duration() const {
  if (count == 0) return post_burst_hold;
  return (count - 1) * period() + pulse_width + post_burst_hold;
}

double voltage_at(const PulseProtocol& p, double t) {
  if (t < 0.0 || p.count == 0) return 0.0;
  const double T = p.period();
  const double k = std::floor(t / T);
  if (k >= static_cast<double>(p.count)) return 0.0;
  const double s = t - k * T;  // time within the current period
  if (s >= p.pulse_width) return 0.0;
  if (s < p.rise_time) return p.amplitude * (s / p.rise_time);
  const double fall_start = p.pulse_width - p.fall_time;
  if (s <= fall_start) return p.amplitude;
  return p.amplitude * (p.pulse_width - s) / p.fall_time;
}

std::vector<double> edge_times(const PulseProtocol& p) {
  std::vector<double> t;
  t.reserve(4 * static_cast<std::size_t>(p.count));
  const double T = p.period();
  for (int k = 0; k < p.count; ++k) {
    const double start = k * T;
    t.push_back(start);
    t.push_back(start + p.rise_time);
    t.push_back(start + p.pulse_width - p.fall_time);
    t.push_back(start + p.pulse_width);
  }
  return t;
}

PulseProtocol esope_protocol(double amplitude_V) {
  PulseProtocol p;
  p.amplitude = amplitude_V;
  p.pulse_width = 100e-6;
  p.count = 8;
  p.repetition_rate = 5e3;
  p.rise_time = 1e-6;
  p.fall_time = 1e-6;
  p.post_burst_hold = 1e-4;
  return p;
}

}  // namespace epsim
