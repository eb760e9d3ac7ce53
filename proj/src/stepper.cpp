#include "epsim/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "epsim/errors.hpp"

namespace epsim {

void StepController::validate() const {
  if (!(dt_transition > 0.0) || !(dt_plateau > 0.0)) {
    throw ConfigError("controller: time steps must be > 0");
  }
  if (!(dt_transition <= dt_plateau)) {
    throw ConfigError("controller: dt_transition must be <= dt_plateau");
  }
  if (!(transition_window >= 0.0)) {
    throw ConfigError("controller: transition_window must be >= 0");
  }
}

std::vector<double> build_time_grid(const PulseProtocol& protocol,
                                    const StepController& controller) {
  protocol.validate();
  controller.validate();
  const double t_end = protocol.duration();

  // merged fine-step windows around the pulse edges
  std::vector<std::pair<double, double>> windows;
  for (double e : edge_times(protocol)) {
    const double lo = std::max(0.0, e - controller.transition_window);
    const double hi = std::min(t_end, e + controller.transition_window);
    if (hi <= lo) continue;
    if (!windows.empty() && lo <= windows.back().second) {
      windows.back().second = std::max(windows.back().second, hi);
    } else {
      windows.emplace_back(lo, hi);
    }
  }

  // segment boundaries: window edges plus the run end
  std::vector<double> bounds{0.0, t_end};
  for (const auto& w : windows) {
    bounds.push_back(w.first);
    bounds.push_back(w.second);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               bounds.end());

  std::vector<double> grid{0.0};
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double a = bounds[s];
    const double b = bounds[s + 1];
    if (b <= a || a >= t_end) continue;
    const double mid = 0.5 * (a + b);
    bool fine = false;
    for (const auto& w : windows) {
      if (mid >= w.first && mid <= w.second) {
        fine = true;
        break;
      }
    }
    const double dt_want = fine ? controller.dt_transition : controller.dt_plateau;
    const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / dt_want - 1e-9)));
    for (long i = 1; i <= n; ++i) {
      grid.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  return grid;
}

}  // namespace epsim
