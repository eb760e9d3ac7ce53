#pragma once

#include <vector>

#include "epsim/protocol.hpp"

namespace epsim {

/// Two-level adaptive time step: a fine step inside transition windows
/// around pulse edges, a coarse step elsewhere.
struct StepController {
  double dt_transition = 0.1e-6;   ///< s, inside edge windows
  double dt_plateau = 1.0e-6;      ///< s, elsewhere
  double transition_window = 2e-6; ///< s, half-width around each edge

  void validate() const;  ///< throws ConfigError on invariant violation
};

/// All step instants from 0 to the protocol duration. Segment boundaries
/// (edge-window starts/ends, protocol end) land exactly on grid points;
/// within a segment the prescribed step is shrunk uniformly to fit.
std::vector<double> build_time_grid(const PulseProtocol& protocol,
                                    const StepController& controller);

}  // namespace epsim
