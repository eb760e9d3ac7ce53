#pragma once

namespace epsim {

/// Vacuum permittivity, F/m (CODATA 2018).
inline constexpr double kEps0 = 8.8541878128e-12;

}  // namespace epsim
