#pragma once

#include <functional>
#include <vector>

namespace epsim {

/// Downhill-simplex minimizer options and trace.
struct SimplexOptions {
  int max_evals = 20000;
  double f_tol_rel = 1e-9;   ///< stop when the simplex f-spread shrinks below
  double f_tol_abs = 1e-14;  ///< f_tol_abs + f_tol_rel * |f_best|
  double x_tol = 1e-8;       ///< or the simplex diameter falls below this
  double initial_step = 0.05;
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int evals = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> history;  ///< (eval count, best f)
};

/// Nelder-Mead with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 0.5, 0.5). The initial simplex is x0 plus
/// initial_step along each coordinate.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opts = {});

}  // namespace epsim
