#include "epsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace epsim {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& opts) {
  const std::size_t n = x0.size();
  SimplexResult result;

  std::vector<std::vector<double>> x(n + 1, x0);
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    x[i + 1][i] += opts.initial_step != 0.0 ? opts.initial_step : 0.05;
  }
  int evals = 0;
  const auto eval = [&](const std::vector<double>& p) {
    ++evals;
    return f(p);
  };
  for (std::size_t i = 0; i <= n; ++i) fx[i] = eval(x[i]);

  std::vector<std::size_t> order(n + 1);
  const auto sort_order = [&]() {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fx[a] < fx[b];
    });
  };

  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (evals < opts.max_evals) {
    sort_order();
    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second_worst = order[n - 1];
    result.history.emplace_back(evals, fx[best]);

    const double spread = std::abs(fx[worst] - fx[best]);
    if (spread <= opts.f_tol_abs + opts.f_tol_rel * std::abs(fx[best])) {
      result.converged = true;
      break;
    }
    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t d = 0; d < n; ++d) {
        diam = std::max(diam, std::abs(x[order[i]][d] - x[best][d]));
      }
    }
    if (diam <= opts.x_tol) {
      result.converged = true;
      break;
    }

    for (std::size_t d = 0; d < n; ++d) {
      double s = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        if (i != worst) s += x[i][d];
      }
      centroid[d] = s / static_cast<double>(n);
    }

    for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - x[worst][d]);
    const double fr = eval(xr);
    if (fr < fx[best]) {
      for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (xr[d] - centroid[d]);
      const double fe = eval(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
    } else if (fr < fx[second_worst]) {
      x[worst] = xr;
      fx[worst] = fr;
    } else {
      const bool outside = fr < fx[worst];
      const auto& toward = outside ? xr : x[worst];
      for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (toward[d] - centroid[d]);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fx[worst])) {
        x[worst] = xc;
        fx[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d) {
            x[i][d] = x[best][d] + 0.5 * (x[i][d] - x[best][d]);
          }
          fx[i] = eval(x[i]);
        }
      }
    }
    ++result.iterations;
  }

  sort_order();
  result.x = x[order[0]];
  result.f = fx[order[0]];
  result.evals = evals;
  return result;
}

}  // namespace epsim
