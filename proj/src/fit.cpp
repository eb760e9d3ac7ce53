#include "epsim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "epsim/errors.hpp"
#include "epsim/lumped.hpp"

namespace epsim {

namespace {

EpParams merged_params(const FitProblem& problem, const std::vector<double>& u) {
  EpParams p = *problem.base.ep;
  for (std::size_t i = 0; i < problem.free_params.size(); ++i) {
    const auto& name = problem.free_params[i];
    const auto& b = problem.bounds.at(name);
    const double v = b.lo + std::clamp(u[i], 0.0, 1.0) * (b.hi - b.lo);
    p.set(name, v);
  }
  return p;
}

double out_of_box_penalty(const std::vector<double>& u) {
  double pen = 0.0;
  for (double v : u) {
    const double excess = std::max({0.0, -v, v - 1.0});
    pen += excess * excess;
  }
  return 100.0 * pen;
}

double trace_residual(const FitProblem& problem, const MaterialModel& m,
                      const FitTrace& ft) {
  PulseProtocol proto = problem.protocol;
  proto.amplitude = ft.field_level * problem.geometry.sample_height;
  // coarse output grid; the raw per-step samples are what we interpolate.
  // Candidates that the integrator rejects (e.g. tau0 too fast for the
  // step controller) are scored as infeasible rather than aborting the fit.
  RunResult run;
  try {
    run = lumped_run(m, proto, problem.geometry, problem.controller,
                     proto.duration());
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
  if (!run.ok) return std::numeric_limits<double>::infinity();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ft.data.t.size(); ++i) {
    const double sim = interp_at(run.raw.t, run.raw.I, ft.data.t[i]);
    const double d = sim - ft.data.I[i];
    num += d * d;
    den += ft.data.I[i] * ft.data.I[i];
  }
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

double fit_objective(const FitProblem& problem, const EpParams& candidate) {
  if (!problem.base.ep) throw ConfigError("fit: base material has no ep parameter set");
  if (problem.traces.empty()) throw ConfigError("fit: at least one trace required");
  try {
    candidate.validate();
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
  MaterialModel m = problem.base;
  m.ep = candidate;
  double num = 0.0, wsum = 0.0;
  for (const auto& ft : problem.traces) {
    num += ft.weight * trace_residual(problem, m, ft);
    wsum += ft.weight;
  }
  if (!(wsum > 0.0)) throw ConfigError("fit: weights must sum to a positive value");
  return num / wsum;
}

FitResult fit_parameters(const FitProblem& problem) {
  if (!problem.base.ep) throw ConfigError("fit: base material has no ep parameter set");
  for (const auto& name : problem.free_params) {
    const auto it = problem.bounds.find(name);
    if (it == problem.bounds.end()) {
      throw ConfigError("fit: missing bounds for free parameter '" + name + "'");
    }
    const auto& b = it->second;
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
      throw ConfigError("fit: invalid bounds for '" + name + "'");
    }
  }

  FitResult result;
  const std::size_t nf = problem.free_params.size();
  const auto objective_u = [&](const std::vector<double>& u) {
    return fit_objective(problem, merged_params(problem, u)) + out_of_box_penalty(u);
  };

  if (nf == 0) {
    result.params = *problem.base.ep;
    result.objective = fit_objective(problem, result.params);
    result.total_evals = 1;
  } else {
    // restarts: bounds midpoint, the base parameter set, one random point
    std::vector<std::vector<double>> seeds;
    seeds.emplace_back(nf, 0.5);
    std::vector<double> u_base(nf);
    for (std::size_t i = 0; i < nf; ++i) {
      const auto& b = problem.bounds.at(problem.free_params[i]);
      u_base[i] = std::clamp(
          (problem.base.ep->get(problem.free_params[i]) - b.lo) / (b.hi - b.lo), 0.0, 1.0);
    }
    seeds.push_back(u_base);
    std::mt19937 rng(problem.rng_seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> u_rand(nf);
    for (auto& v : u_rand) v = uniform(rng);
    seeds.push_back(u_rand);

    bool any_finite = false;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_u(nf, 0.5);
    for (const auto& seed : seeds) {
      if (std::isfinite(objective_u(seed))) {
        any_finite = true;
      } else {
        SimplexResult skipped;
        skipped.f = std::numeric_limits<double>::infinity();
        result.restarts.push_back(skipped);
        continue;
      }
      SimplexOptions opts;
      opts.max_evals = problem.max_evals_per_start;
      opts.initial_step = 0.08;
      auto res = nelder_mead(objective_u, seed, opts);
      result.total_evals += res.evals;
      if (res.f < best) {
        best = res.f;
        best_u = res.x;
      }
      result.restarts.push_back(std::move(res));
    }
    if (!any_finite) {
      throw FitError("fit: objective non-finite at every start point");
    }
    for (auto& v : best_u) v = std::clamp(v, 0.0, 1.0);
    result.params = merged_params(problem, best_u);
    result.objective = fit_objective(problem, result.params);

    // curvature probe: how much the objective responds to a 2%-of-range
    // perturbation of each parameter around the optimum. Probes that land
    // on infeasible candidates shrink toward the optimum; a side that stays
    // infeasible falls back to a one-sided difference.
    for (std::size_t i = 0; i < nf; ++i) {
      double curvature = 0.0;
      double h = 0.02;
      for (int attempt = 0; attempt < 6; ++attempt) {
        auto up = best_u, dn = best_u;
        up[i] = std::min(1.0, up[i] + h);
        dn[i] = std::max(0.0, dn[i] - h);
        const double fp = objective_u(up);
        const double fm = objective_u(dn);
        const double scale = (result.objective + 1e-12) * (h / 0.02) * (h / 0.02);
        if (std::isfinite(fp) && std::isfinite(fm)) {
          curvature = (fp + fm - 2.0 * result.objective) / scale;
          break;
        }
        if (std::isfinite(fp) || std::isfinite(fm)) {
          const double fs = std::isfinite(fp) ? fp : fm;
          curvature = 2.0 * (fs - result.objective) / scale;
          break;
        }
        h *= 0.5;
      }
      SensitivityEntry entry;
      entry.name = problem.free_params[i];
      entry.curvature = curvature;
      entry.insensitive = std::abs(curvature) < 0.05;
      result.sensitivity.push_back(entry);
    }
  }

  MaterialModel m = problem.base;
  m.ep = result.params;
  for (const auto& ft : problem.traces) {
    result.per_trace_residual.push_back(std::sqrt(trace_residual(problem, m, ft)));
  }
  return result;
}

CompareReport compare_traces(const SimTrace& sim, const MeasuredTrace& meas) {
  if (sim.size() < 2 || meas.t.size() < 2) {
    throw ConfigError("compare: traces must hold at least two samples");
  }
  const double lo = std::max(sim.t.front(), meas.t.front());
  const double hi = std::min(sim.t.back(), meas.t.back());
  if (!(lo < hi)) throw ConfigError("compare: trace time ranges do not overlap");

  CompareReport rep;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < meas.t.size(); ++i) {
    if (meas.t[i] < lo || meas.t[i] > hi) continue;
    const double s = interp_at(sim.t, sim.I, meas.t[i]);
    const double d = s - meas.I[i];
    num += d * d;
    den += meas.I[i] * meas.I[i];
    ++rep.samples;
  }
  rep.rel_l2 = den > 0.0 ? std::sqrt(num / den) : 0.0;

  // per-pulse plateau table from the measured voltage column
  double umax = 0.0;
  for (double u : meas.U) umax = std::max(umax, std::abs(u));
  if (umax > 0.0) {
    const double thresh = 0.5 * umax;
    std::size_t i = 0;
    int pulse = 0;
    while (i < meas.t.size()) {
      if (std::abs(meas.U[i]) <= thresh) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < meas.t.size() && std::abs(meas.U[j]) > thresh) ++j;
      // plateau sample: the last fifth of the on-region
      const std::size_t w0 = i + (j - i) * 4 / 5;
      double im = 0.0, is = 0.0;
      std::size_t count = 0;
      for (std::size_t k = w0; k < j; ++k) {
        im += meas.I[k];
        is += interp_at(sim.t, sim.I, meas.t[k]);
        ++count;
      }
      if (count > 0) {
        PulsePlateauRow row;
        row.pulse = ++pulse;
        row.t_start = meas.t[w0];
        row.t_end = meas.t[j - 1];
        row.I_meas = im / static_cast<double>(count);
        row.I_sim = is / static_cast<double>(count);
        rep.plateaus.push_back(row);
      }
      i = j;
    }
  }
  return rep;
}

}  // namespace epsim
