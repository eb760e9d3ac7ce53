#include "epsim/fem.hpp"

#include <cmath>
#include <numbers>

#include "epsim/constants.hpp"
#include "epsim/errors.hpp"

namespace epsim {

namespace {
constexpr int kSample = 0;
constexpr int kElectrode = 1;
}  // namespace

FemSolver::FemSolver(Mesh mesh, MaterialModel sample,
                     std::optional<MaterialModel> electrode)
    : FemSolver(std::move(mesh), std::move(sample), std::move(electrode), Config()) {}

FemSolver::FemSolver(Mesh mesh, MaterialModel sample,
                     std::optional<MaterialModel> electrode, Config cfg)
    : mesh_(std::move(mesh)), cfg_(cfg) {
  sample.validate();
  mat_[kSample] = std::move(sample);
  has_electrode_ = mesh_.has_region(Region::Electrode);
  if (has_electrode_) {
    if (!electrode) {
      throw ConfigError("fem: mesh contains electrode elements but no electrode material given");
    }
    electrode->validate();
    mat_[kElectrode] = std::move(*electrode);
  }

  const std::size_t nn = mesh_.nodes.size();
  const std::size_t ne = mesh_.elements.size();
  egeom_.resize(ne);
  recovery_weight_.assign(nn, 0.0);
  in_sample_.assign(nn, 0);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& el = mesh_.elements[e];
    const auto& p0 = mesh_.nodes[el.n[0]];
    const auto& p1 = mesh_.nodes[el.n[1]];
    const auto& p2 = mesh_.nodes[el.n[2]];
    ElemGeom g;
    g.area = mesh_.element_area(static_cast<int>(e));
    const double rbar = mesh_.element_centroid_r(static_cast<int>(e));
    g.wvol = 2.0 * std::numbers::pi * rbar * g.area;
    const std::array<double, 3> b = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const std::array<double, 3> c = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    for (int i = 0; i < 3; ++i) {
      g.grad[i] = {b[i] / (2.0 * g.area), c[i] / (2.0 * g.area)};
      g.r[i] = mesh_.nodes[el.n[i]][0];
    }
    egeom_[e] = g;
    if (el.region == Region::Sample) {
      for (int i = 0; i < 3; ++i) {
        recovery_weight_[el.n[i]] += g.wvol;
        in_sample_[el.n[i]] = 1;
      }
    }
  }

  terminal_nodes_ = mesh_.tagged_nodes(BoundaryTag::Terminal);
  ground_nodes_ = mesh_.tagged_nodes(BoundaryTag::Ground);
  if (terminal_nodes_.empty() || ground_nodes_.empty()) {
    throw ConfigError("fem: mesh must carry terminal and ground boundary tags");
  }
  fixed_.assign(nn, 0);
  for (int i : terminal_nodes_) fixed_[i] = 1;
  for (int i : ground_nodes_) fixed_[i] = 2;

  if (cfg_.thermal_mode == ThermalMode::Diffusive) {
    diffusion_ = std::make_unique<ThermalDiffusion>(mesh_, mat_[kSample]);
  }
  reset_states();
}

void FemSolver::reset_states() {
  const std::size_t nn = mesh_.nodes.size();
  ade_ = AdeState(mat_[kSample].poles.size(), 2 * nn);
  pores_.assign(nn, PoreConcentrations{});
  temp_ = ThermalField(nn, mat_[kSample].T0);
  e_node_.assign(2 * nn, 0.0);
  e_node_prev_.assign(2 * nn, 0.0);
  e_mid_scratch_.assign(2 * nn, 0.0);
  e_elem_prev_.assign(mesh_.elements.size(), {0.0, 0.0});
  dt_current_ = -1.0;
  sigma_at_factor_.clear();
  pores_hat_.assign(nn, PoreConcentrations{});
  sigma_node_hat_.assign(nn, 0.0);
  q_node_.assign(nn, 0.0);
  b0_.setZero(static_cast<Eigen::Index>(nn));
}

Eigen::SparseMatrix<double> FemSolver::build_matrix(
    std::span<const double> sigma_elem) const {
  const auto nn = static_cast<Eigen::Index>(mesh_.nodes.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh_.elements.size() * 9);
  for (std::size_t e = 0; e < mesh_.elements.size(); ++e) {
    const auto& el = mesh_.elements[e];
    const auto& g = egeom_[e];
    const double s = sigma_elem[e];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double kij =
            s * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]) * g.wvol;
        trip.emplace_back(el.n[i], el.n[j], kij);
      }
    }
  }
  Eigen::SparseMatrix<double> K(nn, nn);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

void FemSolver::factorize(const std::vector<double>& sigma_eff) {
  K0_ = build_matrix(sigma_eff);

  const auto nn = static_cast<Eigen::Index>(mesh_.nodes.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(K0_.nonZeros()));
  dirichlet_coupling_.assign(mesh_.nodes.size(), 0.0);
  for (Eigen::Index col = 0; col < K0_.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(K0_, col); it; ++it) {
      const auto i = it.row();
      const auto j = it.col();
      if (fixed_[j] == 1 && fixed_[i] == 0) {
        dirichlet_coupling_[i] += it.value();
      }
      if (fixed_[i] == 0 && fixed_[j] == 0) {
        trip.emplace_back(i, j, it.value());
      }
    }
  }
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (fixed_[i] != 0) trip.emplace_back(i, i, 1.0);
  }
  Eigen::SparseMatrix<double> kbc(nn, nn);
  kbc.setFromTriplets(trip.begin(), trip.end());

  if (!pattern_analyzed_) {
    ldlt_.analyzePattern(kbc);
    pattern_analyzed_ = true;
  }
  ldlt_.factorize(kbc);
  if (ldlt_.info() != Eigen::Success) {
    throw NumericalError("fem: factorization of the conduction system failed");
  }
}

ConductionSolution FemSolver::solve_conduction(std::span<const double> sigma_elem,
                                               double U) const {
  if (sigma_elem.size() != mesh_.elements.size()) {
    throw ConfigError("fem: sigma field size does not match element count");
  }
  for (double s : sigma_elem) {
    if (!(s > 0.0)) throw ConfigError("fem: element conductivity must be > 0");
  }
  // the boundary sets are checked at construction; this const solve keeps
  // its own factorization
  auto self = const_cast<FemSolver*>(this);
  const std::vector<double> sigma(sigma_elem.begin(), sigma_elem.end());
  self->factorize(sigma);
  self->dt_current_ = -1.0;  // invalidate the transient cache
  self->sigma_at_factor_.clear();

  const auto nn = static_cast<Eigen::Index>(mesh_.nodes.size());
  Eigen::VectorXd b(nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (fixed_[i] == 1) {
      b[i] = U;
    } else if (fixed_[i] == 2) {
      b[i] = 0.0;
    } else {
      b[i] = -U * dirichlet_coupling_[i];
    }
  }
  Eigen::VectorXd phi = ldlt_.solve(b);
  if (ldlt_.info() != Eigen::Success) {
    throw NumericalError("fem: conduction solve failed");
  }
  Eigen::VectorXd r = K0_ * phi;
  ConductionSolution sol;
  sol.phi.assign(phi.data(), phi.data() + nn);
  for (int i : terminal_nodes_) sol.I_terminal += r[i];
  for (int i : ground_nodes_) sol.I_ground += r[i];
  return sol;
}

void FemSolver::update_dt_coeffs(double dt) {
  coeffs_[kSample] = ade_coeffs(mat_[kSample], dt);
  companion_[kSample] = kEps0 * mat_[kSample].eps_inf / dt;
  if (has_electrode_) {
    coeffs_[kElectrode] = ade_coeffs(mat_[kElectrode], dt);
    companion_[kElectrode] = kEps0 * mat_[kElectrode].eps_inf / dt;
  }
  dt_current_ = dt;
}

std::vector<double> FemSolver::state_sigma() const {
  std::vector<double> sigma(mesh_.elements.size());
  for (std::size_t e = 0; e < mesh_.elements.size(); ++e) {
    const auto& el = mesh_.elements[e];
    if (el.region == Region::Sample) {
      sigma[e] = (sigma_node_hat_[el.n[0]] + sigma_node_hat_[el.n[1]] +
                  sigma_node_hat_[el.n[2]]) / 3.0;
    } else {
      sigma[e] = mat_[kElectrode].sigma_s;
    }
  }
  return sigma;
}

std::vector<double> FemSolver::effective_sigma(const std::vector<double>& sigma_state) const {
  std::array<double, 2> pole_companion = {0.0, 0.0};
  for (int rgn = 0; rgn < (has_electrode_ ? 2 : 1); ++rgn) {
    for (std::size_t k = 0; k < coeffs_[rgn].decay.size(); ++k) {
      // midpoint-driven pole: end-of-step current carries (1+a)/2 on the
      // new field and a*e_k plus (1-a)/2 times the old field as history
      pole_companion[rgn] +=
          coeffs_[rgn].conductance[k] * 0.5 * (1.0 + coeffs_[rgn].decay[k]);
    }
  }
  std::vector<double> sigma(sigma_state);
  for (std::size_t e = 0; e < mesh_.elements.size(); ++e) {
    const int rgn = mesh_.elements[e].region == Region::Sample ? kSample : kElectrode;
    sigma[e] += companion_[rgn] + pole_companion[rgn];
  }
  return sigma;
}

FemSolver::StepSample FemSolver::advance(double u_next, double dt) {
  if (!std::isfinite(u_next)) throw NumericalError("fem: non-finite terminal voltage");
  const bool dt_changed = dt != dt_current_;
  if (dt_changed) update_dt_coeffs(dt);

  const std::size_t nn = mesh_.nodes.size();
  const MaterialModel& sm = mat_[kSample];

  // conductivity for this step from pore states predicted with the previous
  // nodal field; exact wherever the field is constant across the step
  for (std::size_t i = 0; i < nn; ++i) {
    if (!in_sample_[i]) continue;
    double sig = sm.sigma_s;
    if (sm.ep) {
      const double e_mag = std::hypot(e_node_prev_[2 * i], e_node_prev_[2 * i + 1]);
      pores_hat_[i] = state_step(pores_[i], e_mag, dt, *sm.ep);
      sig = sigma_p(sm.sigma_s, {pores_hat_[i].p0, pores_hat_[i].p1, pores_hat_[i].p2},
                    *sm.ep);
    }
    sigma_node_hat_[i] = sigma_t(sig, temp_.T[i], sm);
  }

  // the staleness test applies to the state-dependent conductivity alone;
  // the dt companions are constant between controller regime switches
  const std::vector<double> sigma_state = state_sigma();
  bool need_factor = dt_changed || sigma_at_factor_.empty();
  if (!need_factor) {
    for (std::size_t e = 0; e < sigma_state.size(); ++e) {
      if (std::abs(sigma_state[e] - sigma_at_factor_[e]) >
          cfg_.refactor_rel_tol * sigma_at_factor_[e]) {
        need_factor = true;
        break;
      }
    }
  }
  if (need_factor) {
    factorize(effective_sigma(sigma_state));
    sigma_at_factor_ = sigma_state;
  }

  // history sources: the backward-difference displacement current and the
  // pole currents carried over from the previous step
  b0_.setZero();
  for (std::size_t e = 0; e < mesh_.elements.size(); ++e) {
    const auto& el = mesh_.elements[e];
    const auto& g = egeom_[e];
    const int rgn = el.region == Region::Sample ? kSample : kElectrode;
    const auto& cf = coeffs_[rgn];
    // constant part: displacement companion plus the midpoint share of the
    // pole currents, both on the previous element field
    double hist = companion_[rgn];
    for (std::size_t k = 0; k < cf.decay.size(); ++k) {
      hist += cf.conductance[k] * 0.5 * (1.0 - cf.decay[k]);
    }
    const double jr_const = hist * e_elem_prev_[e][0];
    const double jz_const = hist * e_elem_prev_[e][1];
    // linear part: per-pole auxiliary fields interpolated from the nodes;
    // int_T u*r dA = (A/12) * (sum u_i r_i + sum u_i * sum r_i), exact for P1
    double mr = 0.0, mz = 0.0;  // 2*pi * integral of (sum_k g_k a_k e_k) * r dA
    for (std::size_t k = 0; k < cf.decay.size(); ++k) {
      const double ga = cf.conductance[k] * cf.decay[k];
      double sr = 0.0, sz = 0.0, srr = 0.0, szr = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double er = ade_.at(k, 2 * static_cast<std::size_t>(el.n[i]));
        const double ez = ade_.at(k, 2 * static_cast<std::size_t>(el.n[i]) + 1);
        sr += er;
        sz += ez;
        srr += er * g.r[i];
        szr += ez * g.r[i];
      }
      const double rsum = g.r[0] + g.r[1] + g.r[2];
      mr += ga * (srr + sr * rsum);
      mz += ga * (szr + sz * rsum);
    }
    mr *= 2.0 * std::numbers::pi * g.area / 12.0;
    mz *= 2.0 * std::numbers::pi * g.area / 12.0;
    for (int i = 0; i < 3; ++i) {
      b0_[el.n[i]] -= g.grad[i][0] * (jr_const * g.wvol + mr) +
                      g.grad[i][1] * (jz_const * g.wvol + mz);
    }
  }

  const auto nni = static_cast<Eigen::Index>(nn);
  bbc_.resize(nni);
  for (Eigen::Index i = 0; i < nni; ++i) {
    if (fixed_[i] == 1) {
      bbc_[i] = u_next;
    } else if (fixed_[i] == 2) {
      bbc_[i] = 0.0;
    } else {
      bbc_[i] = b0_[i] - u_next * dirichlet_coupling_[i];
    }
  }
  phi_ = ldlt_.solve(bbc_);
  if (ldlt_.info() != Eigen::Success || !phi_.allFinite()) {
    throw NumericalError("fem: potential solve failed at a time step");
  }

  // boundary currents from the discrete residual of the unconstrained system
  Eigen::VectorXd r = K0_ * phi_ - b0_;
  StepSample out{};
  for (int i : terminal_nodes_) out.I_terminal += r[i];
  for (int i : ground_nodes_) out.I_ground += r[i];

  // element fields and volume-weighted nodal recovery (sample region only)
  std::fill(e_node_.begin(), e_node_.end(), 0.0);
  for (std::size_t e = 0; e < mesh_.elements.size(); ++e) {
    const auto& el = mesh_.elements[e];
    const auto& g = egeom_[e];
    double er = 0.0, ez = 0.0;
    for (int i = 0; i < 3; ++i) {
      er -= g.grad[i][0] * phi_[el.n[i]];
      ez -= g.grad[i][1] * phi_[el.n[i]];
    }
    e_elem_prev_[e] = {er, ez};
    if (el.region == Region::Sample) {
      for (int i = 0; i < 3; ++i) {
        e_node_[2 * el.n[i]] += g.wvol * er;
        e_node_[2 * el.n[i] + 1] += g.wvol * ez;
      }
    }
  }
  for (std::size_t i = 0; i < nn; ++i) {
    if (recovery_weight_[i] > 0.0) {
      e_node_[2 * i] /= recovery_weight_[i];
      e_node_[2 * i + 1] /= recovery_weight_[i];
    }
  }

  // nodal heating from the total current density, then the state updates
  const auto& cf = coeffs_[kSample];
  for (std::size_t i = 0; i < nn; ++i) {
    if (!in_sample_[i]) {
      q_node_[i] = 0.0;
      continue;
    }
    const double er = e_node_[2 * i], ez = e_node_[2 * i + 1];
    const double der = er - e_node_prev_[2 * i];
    const double dez = ez - e_node_prev_[2 * i + 1];
    double jr = sigma_node_hat_[i] * er + companion_[kSample] * der;
    double jz = sigma_node_hat_[i] * ez + companion_[kSample] * dez;
    for (std::size_t k = 0; k < cf.decay.size(); ++k) {
      const double a = cf.decay[k];
      const double gk = cf.conductance[k];
      jr += gk * (a * (er - ade_.at(k, 2 * i)) + 0.5 * (1.0 - a) * der);
      jz += gk * (a * (ez - ade_.at(k, 2 * i + 1)) + 0.5 * (1.0 - a) * dez);
    }
    q_node_[i] = jr * er + jz * ez;
  }

  if (sm.ep) {
    for (std::size_t i = 0; i < nn; ++i) {
      if (!in_sample_[i]) continue;
      const double e_mag = std::hypot(e_node_[2 * i], e_node_[2 * i + 1]);
      pores_[i] = state_step(pores_[i], e_mag, dt, *sm.ep);
    }
  }
  // poles relax toward the interval-average nodal field
  for (std::size_t i = 0; i < 2 * nn; ++i) {
    e_mid_scratch_[i] = 0.5 * (e_node_[i] + e_node_prev_[i]);
  }
  ade_step(ade_, e_mid_scratch_, dt, sm);
  if (cfg_.thermal_mode == ThermalMode::Diffusive) {
    diffusion_->step(temp_, q_node_, dt);
  } else {
    thermal_step_adiabatic(temp_, q_node_, dt, sm);
  }
  e_node_prev_ = e_node_;

  const int c = mesh_.center_node;
  out.p_center = pores_[c];
  double sig_c = sm.sigma_s;
  if (sm.ep) {
    sig_c = sigma_p(sm.sigma_s, {pores_[c].p0, pores_[c].p1, pores_[c].p2}, *sm.ep);
  }
  out.sigma_center = sigma_t(sig_c, temp_.T[c], sm);
  out.T_center = temp_.T[c];
  return out;
}

RunResult FemSolver::run(const PulseProtocol& protocol,
                         const StepController& controller, double output_dt) {
  const MaterialModel& sm = mat_[kSample];
  if (sm.ep && controller.dt_transition > sm.ep->tau0 / 2.0) {
    throw ConfigError("fem: dt_transition must be <= tau0/2 to resolve pulse edges");
  }
  reset_states();

  RunResult result;
  result.raw.push(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, sigma_t(sm.sigma_s, sm.T0, sm), sm.T0);
  result.I_ground.push_back(0.0);
  const auto grid = build_time_grid(protocol, controller);
  try {
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double t = grid[i];
      const double dt = grid[i] - grid[i - 1];
      const double u = voltage_at(protocol, t);
      const auto s = advance(u, dt);
      result.raw.push(t, u, s.I_terminal, s.p_center.p0, s.p_center.p1,
                      s.p_center.p2, s.sigma_center, s.T_center);
      result.I_ground.push_back(s.I_ground);
    }
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
  }
  result.trace = resample_uniform(result.raw, output_dt);
  return result;
}

RunResult fem_run(const AxiGeometry& geom, const MeshOptions& mesh_opts,
                  const MaterialModel& sample,
                  const std::optional<MaterialModel>& electrode,
                  const PulseProtocol& protocol, const StepController& controller,
                  double output_dt, ThermalMode thermal_mode) {
  Mesh mesh = build_geometry(geom, mesh_opts);
  FemSolver::Config cfg;
  cfg.thermal_mode = thermal_mode;
  FemSolver solver(std::move(mesh), sample, electrode, cfg);
  return solver.run(protocol, controller, output_dt);
}

}  // namespace epsim
