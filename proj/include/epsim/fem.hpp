#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "epsim/dispersion.hpp"
#include "epsim/electroporation.hpp"
#include "epsim/geometry.hpp"
#include "epsim/lumped.hpp"
#include "epsim/material.hpp"
#include "epsim/protocol.hpp"
#include "epsim/stepper.hpp"
#include "epsim/thermal.hpp"
#include "epsim/trace.hpp"

namespace epsim {

/// Result of a stationary conduction solve.
struct ConductionSolution {
  std::vector<double> phi;  ///< V per node
  double I_terminal = 0.0;  ///< A, positive into the sample
  double I_ground = 0.0;    ///< A, equals -I_terminal by charge conservation
};

/// Axisymmetric nodal-potential solver for the coupled conduction /
/// dispersion / pore-kinetics / heating problem on a triangle mesh.
///
/// Each step solves div(J) = 0 with the terminal potential imposed. The
/// instantaneous-permittivity term enters as a backward-difference companion
/// conductance and each relaxation pole as a conductance g_k*exp(-dt/tau_k)
/// plus a history current, so the linear system stays symmetric positive
/// definite. Pore and temperature states live on nodes; element conductivity
/// is the nodal mean. The factorization is reused until the effective
/// conductivity moves by more than a relative threshold.
class FemSolver {
 public:
  struct Config {
    ThermalMode thermal_mode = ThermalMode::Adiabatic;
    double refactor_rel_tol = 1e-3;
  };

  FemSolver(Mesh mesh, MaterialModel sample,
            std::optional<MaterialModel> electrode, Config cfg);
  FemSolver(Mesh mesh, MaterialModel sample,
            std::optional<MaterialModel> electrode = {});

  /// Stationary conduction solve with a prescribed per-element conductivity.
  /// Throws ConfigError when the mesh lacks terminal or ground tags.
  ConductionSolution solve_conduction(std::span<const double> sigma_elem,
                                      double U) const;

  /// Run a protocol from the rest state. Output schema matches lumped_run.
  RunResult run(const PulseProtocol& protocol, const StepController& controller,
                double output_dt = 1e-7);

  const Mesh& mesh() const { return mesh_; }
  std::size_t element_count() const { return mesh_.elements.size(); }

 private:
  struct StepSample {
    double I_terminal, I_ground;
    PoreConcentrations p_center;
    double sigma_center, T_center;
  };

  void reset_states();
  void update_dt_coeffs(double dt);
  std::vector<double> state_sigma() const;
  std::vector<double> effective_sigma(const std::vector<double>& sigma_state) const;
  void factorize(const std::vector<double>& sigma_eff);
  Eigen::SparseMatrix<double> build_matrix(std::span<const double> sigma_elem) const;
  StepSample advance(double u_next, double dt);

  Mesh mesh_;
  std::array<MaterialModel, 2> mat_;  // per Region
  bool has_electrode_ = false;
  Config cfg_;

  // element precomputation
  struct ElemGeom {
    std::array<std::array<double, 2>, 3> grad;  // grad N_i, 1/m
    double area, wvol;                          // wvol = 2*pi*rbar*area
    std::array<double, 3> r;                    // nodal radii
  };
  std::vector<ElemGeom> egeom_;
  std::vector<int> terminal_nodes_, ground_nodes_;
  std::vector<std::uint8_t> fixed_;  // 0 free, 1 terminal, 2 ground
  std::vector<double> recovery_weight_;  // per node, sample elements only
  std::vector<std::uint8_t> in_sample_;  // node adjacent to a sample element

  // dynamic state
  AdeState ade_;                  // per node, components (r,z)
  std::vector<PoreConcentrations> pores_;
  ThermalField temp_;
  std::vector<double> e_node_, e_node_prev_;  // flattened (r,z) per node
  std::vector<double> e_mid_scratch_;
  std::vector<std::array<double, 2>> e_elem_prev_;
  std::unique_ptr<ThermalDiffusion> diffusion_;

  // per-dt coefficients and factorization cache
  double dt_current_ = -1.0;
  std::array<AdeCoeffs, 2> coeffs_;
  std::array<double, 2> companion_ = {0.0, 0.0};  // eps0*eps_inf/dt per region
  Eigen::SparseMatrix<double> K0_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool pattern_analyzed_ = false;
  std::vector<double> sigma_at_factor_;
  std::vector<double> dirichlet_coupling_;  // sum over terminal columns per row

  // scratch
  std::vector<PoreConcentrations> pores_hat_;
  std::vector<double> sigma_node_hat_;
  std::vector<double> q_node_;
  Eigen::VectorXd b0_, bbc_, phi_;
};

/// Convenience wrapper: mesh the geometry and run the protocol.
RunResult fem_run(const AxiGeometry& geom, const MeshOptions& mesh_opts,
                  const MaterialModel& sample,
                  const std::optional<MaterialModel>& electrode,
                  const PulseProtocol& protocol, const StepController& controller,
                  double output_dt = 1e-7,
                  ThermalMode thermal_mode = ThermalMode::Adiabatic);

}  // namespace epsim
