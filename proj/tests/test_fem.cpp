#include <doctest.h>

#include <cmath>
#include <numbers>

#include "epsim/constants.hpp"
#include "epsim/errors.hpp"
#include "epsim/fem.hpp"

using namespace epsim;

namespace {

MaterialModel potato() {
  return load_material(std::string(EPSIM_DATA_DIR) + "/materials/potato_tuber.json");
}

MaterialModel steel() {
  return load_material(std::string(EPSIM_DATA_DIR) + "/materials/electrode_316L.json");
}

MaterialModel dispersion_only() {
  auto m = potato();
  m.ep.reset();
  m.chi = 0.0;
  return m;
}

double plate_area(const AxiGeometry& g) {
  return std::numbers::pi * g.sample_radius * g.sample_radius;
}

}  // namespace

TEST_SUITE("fem") {

TEST_CASE("uniform slab conduction matches the analytic current and potential") {
  AxiGeometry g;
  FemSolver solver(build_geometry(g), potato());
  const double sigma = 2.158834e-2;
  std::vector<double> sigma_elem(solver.element_count(), sigma);
  const double U = 50.0;
  const auto sol = solver.solve_conduction(sigma_elem, U);

  const double expected = sigma * (U / g.sample_height) * plate_area(g);
  CHECK(expected == doctest::Approx(0.05803).epsilon(1e-3));
  CHECK(sol.I_terminal == doctest::Approx(expected).epsilon(1e-10));
  CHECK(sol.I_ground == doctest::Approx(-expected).epsilon(1e-10));

  // potential is linear in z
  const auto& mesh = solver.mesh();
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const double z = mesh.nodes[i][1];
    const double phi_expected = U * (z + g.sample_height / 2) / g.sample_height;
    CHECK(sol.phi[i] == doctest::Approx(phi_expected).epsilon(1e-9));
  }
}

TEST_CASE("conduction solve is linear in the conductivity") {
  AxiGeometry g;
  FemSolver solver(build_geometry(g), potato());
  std::vector<double> s1(solver.element_count(), 0.05);
  std::vector<double> s2(solver.element_count(), 0.10);
  const auto a = solver.solve_conduction(s1, 100.0);
  const auto b = solver.solve_conduction(s2, 100.0);
  CHECK(b.I_terminal == doctest::Approx(2.0 * a.I_terminal).epsilon(1e-12));
}

TEST_CASE("two-layer stack divides the potential like series resistors") {
  AxiGeometry g;
  Mesh mesh = build_geometry(g);
  const double s_bot = 0.02, s_top = 0.08;
  std::vector<double> sigma(mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    const double zc = (mesh.nodes[el.n[0]][1] + mesh.nodes[el.n[1]][1] +
                       mesh.nodes[el.n[2]][1]) / 3.0;
    sigma[e] = zc < 0.0 ? s_bot : s_top;
  }
  FemSolver solver(std::move(mesh), potato());
  const double U = 50.0;
  const auto sol = solver.solve_conduction(sigma, U);

  const double h = g.sample_height;
  const double series = 2.0 * s_bot * s_top / (s_bot + s_top);
  const double expected_I = U * plate_area(g) * series / h;
  CHECK(sol.I_terminal == doctest::Approx(expected_I).epsilon(1e-10));
  // interface (z = 0) potential from the conductance divider
  const double phi_mid = U * s_top / (s_bot + s_top);
  CHECK(sol.phi[solver.mesh().center_node] == doctest::Approx(phi_mid).epsilon(1e-9));
}

TEST_CASE("electrode-backed mesh reproduces the slab current") {
  AxiGeometry g;
  g.include_electrodes = true;
  Mesh mesh = build_geometry(g);
  std::vector<double> sigma(mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    sigma[e] = mesh.elements[e].region == Region::Electrode ? 1.74e6 : 2.158834e-2;
  }
  FemSolver solver(std::move(mesh), potato(), steel());
  const double U = 50.0;
  const auto sol = solver.solve_conduction(sigma, U);
  const double expected = 2.158834e-2 * (U / g.sample_height) * plate_area(g);
  CHECK(sol.I_terminal == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("configuration errors") {
  AxiGeometry g;
  // electrode elements present but no electrode material
  g.include_electrodes = true;
  CHECK_THROWS_AS(FemSolver(build_geometry(g), potato()), ConfigError);

  // mesh without a ground tag
  Mesh tiny;
  tiny.nodes = {{0.0, 0.0}, {1e-3, 0.0}, {1e-3, 1e-3}, {0.0, 1e-3}};
  tiny.elements = {{{0, 1, 2}, Region::Sample}, {{0, 2, 3}, Region::Sample}};
  tiny.boundary = {{{2, 3}, BoundaryTag::Terminal}, {{0, 1}, BoundaryTag::Insulation}};
  tiny.center_node = 0;
  CHECK_THROWS_AS(FemSolver(std::move(tiny), potato()), ConfigError);

  // bad sigma field
  g = AxiGeometry{};
  FemSolver solver(build_geometry(g), potato());
  std::vector<double> sigma(solver.element_count(), 0.0);
  CHECK_THROWS_AS(solver.solve_conduction(sigma, 1.0), ConfigError);
  std::vector<double> wrong(3, 1.0);
  CHECK_THROWS_AS(solver.solve_conduction(wrong, 1.0), ConfigError);
}

TEST_CASE("null stimulus leaves every state at rest") {
  AxiGeometry g;
  auto proto = esope_protocol(0.0);
  proto.count = 2;
  proto.post_burst_hold = 20e-6;
  StepController ctl;
  const auto run = fem_run(g, {}, potato(), {}, proto, ctl, 1e-6);
  REQUIRE(run.ok);
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    CHECK(run.trace.I[i] == 0.0);
    CHECK(run.trace.p0[i] <= 1e-3);
    CHECK(run.trace.T[i] == doctest::Approx(potato().T0));
  }
}

TEST_CASE("held-step terminal current carries the surviving slow-pole share") {
  const auto m = dispersion_only();
  AxiGeometry g;
  PulseProtocol proto;
  proto.amplitude = 50.0;
  proto.pulse_width = 150e-6;
  proto.count = 1;
  proto.repetition_rate = 1e3;
  proto.rise_time = 0.1e-6;
  proto.fall_time = 1e-6;
  proto.post_burst_hold = 1e-6;
  StepController ctl;
  const auto run = fem_run(g, {}, m, {}, proto, ctl, 1e-6);
  REQUIRE(run.ok);

  double analytic = m.sigma_s;
  for (const auto& p : m.poles) {
    analytic += kEps0 * p.delta_eps / p.tau * std::exp(-100e-6 / p.tau);
  }
  const double expected = analytic * (50.0 / g.sample_height) * plate_area(g);
  CHECK(expected == doctest::Approx(0.072).epsilon(2e-2));
  const double I_100us = interp_at(run.trace.t, run.trace.I, 100e-6);
  CHECK(I_100us == doctest::Approx(expected).epsilon(1e-2));
}

TEST_CASE("terminal and ground currents balance to machine precision") {
  AxiGeometry g;
  auto proto = esope_protocol(100e3 * g.sample_height);
  proto.count = 2;
  proto.post_burst_hold = 50e-6;
  StepController ctl;
  const auto run = fem_run(g, {}, potato(), {}, proto, ctl, 1e-6);
  REQUIRE(run.ok);
  double peak = 0.0;
  for (double v : run.raw.I) peak = std::max(peak, std::abs(v));
  for (std::size_t i = 0; i < run.raw.size(); ++i) {
    CHECK(std::abs(run.raw.I[i] + run.I_ground[i]) <= 1e-9 * peak);
  }
}

TEST_CASE("field solver tracks the scalar oracle through a burst") {
  AxiGeometry g;
  auto proto = esope_protocol(100e3 * g.sample_height);
  proto.count = 2;
  proto.post_burst_hold = 50e-6;
  StepController ctl;
  const auto fem = fem_run(g, {}, potato(), {}, proto, ctl, 1e-6);
  const auto lump = lumped_run(potato(), proto, g, ctl, 1e-6);
  REQUIRE(fem.ok);
  REQUIRE(lump.ok);
  REQUIRE(fem.trace.size() == lump.trace.size());

  double peak = 0.0;
  for (double v : lump.trace.I) peak = std::max(peak, std::abs(v));
  const auto edges = edge_times(proto);
  for (std::size_t i = 0; i < fem.trace.size(); ++i) {
    const double t = fem.trace.t[i];
    bool excluded = false;
    for (double e : edges) {
      if (t >= e - 1e-9 && t <= e + 1e-6 + 1e-9) excluded = true;
    }
    if (excluded) continue;
    const double denom = std::max(std::abs(lump.trace.I[i]), 1e-3 * peak);
    CHECK(std::abs(fem.trace.I[i] - lump.trace.I[i]) / denom < 0.02);
  }
  CHECK(fem.trace.T.back() == doctest::Approx(lump.trace.T.back()).epsilon(1e-9));
  CHECK(fem.trace.p2.back() == doctest::Approx(lump.trace.p2.back()).epsilon(1e-9));
}

TEST_CASE("diffusive and adiabatic heating agree for a full burst") {
  AxiGeometry g;
  const auto proto = esope_protocol(100e3 * g.sample_height);
  StepController ctl;
  const auto adiabatic =
      fem_run(g, {}, potato(), {}, proto, ctl, 1e-6, ThermalMode::Adiabatic);
  const auto diffusive =
      fem_run(g, {}, potato(), {}, proto, ctl, 1e-6, ThermalMode::Diffusive);
  REQUIRE(adiabatic.ok);
  REQUIRE(diffusive.ok);
  const double dT_a = adiabatic.trace.T.back() - potato().T0;
  const double dT_d = diffusive.trace.T.back() - potato().T0;
  CHECK(dT_a == doctest::Approx(0.886).epsilon(0.15));
  CHECK(std::abs(dT_d - dT_a) / dT_a < 0.01);
}

TEST_CASE("static solution is mesh-independent for the uniform slab") {
  AxiGeometry g;
  FemSolver coarse(build_geometry(g, {728, 1}), potato());
  FemSolver fine(build_geometry(g, {728, 2}), potato());
  std::vector<double> s1(coarse.element_count(), 0.03);
  std::vector<double> s2(fine.element_count(), 0.03);
  const auto a = coarse.solve_conduction(s1, 200.0);
  const auto b = fine.solve_conduction(s2, 200.0);
  CHECK(a.I_terminal == doctest::Approx(b.I_terminal).epsilon(1e-10));
}

}  // TEST_SUITE
