#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "epsim/errors.hpp"
#include "epsim/geometry.hpp"
#include "epsim/material.hpp"
#include "epsim/thermal.hpp"

using namespace epsim;

namespace {

MaterialModel potato() {
  return load_material(std::string(EPSIM_DATA_DIR) + "/materials/potato_tuber.json");
}

}  // namespace

TEST_SUITE("thermal") {

TEST_CASE("pointwise joule power") {
  CHECK(joule_power_density(0.0, 0.0) == 0.0);
  CHECK(joule_power_density(0.5 * 100e3, 100e3) == doctest::Approx(5e9).epsilon(1e-12));
  CHECK(joule_power_density(2.158834e-2 * 1e4, 1e4) ==
        doctest::Approx(2.158834e6).epsilon(1e-12));

  std::vector<double> J = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> E = {5.0, 6.0, 7.0, 8.0};
  std::vector<double> q(2);
  joule_power_density(J, E, q);
  CHECK(q[0] == doctest::Approx(1 * 5 + 2 * 6));
  CHECK(q[1] == doctest::Approx(3 * 7 + 4 * 8));

  std::vector<double> q_bad(3);
  CHECK_THROWS_AS(joule_power_density(J, E, q_bad), ConfigError);
}

TEST_CASE("adiabatic heating is the energy balance") {
  const auto m = potato();
  ThermalField f(4, m.T0);
  std::vector<double> q(4, 0.0);
  thermal_step_adiabatic(f, q, 1e-4, m);
  for (double T : f.T) CHECK(T == m.T0);

  std::fill(q.begin(), q.end(), 5e9);
  thermal_step_adiabatic(f, q, 100e-6, m);
  const double expected = m.T0 + 5e9 * 100e-6 / (1053.0 * 4410.0);
  for (double T : f.T) CHECK(T == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected - m.T0 == doctest::Approx(0.1077).epsilon(1e-3));
}

TEST_CASE("diffusion conserves energy with insulated boundaries") {
  const auto m = potato();
  AxiGeometry g;
  const auto mesh = build_geometry(g, {200, 1});
  ThermalDiffusion diff(mesh, m);

  // nonuniform initial temperature, no sources
  ThermalField f(mesh.nodes.size(), m.T0);
  for (std::size_t i = 0; i < f.T.size(); ++i) {
    f.T[i] = m.T0 + 5.0 * std::sin(1000.0 * mesh.nodes[i][0]) *
                        std::cos(800.0 * mesh.nodes[i][1]);
  }
  const auto& cap = diff.capacity();
  const double energy0 =
      std::inner_product(f.T.begin(), f.T.end(), cap.begin(), 0.0);
  std::vector<double> q(f.T.size(), 0.0);
  for (int i = 0; i < 50; ++i) diff.step(f, q, 0.05);
  const double energy1 =
      std::inner_product(f.T.begin(), f.T.end(), cap.begin(), 0.0);
  CHECK(energy1 == doctest::Approx(energy0).epsilon(1e-10));
}

TEST_CASE("minimum temperature is non-decreasing under non-negative heating") {
  const auto m = potato();
  AxiGeometry g;
  const auto mesh = build_geometry(g, {120, 1});
  ThermalDiffusion diff(mesh, m);
  ThermalField f(mesh.nodes.size(), m.T0);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uni(0.0, 2e9);
  std::vector<double> q(f.T.size());
  for (auto& v : q) v = uni(rng);
  double prev_min = m.T0;
  for (int i = 0; i < 20; ++i) {
    diff.step(f, q, 1e-3);
    const double mn = *std::min_element(f.T.begin(), f.T.end());
    CHECK(mn >= prev_min - 1e-12);
    prev_min = mn;
  }
}

TEST_CASE("uniform heating in diffusive mode reduces to the adiabatic balance") {
  const auto m = potato();
  AxiGeometry g;
  const auto mesh = build_geometry(g, {120, 1});
  ThermalDiffusion diff(mesh, m);
  ThermalField fd(mesh.nodes.size(), m.T0);
  ThermalField fa(mesh.nodes.size(), m.T0);
  std::vector<double> q(fd.T.size(), 3e9);
  diff.step(fd, q, 1e-4);
  thermal_step_adiabatic(fa, q, 1e-4, m);
  for (std::size_t i = 0; i < fd.T.size(); ++i) {
    if (diff.capacity()[i] > 0.0) {
      CHECK(fd.T[i] == doctest::Approx(fa.T[i]).epsilon(1e-10));
    }
  }
}

}  // TEST_SUITE
