#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "epsim/constants.hpp"
#include "epsim/dispersion.hpp"
#include "epsim/errors.hpp"
#include "epsim/material.hpp"

using namespace epsim;

namespace {

MaterialModel potato() {
  return load_material(std::string(EPSIM_DATA_DIR) + "/materials/potato_tuber.json");
}

}  // namespace

TEST_SUITE("dispersion") {

TEST_CASE("single-step response reaches 1 - 1/e at one relaxation time") {
  const auto m = potato();
  AdeState s(m.poles.size(), 1);
  const double E = 1234.5;
  for (std::size_t k = 0; k < m.poles.size(); ++k) {
    AdeState sk(m.poles.size(), 1);
    ade_step(sk, E, m.poles[k].tau, m);
    CHECK(sk.at(k, 0) == doctest::Approx(E * (1.0 - std::exp(-1.0))).epsilon(1e-14));
  }
  // equilibrium is a fixed point
  for (std::size_t k = 0; k < m.poles.size(); ++k) s.at(k, 0) = E;
  ade_step(s, E, 1e-5, m);
  for (std::size_t k = 0; k < m.poles.size(); ++k) {
    CHECK(s.at(k, 0) == doctest::Approx(E).epsilon(1e-15));
  }
}

TEST_CASE("exponential update composes exactly under step splitting") {
  const auto m = potato();
  const double E = -321.0;
  AdeState one(m.poles.size(), 1);
  ade_step(one, E, m.poles[0].tau, m);

  AdeState many(m.poles.size(), 1);
  for (int i = 0; i < 10; ++i) ade_step(many, E, m.poles[0].tau / 10.0, m);
  for (std::size_t k = 0; k < m.poles.size(); ++k) {
    CHECK(many.at(k, 0) == doctest::Approx(one.at(k, 0)).epsilon(1e-12));
  }

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(0.1, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double dt = uni(rng) * 1e-6;
    AdeState a(m.poles.size(), 1), b(m.poles.size(), 1);
    const double drive = uni(rng) * 1e4;
    ade_step(a, drive, dt, m);
    const double split = 0.2 + 0.6 * uni(rng) / 3.0;
    ade_step(b, drive, dt * split, m);
    ade_step(b, drive, dt * (1.0 - split), m);
    for (std::size_t k = 0; k < m.poles.size(); ++k) {
      CHECK(b.at(k, 0) == doctest::Approx(a.at(k, 0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pole current at rest and at equilibrium") {
  const auto m = potato();
  AdeState s(m.poles.size(), 1);
  const double E = 1e4;
  // from rest: sum of eps0*delta_eps/tau times E
  double g_total = 0.0;
  for (const auto& p : m.poles) g_total += kEps0 * p.delta_eps / p.tau;
  CHECK(g_total * E == doctest::Approx(7403.7).epsilon(1e-3));
  CHECK(pole_current_density(s, E, m) == doctest::Approx(g_total * E).epsilon(1e-12));

  for (std::size_t k = 0; k < m.poles.size(); ++k) s.at(k, 0) = E;
  CHECK(pole_current_density(s, E, m) == doctest::Approx(0.0));
}

TEST_CASE("single-pole step current decays with its own relaxation time") {
  MaterialModel m = potato();
  m.poles = {m.poles[1]};
  const double g = kEps0 * m.poles[0].delta_eps / m.poles[0].tau;
  AdeState s(1, 1);
  const double E = 5e3;
  const double dt = m.poles[0].tau / 50.0;
  double t = 0.0;
  for (int i = 0; i < 200; ++i) {
    ade_step(s, E, dt, m);
    t += dt;
    const double expected = g * E * std::exp(-t / m.poles[0].tau);
    CHECK(pole_current_density(s, E, m) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("layout and argument errors") {
  const auto m = potato();
  AdeState wrong(2, 1);
  CHECK_THROWS_AS(ade_step(wrong, 1.0, 1e-6, m), ConfigError);
  AdeState s(m.poles.size(), 1);
  CHECK_THROWS_AS(ade_step(s, std::nan(""), 1e-6, m), NumericalError);
  CHECK_THROWS_AS(ade_step(s, 1.0, 0.0, m), std::invalid_argument);
  CHECK_THROWS_AS(pole_current_density(wrong, 1.0, m), ConfigError);
}

TEST_CASE("dispersionless medium has purely algebraic admittivity") {
  MaterialModel m = potato();
  m.poles.clear();
  m.ep.reset();
  for (double f : {1e3, 1e5}) {
    const auto sigma = sinusoidal_admittance_check(m, f, 12);
    const double omega = 2.0 * std::numbers::pi * f;
    CHECK(sigma.real() == doctest::Approx(m.sigma_s).epsilon(1e-9));
    CHECK(sigma.imag() == doctest::Approx(omega * kEps0 * m.eps_inf).epsilon(1e-9));
  }
}

TEST_CASE("time-domain admittivity matches the frequency-domain model") {
  const auto m = potato();
  for (double f : {1e3, 1e5}) {
    const auto sigma_td = sinusoidal_admittance_check(m, f, 12);
    const double omega = 2.0 * std::numbers::pi * f;
    const auto sigma_fd =
        std::complex<double>(0.0, 1.0) * omega * kEps0 * complex_permittivity(m, omega);
    CHECK(std::abs(sigma_td - sigma_fd) / std::abs(sigma_fd) < 5e-3);
  }
  CHECK_THROWS_AS(sinusoidal_admittance_check(m, -5.0, 12), std::invalid_argument);
  CHECK_THROWS_AS(sinusoidal_admittance_check(m, 1e3, 4), std::invalid_argument);
}

TEST_CASE("time-averaged dispersive power over a cycle is non-negative") {
  const auto m = potato();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> logf(std::log(1e2), std::log(1e6));
  for (int trial = 0; trial < 5; ++trial) {
    const double f = std::exp(logf(rng));
    const double omega = 2.0 * std::numbers::pi * f;
    const double T = 1.0 / f;
    const long n_per_cycle = 2000;
    const double dt = T / n_per_cycle;
    AdeState s(m.poles.size(), 1);
    double power = 0.0;
    const int cycles = 6;
    for (long i = 0; i < cycles * n_per_cycle; ++i) {
      const double t_mid = (i + 0.5) * dt;
      const double e_mid = std::sin(omega * t_mid);
      ade_step(s, e_mid, dt, m);
      if (i >= (cycles - 1) * n_per_cycle) {
        const double e_end = std::sin(omega * (i + 1) * dt);
        power += pole_current_density(s, e_end, m) * e_end * dt;
      }
    }
    CHECK(power >= 0.0);
  }
}

}  // TEST_SUITE
