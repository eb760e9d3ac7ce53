#include <doctest.h>

#include <cmath>
#include <random>

#include "epsim/electroporation.hpp"
#include "epsim/material.hpp"
#include "epsim/protocol.hpp"

using namespace epsim;

namespace {

EpParams table_params() {
  return *load_material(std::string(EPSIM_DATA_DIR) + "/materials/potato_tuber.json").ep;
}

double crossing_field(double level, double center, double slope) {
  // logistic(E) = level  =>  E = center + slope * ln(level/(1-level))
  return center + slope * std::log(level / (1.0 - level));
}

}  // namespace

TEST_SUITE("electroporation") {

TEST_CASE("logistic midpoints are exact") {
  const auto ep = table_params();
  CHECK(beta0(43e3, ep) == 0.5);
  CHECK(beta1(22e3, ep) == 0.5);
}

TEST_CASE("logistic tails") {
  const auto ep = table_params();
  CHECK(beta0(0.0, ep) == doctest::Approx(1.0 / (1.0 + std::exp(43.0 / 5.5))).epsilon(1e-14));
  CHECK(beta0(0.0, ep) == doctest::Approx(4.0e-4).epsilon(2e-2));
  CHECK(beta0(100e3, ep) == doctest::Approx(1.0 - 3.15e-5).epsilon(1e-6));
  CHECK(beta1(0.0, ep) == doctest::Approx(1.0 / (1.0 + std::exp(22.0 / 2.7))).epsilon(1e-14));
  CHECK(beta1(0.0, ep) == doctest::Approx(2.9e-4).epsilon(2e-2));
}

TEST_CASE("initial pores saturate at roughly half the prepore field") {
  const auto ep = table_params();
  const double e99_b1 = crossing_field(0.99, ep.E1, ep.dE1);
  const double e99_b0 = crossing_field(0.99, ep.E0, ep.dE0);
  CHECK(e99_b1 == doctest::Approx(34.4e3).epsilon(2e-2));
  CHECK(e99_b0 == doctest::Approx(68.3e3).epsilon(2e-2));
  CHECK(e99_b1 / e99_b0 > 0.45);
  CHECK(e99_b1 / e99_b0 < 0.55);
}

TEST_CASE("monotone field dependence") {
  const auto ep = table_params();
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> uni(0.0, 2e5);
  for (int i = 0; i < 200; ++i) {
    double a = uni(rng), b = uni(rng);
    if (a > b) std::swap(a, b);
    CHECK(beta0(b, ep) >= beta0(a, ep));
    CHECK(beta1(b, ep) >= beta1(a, ep));
  }
}

TEST_CASE("effective time constants") {
  const auto ep = table_params();
  CHECK(tau1_effective(0.0, true, ep) == doctest::Approx(40e-6));
  CHECK(tau1_effective(1.0, true, ep) == doctest::Approx(20e-6));
  CHECK(tau1_effective(0.3, false, ep) == doctest::Approx(150e-6));
  CHECK(tau2_effective(true, ep) == doctest::Approx(500e-6));
  CHECK(tau2_effective(false, ep) == doctest::Approx(1.0));
}

TEST_CASE("equal concentrations take the growth branch") {
  const auto ep = table_params();
  // with p1 == p2 the expanded-pore state must move with tau2G, which at
  // equal concentrations means it stays put but the decay branch would too;
  // probe the branch through the p0-accelerated tau1 instead: beta1 == p1
  PoreConcentrations p{1.0, 0.4, 0.4};
  const double e_eq = crossing_field(0.4, ep.E1, ep.dE1);
  CHECK(beta1(e_eq, ep) == doctest::Approx(0.4).epsilon(1e-12));
  // drive p2 toward p1 from equality plus a nudge on p1; growth factor over
  // dt must correspond to tau2G
  PoreConcentrations q{0.0, 0.5, 0.5};
  const auto next = state_step(q, 0.0, 250e-6, ep);
  // p2 target is the pre-step p1 = p2, so p2 must remain unchanged exactly
  CHECK(next.p2 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("rest state stays near zero") {
  const auto ep = table_params();
  PoreConcentrations p;
  for (int i = 0; i < 2000; ++i) p = state_step(p, 0.0, 1e-6, ep);
  CHECK(p.p0 < 1e-3);
  CHECK(p.p1 < 1e-3);
  CHECK(p.p2 < 1e-3);
}

TEST_CASE("first-order prepore response under a held field") {
  const auto ep = table_params();
  PoreConcentrations p;
  const double E = 100e3;
  const auto next = state_step(p, E, ep.tau0, ep);
  CHECK(next.p0 == doctest::Approx(beta0(E, ep) * (1.0 - std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("expanded pores barely decay across an interpulse gap") {
  const auto ep = table_params();
  PoreConcentrations p{0.0, 0.2, 0.5};
  const auto next = state_step(p, 0.0, 100e-6, ep);
  // decay branch (p1 < p2), time constant 1 s over a 100 us window
  const double expected = 0.2 + (0.5 - 0.2) * std::exp(-100e-6 / 1.0);
  CHECK(next.p2 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(next.p2 > 0.4999);
}

TEST_CASE("concentrations remain in [0,1] for arbitrary drive sequences") {
  const auto ep = table_params();
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> e_uni(0.0, 2e5);
  std::uniform_real_distribution<double> dt_uni(1e-8, 1e-5);
  PoreConcentrations p;
  for (int i = 0; i < 20000; ++i) {
    p = state_step(p, e_uni(rng), dt_uni(rng), ep);
    CHECK(p.p0 >= 0.0);
    CHECK(p.p0 <= 1.0);
    CHECK(p.p1 >= 0.0);
    CHECK(p.p1 <= 1.0);
    CHECK(p.p2 >= 0.0);
    CHECK(p.p2 <= 1.0);
  }
}

TEST_CASE("two half steps equal one full step at a fixed point of p1") {
  const auto ep = table_params();
  const double E = 60e3;
  // p1 at its target freezes the p2 drive, so the whole update is a pure
  // exponential relaxation and composes exactly
  PoreConcentrations p{0.2, beta1(E, ep), 0.3};
  const auto full = state_step(p, E, 2e-7, ep);
  auto half = state_step(p, E, 1e-7, ep);
  half = state_step(half, E, 1e-7, ep);
  CHECK(half.p0 == doctest::Approx(full.p0).epsilon(1e-13));
  CHECK(half.p1 == doctest::Approx(full.p1).epsilon(1e-13));
  CHECK(half.p2 == doctest::Approx(full.p2).epsilon(1e-13));
}

TEST_CASE("pulse-train accumulation and prepore transience under a burst") {
  const auto ep = table_params();
  const double h = 5e-3;
  for (double level : {20e3, 50e3, 100e3}) {
    const auto proto = esope_protocol(level * h);
    PoreConcentrations p;
    const double dt = 0.05e-6;
    double prev_onset_p2 = -1.0;
    double p0_before_fall = 0.0;
    bool accumulation_ok = true;
    bool transience_ok = true;
    const long steps = static_cast<long>(proto.duration() / dt);
    for (long i = 1; i <= steps; ++i) {
      const double t = i * dt;
      const double e_mag = voltage_at(proto, t) / h;
      p = state_step(p, e_mag, dt, ep);
      for (int k = 0; k < proto.count; ++k) {
        const double onset = k * proto.period();
        if (std::abs(t - onset) < dt / 2) {
          if (p.p2 < prev_onset_p2) accumulation_ok = false;
          prev_onset_p2 = p.p2;
        }
        const double fall_start = onset + proto.pulse_width - proto.fall_time;
        const double fall_end = onset + proto.pulse_width;
        if (std::abs(t - fall_start) < dt / 2) p0_before_fall = p.p0;
        if (std::abs(t - (fall_end + 2.5e-6)) < dt / 2) {
          const double rest = beta0(0.0, ep);
          if (p.p0 - rest > 0.01 * (p0_before_fall - rest)) transience_ok = false;
        }
      }
    }
    CHECK(accumulation_ok);
    CHECK(transience_ok);
  }
}

}  // TEST_SUITE
