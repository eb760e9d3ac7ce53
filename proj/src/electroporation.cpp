#include "epsim/electroporation.hpp"

#include <algorithm>
#include <cmath>

namespace epsim {

namespace {

double logistic(double e_mag, double center, double slope) {
  return 1.0 / (1.0 + std::exp(-(e_mag - center) / slope));
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Exact relaxation toward a constant target: x + (target - x)*(1 - e^(-dt/tau)).
double relax(double x, double target, double dt, double tau) {
  return target + (x - target) * std::exp(-dt / tau);
}

}  // namespace

double beta0(double e_mag, const EpParams& ep) {
  return logistic(std::abs(e_mag), ep.E0, ep.dE0);
}

double beta1(double e_mag, const EpParams& ep) {
  return logistic(std::abs(e_mag), ep.E1, ep.dE1);
}

double tau1_effective(double p0, bool growing, const EpParams& ep) {
  return growing ? ep.tau1G * (1.0 - 0.5 * p0) : ep.tau1D;
}

double tau2_effective(bool growing, const EpParams& ep) {
  return growing ? ep.tau2G : ep.tau2D;
}

PoreConcentrations state_step(const PoreConcentrations& p, double e_mag,
                              double dt, const EpParams& ep) {
  const double b0 = beta0(e_mag, ep);
  const double b1 = beta1(e_mag, ep);
  // branches and the p0-dependence of tau1 use pre-step values; ties count
  // as growth
  const bool grow1 = (b1 - p.p1) >= 0.0;
  const bool grow2 = (p.p1 - p.p2) >= 0.0;
  PoreConcentrations out;
  out.p0 = clamp01(relax(p.p0, b0, dt, ep.tau0));
  out.p1 = clamp01(relax(p.p1, b1, dt, tau1_effective(p.p0, grow1, ep)));
  out.p2 = clamp01(relax(p.p2, p.p1, dt, tau2_effective(grow2, ep)));
  return out;
}

}  // namespace epsim
