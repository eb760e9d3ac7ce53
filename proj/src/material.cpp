#include "epsim/material.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epsim/constants.hpp"
#include "epsim/errors.hpp"

namespace epsim {

using nlohmann::json;

void EpParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("ep parameter '") + name +
                        "' must be strictly positive and finite");
    }
  };
  positive(E0, "E0");
  positive(dE0, "dE0");
  positive(E1, "E1");
  positive(dE1, "dE1");
  positive(tau0, "tau0");
  positive(tau1G, "tau1G");
  positive(tau1D, "tau1D");
  positive(tau2G, "tau2G");
  positive(tau2D, "tau2D");
  positive(sigP0, "sigP0");
  positive(sigP1, "sigP1");
  positive(sigP2, "sigP2");
}

const std::array<const char*, 12>& EpParams::field_names() {
  static const std::array<const char*, 12> names = {
      "E0",    "dE0",   "E1",    "dE1",   "tau0",  "tau1G",
      "tau1D", "tau2G", "tau2D", "sigP0", "sigP1", "sigP2"};
  return names;
}

namespace {
double* field_ptr(EpParams& p, const std::string& name) {
  if (name == "E0") return &p.E0;
  if (name == "dE0") return &p.dE0;
  if (name == "E1") return &p.E1;
  if (name == "dE1") return &p.dE1;
  if (name == "tau0") return &p.tau0;
  if (name == "tau1G") return &p.tau1G;
  if (name == "tau1D") return &p.tau1D;
  if (name == "tau2G") return &p.tau2G;
  if (name == "tau2D") return &p.tau2D;
  if (name == "sigP0") return &p.sigP0;
  if (name == "sigP1") return &p.sigP1;
  if (name == "sigP2") return &p.sigP2;
  return nullptr;
}
}  // namespace

double EpParams::get(const std::string& name) const {
  auto* p = field_ptr(const_cast<EpParams&>(*this), name);
  if (!p) throw ConfigError("unknown ep parameter '" + name + "'");
  return *p;
}

void EpParams::set(const std::string& name, double value) {
  auto* p = field_ptr(*this, name);
  if (!p) throw ConfigError("unknown ep parameter '" + name + "'");
  *p = value;
}

void MaterialModel::validate() const {
  if (!(eps_inf >= 1.0)) throw ConfigError("eps_inf must be >= 1");
  if (!(sigma_s > 0.0)) throw ConfigError("sigma_s must be > 0");
  if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
  if (!(cp > 0.0)) throw ConfigError("cp must be > 0");
  if (!(k_thermal > 0.0)) throw ConfigError("k_thermal must be > 0");
  if (!(chi >= 0.0)) throw ConfigError("chi must be >= 0");
  if (!(T0 > 0.0)) throw ConfigError("T0 must be > 0");
  for (const auto& pole : poles) {
    if (!(pole.delta_eps > 0.0)) throw ConfigError("pole delta_eps must be > 0");
    if (!(pole.tau > 0.0)) throw ConfigError("pole tau must be > 0");
  }
  if (ep) ep->validate();
}

std::complex<double> complex_permittivity(const MaterialModel& m, double omega) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("complex_permittivity: omega must be > 0");
  }
  const std::complex<double> j(0.0, 1.0);
  std::complex<double> eps = m.eps_inf + m.sigma_s / (j * omega * kEps0);
  for (const auto& pole : m.poles) {
    eps += pole.delta_eps / (1.0 + j * omega * pole.tau);
  }
  return eps;
}

double equivalent_conductivity(const MaterialModel& m, double omega) {
  if (!(omega >= 0.0)) {
    throw std::invalid_argument("equivalent_conductivity: omega must be >= 0");
  }
  double sigma = m.sigma_s;
  for (const auto& pole : m.poles) {
    const double wt = omega * pole.tau;
    sigma += kEps0 * pole.delta_eps * omega * wt / (1.0 + wt * wt);
  }
  return sigma;
}

double sigma_p(double base, const std::array<double, 3>& p, const EpParams& ep) {
  for (double c : p) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::invalid_argument("sigma_p: concentration outside [0, 1]");
    }
  }
  return base + ep.sigP0 * p[0] + ep.sigP1 * p[1] + ep.sigP2 * p[2];
}

double sigma_t(double sig_p, double T, const MaterialModel& m) {
  return sig_p * (1.0 + m.chi * (T - m.T0));
}

namespace {

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(std::string("material: missing or non-numeric key '") +
                      key + "'");
  }
  return j.at(key).get<double>();
}

EpParams ep_from_json(const json& j) {
  EpParams ep;
  for (const char* name : EpParams::field_names()) {
    ep.set(name, require_number(j, name));
  }
  return ep;
}

json ep_to_json(const EpParams& ep) {
  json j;
  for (const char* name : EpParams::field_names()) j[name] = ep.get(name);
  return j;
}

}  // namespace

MaterialModel material_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("material: JSON parse error: ") + e.what());
  }
  MaterialModel m;
  m.eps_inf = require_number(j, "eps_inf");
  m.sigma_s = require_number(j, "sigma_s");
  m.rho = require_number(j, "rho");
  m.cp = require_number(j, "cp");
  m.k_thermal = require_number(j, "k_thermal");
  m.chi = require_number(j, "chi");
  m.T0 = require_number(j, "T0");
  if (j.contains("poles")) {
    if (!j.at("poles").is_array()) throw ConfigError("material: 'poles' must be an array");
    for (const auto& jp : j.at("poles")) {
      DebyePole pole;
      pole.delta_eps = require_number(jp, "delta_eps");
      pole.tau = require_number(jp, "tau");
      m.poles.push_back(pole);
    }
  }
  if (j.contains("ep") && !j.at("ep").is_null()) {
    m.ep = ep_from_json(j.at("ep"));
  }
  m.validate();
  return m;
}

std::string material_to_json_text(const MaterialModel& m) {
  json j;
  j["eps_inf"] = m.eps_inf;
  j["sigma_s"] = m.sigma_s;
  j["poles"] = json::array();
  for (const auto& pole : m.poles) {
    j["poles"].push_back({{"delta_eps", pole.delta_eps}, {"tau", pole.tau}});
  }
  j["rho"] = m.rho;
  j["cp"] = m.cp;
  j["k_thermal"] = m.k_thermal;
  j["chi"] = m.chi;
  j["T0"] = m.T0;
  if (m.ep) j["ep"] = ep_to_json(*m.ep);
  return j.dump(2) + "\n";
}

MaterialModel load_material(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("material: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return material_from_json_text(ss.str());
}

void save_material(const MaterialModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("material: cannot write '" + path + "'");
  out << material_to_json_text(m);
}

}  // namespace epsim
