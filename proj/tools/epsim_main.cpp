// Command-line front end: simulate pulse protocols on the field or lumped
// solver, sweep field levels, compare traces against measurements, estimate
// pore-kinetics parameters and dump meshes/dispersion diagnostics.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "epsim/constants.hpp"
#include "epsim/dispersion.hpp"
#include "epsim/errors.hpp"
#include "epsim/fem.hpp"
#include "epsim/fit.hpp"
#include "epsim/lumped.hpp"
#include "epsim/manifest.hpp"
#include "epsim/material.hpp"
#include "epsim/protocol.hpp"
#include "epsim/svg_plot.hpp"
#include "epsim/trace.hpp"

namespace {

using epsim::ConfigError;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitFit = 4;
constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses JSON and anchors parse errors to the source line.
json parse_config(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

double get_num(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

struct LoadedMaterial {
  epsim::MaterialModel model;
  std::string source_path;  // empty when inline
  std::string blob_sha1;
};

LoadedMaterial load_material_entry(const json& cfg, const std::string& key,
                                   const fs::path& base_dir) {
  if (!cfg.contains(key)) throw ConfigError("config: missing '" + key + "'");
  const auto& entry = cfg.at(key);
  LoadedMaterial out;
  if (entry.is_string()) {
    fs::path p = entry.get<std::string>();
    if (p.is_relative() && !fs::exists(p)) {
      const fs::path alt = base_dir / p;
      if (fs::exists(alt)) p = alt;
    }
    const std::string text = read_file(p.string());
    out.model = epsim::material_from_json_text(text);
    out.source_path = p.string();
    out.blob_sha1 = epsim::git_blob_sha1(text);
  } else if (entry.is_object()) {
    const std::string text = entry.dump();
    out.model = epsim::material_from_json_text(text);
    out.blob_sha1 = epsim::git_blob_sha1(text);
  } else {
    throw ConfigError("config: '" + key + "' must be a path or an object");
  }
  return out;
}

epsim::AxiGeometry parse_geometry(const json& cfg) {
  epsim::AxiGeometry g;
  if (cfg.contains("geometry")) {
    const auto& j = cfg.at("geometry");
    g.sample_radius = get_num(j, "sample_radius", g.sample_radius);
    g.sample_height = get_num(j, "sample_height", g.sample_height);
    g.electrode_radius = get_num(j, "electrode_radius", g.electrode_radius);
    g.electrode_thickness = get_num(j, "electrode_thickness", g.electrode_thickness);
    if (j.contains("include_electrodes")) {
      g.include_electrodes = j.at("include_electrodes").get<bool>();
    }
  }
  g.validate();
  return g;
}

epsim::MeshOptions parse_mesh_options(const json& cfg) {
  epsim::MeshOptions opts;
  if (cfg.contains("mesh")) {
    const auto& j = cfg.at("mesh");
    opts.target_elements = static_cast<int>(get_num(j, "target_elements", opts.target_elements));
    opts.refine = static_cast<int>(get_num(j, "refine", opts.refine));
  }
  return opts;
}

epsim::PulseProtocol parse_protocol(const json& cfg) {
  if (!cfg.contains("protocol")) throw ConfigError("config: missing 'protocol'");
  const auto& j = cfg.at("protocol");
  epsim::PulseProtocol p;
  p.amplitude = get_num(j, "amplitude", 0.0);
  p.pulse_width = get_num(j, "pulse_width", p.pulse_width);
  p.count = static_cast<int>(get_num(j, "count", p.count));
  p.repetition_rate = get_num(j, "repetition_rate", p.repetition_rate);
  p.rise_time = get_num(j, "rise_time", p.rise_time);
  p.fall_time = get_num(j, "fall_time", p.fall_time);
  p.post_burst_hold = get_num(j, "post_burst_hold", p.post_burst_hold);
  p.validate();
  return p;
}

epsim::StepController parse_controller(const json& cfg) {
  epsim::StepController c;
  if (cfg.contains("controller")) {
    const auto& j = cfg.at("controller");
    c.dt_transition = get_num(j, "dt_transition", c.dt_transition);
    c.dt_plateau = get_num(j, "dt_plateau", c.dt_plateau);
    c.transition_window = get_num(j, "transition_window", c.transition_window);
  }
  c.validate();
  return c;
}

epsim::ThermalMode parse_thermal_mode(const json& cfg) {
  const std::string mode = cfg.value("thermal_mode", "adiabatic");
  if (mode == "adiabatic") return epsim::ThermalMode::Adiabatic;
  if (mode == "diffusive") return epsim::ThermalMode::Diffusive;
  throw ConfigError("config: thermal_mode must be 'adiabatic' or 'diffusive'");
}

struct OutputSpec {
  fs::path dir = ".";
  std::string trace = "trace.csv";
  std::string waveform = "waveform.csv";
  std::string states = "states.csv";
  std::string temperature = "temperature.csv";
  std::string manifest = "manifest.json";
  std::string ade_dump;  // lumped diagnostics, empty = off
  double output_dt = 1e-7;
  bool plots = false;
};

OutputSpec parse_output(const json& cfg) {
  OutputSpec out;
  if (cfg.contains("output")) {
    const auto& j = cfg.at("output");
    out.dir = j.value("directory", std::string("."));
    out.trace = j.value("trace", out.trace);
    out.waveform = j.value("waveform", out.waveform);
    out.states = j.value("states", out.states);
    out.temperature = j.value("temperature", out.temperature);
    out.manifest = j.value("manifest", out.manifest);
    out.ade_dump = j.value("ade_dump", std::string());
    out.output_dt = get_num(j, "output_dt", out.output_dt);
    out.plots = j.value("plots", false);
  }
  if (!(out.output_dt > 0.0)) throw ConfigError("config: output_dt must be > 0");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_waveform_csv(const epsim::SimTrace& tr, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "t,U\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << fmt(tr.t[i]) << ',' << fmt(tr.U[i]) << '\n';
  }
}

void write_states_csv(const epsim::SimTrace& tr, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "t,p0,p1,p2\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << fmt(tr.t[i]) << ',' << fmt(tr.p0[i]) << ',' << fmt(tr.p1[i]) << ','
        << fmt(tr.p2[i]) << '\n';
  }
}

void write_temperature_csv(const epsim::SimTrace& tr, double T0, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "t,T,dT\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << fmt(tr.t[i]) << ',' << fmt(tr.T[i]) << ',' << fmt(tr.T[i] - T0) << '\n';
  }
}

void write_plots(const epsim::SimTrace& tr, double T0, const fs::path& dir) {
  std::vector<double> dT(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) dT[i] = tr.T[i] - T0;
  epsim::write_svg_plot((dir / "current.svg").string(), "Terminal current", "t [s]",
                        "I [A]", {{"I", tr.t, tr.I, "#1f77b4"}});
  epsim::write_svg_plot((dir / "states.svg").string(), "Pore-state concentrations",
                        "t [s]", "concentration",
                        {{"p0", tr.t, tr.p0, "#1f77b4"},
                         {"p1", tr.t, tr.p1, "#d62728"},
                         {"p2", tr.t, tr.p2, "#2ca02c"}});
  epsim::write_svg_plot((dir / "sigma.svg").string(), "Apparent conductivity",
                        "t [s]", "sigma [S/m]", {{"sigma", tr.t, tr.sigma, "#9467bd"}});
  epsim::write_svg_plot((dir / "temperature.svg").string(), "Temperature rise",
                        "t [s]", "dT [K]", {{"dT", tr.t, dT, "#ff7f0e"}});
}

epsim::RunResult run_solver(const json& cfg, const LoadedMaterial& material,
                            const epsim::AxiGeometry& geom,
                            const epsim::PulseProtocol& protocol,
                            const epsim::StepController& controller,
                            const OutputSpec& out, const fs::path& base_dir) {
  const std::string solver = cfg.value("solver", "fem");
  if (solver == "lumped") {
    return epsim::lumped_run(material.model, protocol, geom, controller,
                             out.output_dt, !out.ade_dump.empty());
  }
  if (solver != "fem") throw ConfigError("config: solver must be 'fem' or 'lumped'");
  std::optional<epsim::MaterialModel> electrode;
  if (geom.include_electrodes) {
    electrode = load_material_entry(cfg, "electrode_material", base_dir).model;
  }
  return epsim::fem_run(geom, parse_mesh_options(cfg), material.model, electrode,
                        protocol, controller, out.output_dt, parse_thermal_mode(cfg));
}

void write_manifest(const fs::path& path, const std::string& command,
                    const json& cfg, const std::string& config_sha1,
                    const LoadedMaterial& material, const json& outputs) {
  json man;
  man["tool"] = "epsim";
  man["version"] = kVersion;
  man["command"] = command;
  man["config"] = cfg;
  man["config_git_blob_sha1"] = config_sha1;
  if (!material.source_path.empty()) man["material_path"] = material.source_path;
  man["material_git_blob_sha1"] = material.blob_sha1;
  man["outputs"] = outputs;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << man.dump(2) << "\n";
}

int cmd_run(const std::string& config_path) {
  const json cfg = parse_config(config_path);
  const std::string config_sha1 = epsim::git_blob_sha1(read_file(config_path));
  const fs::path base_dir = fs::path(config_path).parent_path();

  const auto material = load_material_entry(cfg, "material", base_dir);
  const auto geom = parse_geometry(cfg);
  const auto protocol = parse_protocol(cfg);
  const auto controller = parse_controller(cfg);
  const auto out = parse_output(cfg);
  fs::create_directories(out.dir);

  const auto result = run_solver(cfg, material, geom, protocol, controller, out, base_dir);

  epsim::write_trace_csv(result.trace, (out.dir / out.trace).string());
  write_waveform_csv(result.trace, out.dir / out.waveform);
  write_states_csv(result.trace, out.dir / out.states);
  write_temperature_csv(result.trace, material.model.T0, out.dir / out.temperature);
  if (!out.ade_dump.empty() && !result.ade.empty()) {
    std::ofstream dump(out.dir / out.ade_dump);
    dump << "t";
    for (std::size_t k = 0; k < result.ade.front().size(); ++k) dump << ",e" << k + 1;
    dump << "\n";
    for (std::size_t i = 0; i < result.raw.size(); ++i) {
      dump << fmt(result.raw.t[i]);
      for (double v : result.ade[i]) dump << ',' << fmt(v);
      dump << "\n";
    }
  }
  if (out.plots) write_plots(result.trace, material.model.T0, out.dir);

  json outputs;
  outputs["trace"] = out.trace;
  outputs["waveform"] = out.waveform;
  outputs["states"] = out.states;
  outputs["temperature"] = out.temperature;
  outputs["samples"] = result.trace.size();
  outputs["dT_final_K"] = result.trace.size() ? result.trace.T.back() - material.model.T0 : 0.0;
  outputs["completed"] = result.ok;
  if (!result.ok) outputs["error"] = result.error;
  write_manifest(out.dir / out.manifest, "run", cfg, config_sha1, material, outputs);

  if (!result.ok) {
    std::cerr << "run aborted: " << result.error << " (partial trace written)\n";
    return kExitNumerical;
  }
  std::cout << "wrote " << (out.dir / out.trace).string() << " ("
            << result.trace.size() << " samples)\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path) {
  const json cfg = parse_config(config_path);
  const std::string config_sha1 = epsim::git_blob_sha1(read_file(config_path));
  const fs::path base_dir = fs::path(config_path).parent_path();

  if (!cfg.contains("field_levels") || !cfg.at("field_levels").is_array()) {
    throw ConfigError("config: sweep needs a 'field_levels' array (V/m)");
  }
  const auto material = load_material_entry(cfg, "material", base_dir);
  const auto geom = parse_geometry(cfg);
  auto protocol = parse_protocol(cfg);
  const auto controller = parse_controller(cfg);
  const auto out = parse_output(cfg);
  fs::create_directories(out.dir);

  std::ofstream summary(out.dir / "sweep_summary.csv");
  summary << "field_V_per_m,amplitude_V,I_peak_A,sigma_final_S_per_m,dT_final_K\n";
  json outputs = json::array();
  for (const auto& level_json : cfg.at("field_levels")) {
    const double level = level_json.get<double>();
    protocol.amplitude = level * geom.sample_height;
    const auto result =
        run_solver(cfg, material, geom, protocol, controller, out, base_dir);
    if (!result.ok) {
      std::cerr << "sweep aborted at " << level << " V/m: " << result.error << "\n";
      return kExitNumerical;
    }
    char name[64];
    std::snprintf(name, sizeof(name), "trace_%07.0fVpm.csv", level);
    epsim::write_trace_csv(result.trace, (out.dir / name).string());
    double ipeak = 0.0;
    for (double v : result.trace.I) ipeak = std::max(ipeak, std::abs(v));
    const double dT = result.trace.T.back() - material.model.T0;
    summary << fmt(level) << ',' << fmt(protocol.amplitude) << ',' << fmt(ipeak)
            << ',' << fmt(result.trace.sigma.back()) << ',' << fmt(dT) << '\n';
    outputs.push_back({{"field_V_per_m", level}, {"trace", name}, {"dT_final_K", dT}});
    std::cout << "level " << level / 1e3 << " kV/m: dT = " << dT << " K\n";
  }
  write_manifest(out.dir / out.manifest, "sweep", cfg, config_sha1, material,
                 {{"summary", "sweep_summary.csv"}, {"levels", outputs}});
  return kExitOk;
}

int cmd_fit(const std::string& config_path) {
  const json cfg = parse_config(config_path);
  const std::string config_sha1 = epsim::git_blob_sha1(read_file(config_path));
  const fs::path base_dir = fs::path(config_path).parent_path();

  const auto material = load_material_entry(cfg, "material", base_dir);
  if (!material.model.ep) {
    throw ConfigError("config: fit needs a material with an 'ep' block");
  }
  if (!cfg.contains("fit")) throw ConfigError("config: missing 'fit' section");
  const auto& jf = cfg.at("fit");

  epsim::FitProblem problem;
  problem.base = material.model;
  problem.geometry = parse_geometry(cfg);
  problem.protocol = parse_protocol(cfg);
  problem.controller = parse_controller(cfg);
  problem.rng_seed = static_cast<unsigned>(get_num(jf, "seed", 2024));
  problem.max_evals_per_start =
      static_cast<int>(get_num(jf, "max_evals_per_start", 6000));

  if (!jf.contains("traces") || !jf.at("traces").is_array() || jf.at("traces").empty()) {
    throw ConfigError("config: fit.traces must be a non-empty array");
  }
  for (const auto& jt : jf.at("traces")) {
    epsim::FitTrace ft;
    fs::path p = jt.at("path").get<std::string>();
    if (p.is_relative() && !fs::exists(p) && fs::exists(base_dir / p)) p = base_dir / p;
    ft.data = epsim::read_measured_csv(p.string());
    ft.field_level = jt.at("field_level").get<double>();
    ft.weight = jt.value("weight", 1.0);
    problem.traces.push_back(std::move(ft));
  }
  if (jf.contains("free")) {
    for (const auto& name : jf.at("free")) {
      problem.free_params.push_back(name.get<std::string>());
    }
  }
  if (jf.contains("bounds")) {
    for (const auto& [name, jb] : jf.at("bounds").items()) {
      problem.bounds[name] = {jb.at(0).get<double>(), jb.at(1).get<double>()};
    }
  }

  const auto result = epsim::fit_parameters(problem);

  const auto out = parse_output(cfg);
  fs::create_directories(out.dir);
  epsim::MaterialModel fitted = material.model;
  fitted.ep = result.params;
  const std::string out_material = jf.value("output_material", std::string("fitted_material.json"));
  epsim::save_material(fitted, (out.dir / out_material).string());

  json report;
  report["objective"] = result.objective;
  report["total_evals"] = result.total_evals;
  report["params"] = json::object();
  for (const char* name : epsim::EpParams::field_names()) {
    report["params"][name] = result.params.get(name);
  }
  report["per_trace_rel_l2"] = result.per_trace_residual;
  report["sensitivity"] = json::array();
  for (const auto& s : result.sensitivity) {
    report["sensitivity"].push_back(
        {{"param", s.name}, {"curvature", s.curvature}, {"insensitive", s.insensitive}});
  }
  report["restarts"] = json::array();
  for (const auto& r : result.restarts) {
    json jr;
    jr["f"] = std::isfinite(r.f) ? json(r.f) : json("infeasible");
    jr["evals"] = r.evals;
    jr["iterations"] = r.iterations;
    jr["converged"] = r.converged;
    json hist = json::array();
    const std::size_t stride = std::max<std::size_t>(1, r.history.size() / 50);
    for (std::size_t i = 0; i < r.history.size(); i += stride) {
      hist.push_back({r.history[i].first, r.history[i].second});
    }
    jr["history"] = hist;
    report["restarts"].push_back(jr);
  }
  const std::string report_name = jf.value("report", std::string("fit_report.json"));
  {
    std::ofstream rep(out.dir / report_name);
    rep << report.dump(2) << "\n";
  }
  write_manifest(out.dir / out.manifest, "fit", cfg, config_sha1, material,
                 {{"material", out_material}, {"report", report_name}});

  std::cout << "fit objective " << result.objective << " after " << result.total_evals
            << " evaluations\n";
  for (const auto& s : result.sensitivity) {
    if (s.insensitive) std::cout << "note: parameter " << s.name << " is insensitive\n";
  }
  return kExitOk;
}

int cmd_compare(const std::string& sim_path, const std::string& meas_path,
                const std::string& report_path) {
  const auto sim = epsim::read_trace_csv(sim_path);
  const auto meas = epsim::read_measured_csv(meas_path);
  const auto rep = epsim::compare_traces(sim, meas);
  std::cout << "relative L2 error: " << rep.rel_l2 << " over " << rep.samples
            << " samples\n";
  if (!rep.plateaus.empty()) {
    std::printf("%6s %12s %12s %12s\n", "pulse", "I_meas [A]", "I_sim [A]", "rel");
    for (const auto& row : rep.plateaus) {
      std::printf("%6d %12.6g %12.6g %12.3g\n", row.pulse, row.I_meas, row.I_sim,
                  row.I_meas != 0.0 ? (row.I_sim - row.I_meas) / row.I_meas : 0.0);
    }
  }
  if (!report_path.empty()) {
    json j;
    j["rel_l2"] = rep.rel_l2;
    j["samples"] = rep.samples;
    j["plateaus"] = json::array();
    for (const auto& row : rep.plateaus) {
      j["plateaus"].push_back({{"pulse", row.pulse},
                               {"t_start", row.t_start},
                               {"t_end", row.t_end},
                               {"I_meas", row.I_meas},
                               {"I_sim", row.I_sim}});
    }
    std::ofstream out(report_path);
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_mesh_dump(const std::string& config_path, const std::string& out_path) {
  json cfg = json::object();
  if (!config_path.empty()) cfg = parse_config(config_path);
  const auto geom = parse_geometry(cfg);
  const auto mesh = epsim::build_geometry(geom, parse_mesh_options(cfg));
  const auto quality = epsim::mesh_quality(mesh);
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  out << epsim::mesh_to_json(mesh);
  std::cout << "mesh: " << mesh.elements.size() << " elements, "
            << mesh.nodes.size() << " nodes, min angle " << quality.min_angle_deg
            << " deg, max aspect " << quality.max_aspect << "\n";
  return quality.pass() ? kExitOk : kExitNumerical;
}

int cmd_dispersion_check(const std::string& material_path, double fmin, double fmax,
                         int points, double tol, const std::string& csv_path) {
  const auto m = epsim::load_material(material_path);
  std::ofstream csv;
  if (!csv_path.empty()) {
    csv.open(csv_path);
    csv << "freq_Hz,sigma_td_re,sigma_td_im,sigma_fd_re,sigma_fd_im,rel_err\n";
  }
  std::printf("%12s %28s %28s %10s\n", "freq [Hz]", "time-domain [S/m]",
              "frequency-domain [S/m]", "rel err");
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double f =
        points == 1 ? fmin
                    : fmin * std::pow(fmax / fmin,
                                      static_cast<double>(i) / (points - 1));
    const auto td = epsim::sinusoidal_admittance_check(m, f);
    const double omega = 2.0 * std::numbers::pi * f;
    const auto fd = std::complex<double>(0.0, 1.0) * omega * epsim::kEps0 *
                    epsim::complex_permittivity(m, omega);
    const double rel = std::abs(td - fd) / std::abs(fd);
    worst = std::max(worst, rel);
    std::printf("%12.4g %13.5g %+13.5gj %13.5g %+13.5gj %10.2e\n", f, td.real(),
                td.imag(), fd.real(), fd.imag(), rel);
    if (csv.is_open()) {
      csv << fmt(f) << ',' << fmt(td.real()) << ',' << fmt(td.imag()) << ','
          << fmt(fd.real()) << ',' << fmt(fd.imag()) << ',' << fmt(rel) << '\n';
    }
  }
  std::printf("worst relative error: %.3e (tolerance %.3e)\n", worst, tol);
  return worst <= tol ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epsim: coupled dispersion / pore-kinetics / heating simulator "
               "for pulsed-field tissue experiments"};
  app.require_subcommand(1);

  std::string config_path, sim_path, meas_path, report_path, out_path, material_path;
  double fmin = 40.0, fmax = 10e6, tol = 5e-3;
  int points = 10;

  auto* run = app.add_subcommand("run", "simulate one protocol from a JSON config");
  run->add_option("--config", config_path, "JSON config file")->required();

  auto* sweep = app.add_subcommand("sweep", "run the protocol across field levels");
  sweep->add_option("--config", config_path, "JSON config file with field_levels")->required();

  auto* fit = app.add_subcommand("fit", "estimate pore-kinetics parameters from traces");
  fit->add_option("--config", config_path, "JSON config file with a fit section")->required();

  auto* compare = app.add_subcommand("compare", "compare a simulated trace with a measurement");
  compare->add_option("--sim", sim_path, "simulated trace CSV")->required();
  compare->add_option("--meas", meas_path, "measured trace CSV (t,U,I)")->required();
  compare->add_option("--report", report_path, "optional JSON report path");

  auto* mesh_dump = app.add_subcommand("mesh-dump", "write the mesh as JSON");
  mesh_dump->add_option("--config", config_path, "JSON config (geometry/mesh sections)");
  mesh_dump->add_option("--out", out_path, "output JSON path")->required();

  auto* disp = app.add_subcommand("dispersion-check",
                                  "verify time-domain dispersion against the "
                                  "frequency-domain model");
  disp->add_option("--material", material_path, "material preset JSON")->required();
  disp->add_option("--fmin", fmin, "lowest frequency [Hz]");
  disp->add_option("--fmax", fmax, "highest frequency [Hz]");
  disp->add_option("--points", points, "number of log-spaced frequencies");
  disp->add_option("--tol", tol, "relative tolerance");
  disp->add_option("--csv", out_path, "optional CSV table output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (sweep->parsed()) return cmd_sweep(config_path);
    if (fit->parsed()) return cmd_fit(config_path);
    if (compare->parsed()) return cmd_compare(sim_path, meas_path, report_path);
    if (mesh_dump->parsed()) return cmd_mesh_dump(config_path, out_path);
    if (disp->parsed()) {
      return cmd_dispersion_check(material_path, fmin, fmax, points, tol, out_path);
    }
  } catch (const epsim::FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return kExitFit;
  } catch (const epsim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const epsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
