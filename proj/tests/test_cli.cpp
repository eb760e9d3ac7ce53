#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epsim/trace.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EPSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string capture_cli(const std::string& args) {
  const std::string out_file = (fs::temp_directory_path() / "epsim_cli_out.txt").string();
  const std::string cmd =
      std::string(EPSIM_CLI_PATH) + " " + args + " >" + out_file + " 2>&1";
  const int rc = std::system(cmd.c_str());
  (void)rc;  // the captured text is what matters here
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string run_config(const fs::path& dir, const std::string& solver, int count,
                       double amplitude) {
  nlohmann::json cfg;
  cfg["material"] = std::string(EPSIM_DATA_DIR) + "/materials/potato_tuber.json";
  cfg["solver"] = solver;
  cfg["protocol"] = {{"amplitude", amplitude}, {"pulse_width", 100e-6},
                     {"count", count},         {"repetition_rate", 5000.0},
                     {"rise_time", 1e-6},      {"fall_time", 1e-6},
                     {"post_burst_hold", 50e-6}};
  cfg["output"] = {{"directory", dir.string()}, {"output_dt", 1e-6}};
  return cfg.dump(2);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run writes trace, states, temperature and manifest") {
  const auto dir = fresh_dir("epsim_cli_run");
  write_file(dir / "cfg.json", run_config(dir, "lumped", 2, 250.0));
  CHECK(run_cli("run --config " + (dir / "cfg.json").string()) == 0);
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(fs::exists(dir / "waveform.csv"));
  CHECK(fs::exists(dir / "states.csv"));
  CHECK(fs::exists(dir / "temperature.csv"));
  CHECK(fs::exists(dir / "manifest.json"));

  const auto man = nlohmann::json::parse(read_file(dir / "manifest.json"));
  CHECK(man.at("command") == "run");
  CHECK(man.at("config_git_blob_sha1").get<std::string>().size() == 40);
  CHECK(man.at("material_git_blob_sha1").get<std::string>().size() == 40);
  CHECK(man.at("outputs").at("completed").get<bool>());

  const auto trace = epsim::read_trace_csv((dir / "trace.csv").string());
  CHECK(trace.size() > 300);
}

TEST_CASE("identical config produces bitwise-identical traces") {
  const auto dir_a = fresh_dir("epsim_cli_det_a");
  const auto dir_b = fresh_dir("epsim_cli_det_b");
  write_file(dir_a / "cfg.json", run_config(dir_a, "fem", 1, 400.0));
  write_file(dir_b / "cfg.json", run_config(dir_b, "fem", 1, 400.0));
  REQUIRE(run_cli("run --config " + (dir_a / "cfg.json").string()) == 0);
  REQUIRE(run_cli("run --config " + (dir_b / "cfg.json").string()) == 0);
  CHECK(read_file(dir_a / "trace.csv") == read_file(dir_b / "trace.csv"));
}

TEST_CASE("zero-count protocol runs to success with a null trace") {
  const auto dir = fresh_dir("epsim_cli_zero");
  write_file(dir / "cfg.json", run_config(dir, "lumped", 0, 100.0));
  CHECK(run_cli("run --config " + (dir / "cfg.json").string()) == 0);
  const auto trace = epsim::read_trace_csv((dir / "trace.csv").string());
  for (double v : trace.I) CHECK(v == 0.0);
}

TEST_CASE("malformed json exits with the config code and a line anchor") {
  const auto dir = fresh_dir("epsim_cli_bad");
  write_file(dir / "cfg.json", "{\n  \"material\": 12,\n  oops\n}\n");
  CHECK(run_cli("run --config " + (dir / "cfg.json").string()) == 2);
  const auto msg = capture_cli("run --config " + (dir / "cfg.json").string());
  CHECK(msg.find("cfg.json:3") != std::string::npos);

  write_file(dir / "cfg2.json", "{\"material\": 12}");
  CHECK(run_cli("run --config " + (dir / "cfg2.json").string()) == 2);
  CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 2);
}

TEST_CASE("compare of a trace against itself reports zero error") {
  const auto dir = fresh_dir("epsim_cli_cmp");
  write_file(dir / "cfg.json", run_config(dir, "lumped", 2, 250.0));
  REQUIRE(run_cli("run --config " + (dir / "cfg.json").string()) == 0);

  // turn the simulated trace into a measured-style file
  const auto trace = epsim::read_trace_csv((dir / "trace.csv").string());
  epsim::MeasuredTrace meas;
  meas.t = trace.t;
  meas.U = trace.U;
  meas.I = trace.I;
  epsim::write_measured_csv(meas, (dir / "meas.csv").string());

  const int code = run_cli("compare --sim " + (dir / "trace.csv").string() +
                           " --meas " + (dir / "meas.csv").string() + " --report " +
                           (dir / "rep.json").string());
  CHECK(code == 0);
  const auto rep = nlohmann::json::parse(read_file(dir / "rep.json"));
  CHECK(rep.at("rel_l2").get<double>() < 1e-12);
  CHECK(rep.at("plateaus").size() == 2);
}

TEST_CASE("mesh dump writes parseable json") {
  const auto dir = fresh_dir("epsim_cli_mesh");
  CHECK(run_cli("mesh-dump --out " + (dir / "mesh.json").string()) == 0);
  const auto j = nlohmann::json::parse(read_file(dir / "mesh.json"));
  CHECK(j.at("elements").size() >= 600);
}

TEST_CASE("dispersion check passes on the shipped preset") {
  const std::string material =
      std::string(EPSIM_DATA_DIR) + "/materials/potato_tuber.json";
  CHECK(run_cli("dispersion-check --material " + material +
                " --fmin 1e3 --fmax 1e5 --points 3") == 0);
}

}  // TEST_SUITE
