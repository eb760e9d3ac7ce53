#include "epsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "epsim/errors.hpp"

namespace epsim {

void SimTrace::push(double t_, double U_, double I_, double p0_, double p1_,
                    double p2_, double sigma_, double T_) {
  t.push_back(t_);
  U.push_back(U_);
  I.push_back(I_);
  p0.push_back(p0_);
  p1.push_back(p1_);
  p2.push_back(p2_);
  sigma.push_back(sigma_);
  T.push_back(T_);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected,
                              const std::string& path, std::size_t lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (...) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
    }
  }
  if (out.size() != expected) {
    throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(expected) + " columns");
  }
  return out;
}

}  // namespace

void write_trace_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("trace: cannot write '" + path + "'");
  out << "t,U,I,p0,p1,p2,sigma_app,T\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << fmt(trace.t[i]) << ',' << fmt(trace.U[i]) << ',' << fmt(trace.I[i])
        << ',' << fmt(trace.p0[i]) << ',' << fmt(trace.p1[i]) << ','
        << fmt(trace.p2[i]) << ',' << fmt(trace.sigma[i]) << ','
        << fmt(trace.T[i]) << '\n';
  }
}

SimTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("trace: cannot open '" + path + "'");
  SimTrace trace;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // header row
      continue;
    }
    const auto row = parse_row(line, 8, path, lineno);
    trace.push(row[0], row[1], row[2], row[3], row[4], row[5], row[6], row[7]);
  }
  return trace;
}

void write_measured_csv(const MeasuredTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("trace: cannot write '" + path + "'");
  if (!trace.sample_id.empty()) out << "# sample_id: " << trace.sample_id << "\n";
  if (trace.temperature > 0.0) out << "# temperature: " << fmt(trace.temperature) << "\n";
  out << "t,U,I\n";
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    out << fmt(trace.t[i]) << ',' << fmt(trace.U[i]) << ',' << fmt(trace.I[i]) << '\n';
  }
}

MeasuredTrace read_measured_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("trace: cannot open '" + path + "'");
  MeasuredTrace trace;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = line.substr(1, colon - 1);
        std::string value = line.substr(colon + 1);
        const auto trim = [](std::string& s) {
          s.erase(0, s.find_first_not_of(" \t"));
          s.erase(s.find_last_not_of(" \t\r") + 1);
        };
        trim(key);
        trim(value);
        if (key == "sample_id") trace.sample_id = value;
        if (key == "temperature") trace.temperature = std::stod(value);
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto row = parse_row(line, 3, path, lineno);
    trace.t.push_back(row[0]);
    trace.U.push_back(row[1]);
    trace.I.push_back(row[2]);
  }
  for (std::size_t i = 1; i < trace.t.size(); ++i) {
    if (!(trace.t[i] > trace.t[i - 1])) {
      throw ConfigError(path + ": time column must be strictly increasing");
    }
  }
  return trace;
}

double interp_at(std::span<const double> ts, std::span<const double> ys, double x) {
  if (ts.empty()) throw ConfigError("interp_at: empty series");
  if (x <= ts.front()) return ys.front();
  if (x >= ts.back()) return ys.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - ts[lo]) / (ts[hi] - ts[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

SimTrace resample_uniform(const SimTrace& trace, double dt_out) {
  if (!(dt_out > 0.0)) throw std::invalid_argument("resample_uniform: dt_out must be > 0");
  if (trace.size() < 2) return trace;
  SimTrace out;
  const double t_end = trace.t.back();
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt_out + 1e-9)) + 1;
  const auto cols_in = {&trace.t, &trace.U, &trace.I, &trace.p0,
                        &trace.p1, &trace.p2, &trace.sigma, &trace.T};
  std::vector<std::vector<double>*> cols_out = {&out.t, &out.U, &out.I, &out.p0,
                                                &out.p1, &out.p2, &out.sigma, &out.T};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * dt_out;
    std::size_t c = 0;
    for (const auto* col : cols_in) {
      if (c == 0) {
        cols_out[c]->push_back(x);
      } else {
        cols_out[c]->push_back(interp_at(trace.t, *col, x));
      }
      ++c;
    }
  }
  return out;
}

}  // namespace epsim
