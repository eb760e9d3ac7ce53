#include "epsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "epsim/errors.hpp"

namespace epsim {

namespace {

struct NiceTicks {
  double lo, hi, step;
};

NiceTicks nice_ticks(double lo, double hi) {
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double span = hi - lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  std::ofstream out(path);
  if (!out) throw ConfigError("plot: cannot write '" + path + "'");

  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(xmin <= xmax)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (ymin == ymax) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const auto xticks = nice_ticks(xmin, xmax);
  const auto yticks = nice_ticks(ymin, ymax);
  xmin = xticks.lo;
  xmax = xticks.hi;
  ymin = yticks.lo;
  ymax = yticks.hi;

  const double W = 760, H = 480;
  const double ml = 80, mr = 20, mt = 40, mb = 55;
  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  const auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
      << "font-family=\"sans-serif\">" << title << "</text>\n";

  for (double x = xticks.lo; x <= xticks.hi + 1e-12 * xticks.step; x += xticks.step) {
    out << "<line x1=\"" << px(x) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(x)
        << "\" y2=\"" << py(ymax) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << fmt(x) << "</text>\n";
  }
  for (double y = yticks.lo; y <= yticks.hi + 1e-12 * yticks.step; y += yticks.step) {
    out << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(y) << "\" x2=\"" << px(xmax)
        << "\" y2=\"" << py(y) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
        << fmt(y) << "</text>\n";
  }
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
      << "\" height=\"" << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << H / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 18 " << H / 2 << ")\">" << y_label << "</text>\n";

  double legend_y = mt + 16;
  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (n == 0) continue;
    const std::size_t stride = std::max<std::size_t>(1, n / 4000);
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    if ((n - 1) % stride != 0) out << px(s.x[n - 1]) << ',' << py(s.y[n - 1]);
    out << "\"/>\n";
    out << "<line x1=\"" << W - mr - 130 << "\" y1=\"" << legend_y << "\" x2=\""
        << W - mr - 105 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << W - mr - 100 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

}  // namespace epsim
