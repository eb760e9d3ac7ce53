#include "epsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "epsim/errors.hpp"

namespace epsim {

void AxiGeometry::validate() const {
  if (!(sample_radius > 0.0) || !(sample_height > 0.0) ||
      !(electrode_radius > 0.0) || !(electrode_thickness > 0.0)) {
    throw ConfigError("geometry: all lengths must be > 0");
  }
  if (include_electrodes && electrode_radius < sample_radius) {
    throw ConfigError("geometry: electrode_radius must be >= sample_radius");
  }
}

const char* to_string(Region r) {
  return r == Region::Sample ? "sample" : "electrode";
}

const char* to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Terminal: return "terminal";
    case BoundaryTag::Ground: return "ground";
    case BoundaryTag::Axis: return "axis";
    default: return "insulation";
  }
}

double Mesh::element_area(int e) const {
  const auto& el = elements[e];
  const auto& a = nodes[el.n[0]];
  const auto& b = nodes[el.n[1]];
  const auto& c = nodes[el.n[2]];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

double Mesh::element_centroid_r(int e) const {
  const auto& el = elements[e];
  return (nodes[el.n[0]][0] + nodes[el.n[1]][0] + nodes[el.n[2]][0]) / 3.0;
}

double Mesh::region_volume(Region region) const {
  double v = 0.0;
  for (int e = 0; e < static_cast<int>(elements.size()); ++e) {
    if (elements[e].region != region) continue;
    v += 2.0 * std::numbers::pi * element_centroid_r(e) * element_area(e);
  }
  return v;
}

std::vector<int> Mesh::tagged_nodes(BoundaryTag tag) const {
  std::vector<int> out;
  for (const auto& edge : boundary) {
    if (edge.tag != tag) continue;
    out.push_back(edge.n[0]);
    out.push_back(edge.n[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Mesh::has_region(Region region) const {
  for (const auto& el : elements) {
    if (el.region == region) return true;
  }
  return false;
}

namespace {

/// Structured grid over the union of the sample rectangle and (optionally)
/// the two electrode slabs, with shared nodes on the interfaces.
class GridBuilder {
 public:
  int node(double r, double z) {
    const auto key = std::make_pair(quantize(r), quantize(z));
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({r, z});
    index_.emplace(key, id);
    return id;
  }

  /// Split the quad (r0,z0)-(r1,z1) into two CCW triangles.
  void quad(double r0, double r1, double z0, double z1, Region region,
            std::vector<Element>& elems) {
    const int a = node(r0, z0);
    const int b = node(r1, z0);
    const int c = node(r1, z1);
    const int d = node(r0, z1);
    elems.push_back({{a, b, c}, region});
    elems.push_back({{a, c, d}, region});
  }

  std::vector<std::array<double, 2>> take_nodes() { return std::move(nodes_); }

 private:
  static long long quantize(double v) {
    return static_cast<long long>(std::llround(v * 1e12));
  }
  std::vector<std::array<double, 2>> nodes_;
  std::map<std::pair<long long, long long>, int> index_;
};

std::vector<double> linspace(double a, double b, int cells) {
  std::vector<double> x(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  }
  return x;
}

}  // namespace

Mesh build_geometry(const AxiGeometry& g, const MeshOptions& opts) {
  g.validate();
  if (opts.refine < 1) throw ConfigError("mesh: refine must be >= 1");
  if (opts.target_elements < 8) throw ConfigError("mesh: target_elements too small");

  const double R = g.sample_radius;
  const double H = g.sample_height;
  // square cells sized so the sample alone meets the target count
  const double h_cell = std::sqrt(2.0 * R * H / static_cast<double>(opts.target_elements));
  const int nr = std::max(2, static_cast<int>(std::lround(R / h_cell))) * opts.refine;
  const int nz = std::max(2, static_cast<int>(std::lround(H / h_cell))) * opts.refine;

  const double z_bot = -H / 2.0;
  const double z_top = H / 2.0;
  const auto rs = linspace(0.0, R, nr);
  const auto zs = linspace(z_bot, z_top, nz);

  GridBuilder grid;
  Mesh mesh;
  for (int i = 0; i < nr; ++i) {
    for (int k = 0; k < nz; ++k) {
      grid.quad(rs[i], rs[i + 1], zs[k], zs[k + 1], Region::Sample, mesh.elements);
    }
  }

  double r_outer = R;
  double z_min = z_bot;
  double z_max = z_top;
  if (g.include_electrodes) {
    // electrode r-grid continues the sample spacing out to the plate radius
    const double dr = R / nr;
    const int nr_ext = std::max(1, static_cast<int>(std::lround((g.electrode_radius - R) / dr)));
    auto rs_el = rs;
    for (const double r : linspace(R, g.electrode_radius, nr_ext)) {
      if (r > R) rs_el.push_back(r);
    }
    const int nze = std::max(1, static_cast<int>(std::lround(g.electrode_thickness / (H / nz))));
    const auto z_top_el = linspace(z_top, z_top + g.electrode_thickness, nze);
    const auto z_bot_el = linspace(z_bot - g.electrode_thickness, z_bot, nze);
    for (std::size_t i = 0; i + 1 < rs_el.size(); ++i) {
      for (int k = 0; k < nze; ++k) {
        grid.quad(rs_el[i], rs_el[i + 1], z_top_el[k], z_top_el[k + 1],
                  Region::Electrode, mesh.elements);
        grid.quad(rs_el[i], rs_el[i + 1], z_bot_el[k], z_bot_el[k + 1],
                  Region::Electrode, mesh.elements);
      }
    }
    r_outer = g.electrode_radius;
    z_min = z_bot - g.electrode_thickness;
    z_max = z_top + g.electrode_thickness;
  }
  mesh.nodes = grid.take_nodes();

  // exterior edges: those referenced by exactly one element
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& el : mesh.elements) {
    for (int s = 0; s < 3; ++s) {
      int a = el.n[s];
      int b = el.n[(s + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  const double tol = 1e-9 * std::max(r_outer, z_max - z_min);
  for (const auto& [edge, count] : edge_count) {
    if (count != 1) continue;
    const auto& a = mesh.nodes[edge.first];
    const auto& b = mesh.nodes[edge.second];
    BoundaryEdge be{{edge.first, edge.second}, BoundaryTag::Insulation};
    if (std::abs(a[1] - z_max) < tol && std::abs(b[1] - z_max) < tol) {
      be.tag = BoundaryTag::Terminal;
    } else if (std::abs(a[1] - z_min) < tol && std::abs(b[1] - z_min) < tol) {
      be.tag = BoundaryTag::Ground;
    } else if (std::abs(a[0]) < tol && std::abs(b[0]) < tol) {
      be.tag = BoundaryTag::Axis;
    }
    mesh.boundary.push_back(be);
  }

  // node nearest the sample midpoint (0, 0)
  double best = std::numeric_limits<double>::max();
  for (int i = 0; i < static_cast<int>(mesh.nodes.size()); ++i) {
    const double d = mesh.nodes[i][0] * mesh.nodes[i][0] + mesh.nodes[i][1] * mesh.nodes[i][1];
    if (d < best) {
      best = d;
      mesh.center_node = i;
    }
  }

  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    if (!(mesh.element_area(e) > 0.0)) {
      throw ConfigError("mesh: degenerate element produced; check geometry dimensions");
    }
  }
  return mesh;
}

QualityReport mesh_quality(const Mesh& mesh) {
  QualityReport rep;
  rep.min_angle_deg = 180.0;
  rep.max_aspect = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const auto& el = mesh.elements[e];
    std::array<double, 3> len2{};
    for (int s = 0; s < 3; ++s) {
      const auto& a = mesh.nodes[el.n[s]];
      const auto& b = mesh.nodes[el.n[(s + 1) % 3]];
      const double dr = b[0] - a[0];
      const double dz = b[1] - a[1];
      len2[s] = dr * dr + dz * dz;
    }
    double min_angle = 180.0;
    for (int v = 0; v < 3; ++v) {
      const auto& p = mesh.nodes[el.n[v]];
      const auto& q = mesh.nodes[el.n[(v + 1) % 3]];
      const auto& r = mesh.nodes[el.n[(v + 2) % 3]];
      const double ux = q[0] - p[0], uy = q[1] - p[1];
      const double vx = r[0] - p[0], vy = r[1] - p[1];
      const double dot = ux * vx + uy * vy;
      const double nu = std::sqrt(ux * ux + uy * uy);
      const double nv = std::sqrt(vx * vx + vy * vy);
      const double c = std::clamp(dot / (nu * nv), -1.0, 1.0);
      min_angle = std::min(min_angle, std::acos(c) * 180.0 / std::numbers::pi);
    }
    const auto [lo, hi] = std::minmax_element(len2.begin(), len2.end());
    const double aspect = std::sqrt(*hi / *lo);
    rep.min_angle_deg = std::min(rep.min_angle_deg, min_angle);
    rep.max_aspect = std::max(rep.max_aspect, aspect);
    if (min_angle < 20.0 || aspect > 5.0) rep.failing_elements.push_back(e);
  }
  return rep;
}

std::string mesh_to_json(const Mesh& mesh) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : mesh.nodes) j["nodes"].push_back({n[0], n[1]});
  j["elements"] = nlohmann::json::array();
  for (const auto& el : mesh.elements) {
    j["elements"].push_back({el.n[0], el.n[1], el.n[2], to_string(el.region)});
  }
  j["boundary_edges"] = nlohmann::json::array();
  for (const auto& be : mesh.boundary) {
    j["boundary_edges"].push_back({be.n[0], be.n[1], to_string(be.tag)});
  }
  j["center_node"] = mesh.center_node;
  return j.dump(2) + "\n";
}

}  // namespace epsim
