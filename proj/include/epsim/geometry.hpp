#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace epsim {

/// Rotationally symmetric plate-electrode cell: a tissue cylinder between
/// two circular plates, solved on the (r, z) half-plane with the sample
/// centred at z = 0.
struct AxiGeometry {
  double sample_radius = 9.25e-3;       ///< m
  double sample_height = 5e-3;          ///< m
  double electrode_radius = 15e-3;      ///< m
  double electrode_thickness = 1e-3;    ///< m
  bool include_electrodes = false;

  void validate() const;  ///< throws ConfigError on invariant violation
};

enum class Region : std::uint8_t { Sample = 0, Electrode = 1 };
enum class BoundaryTag : std::uint8_t { Terminal = 0, Ground = 1, Axis = 2, Insulation = 3 };

const char* to_string(Region r);
const char* to_string(BoundaryTag t);

struct Element {
  std::array<int, 3> n;  ///< node indices, counterclockwise
  Region region = Region::Sample;
};

struct BoundaryEdge {
  std::array<int, 2> n;
  BoundaryTag tag = BoundaryTag::Insulation;
};

/// Conforming triangle mesh of the half-plane geometry with tagged
/// exterior edges. Immutable after construction.
struct Mesh {
  std::vector<std::array<double, 2>> nodes;  ///< (r, z)
  std::vector<Element> elements;
  std::vector<BoundaryEdge> boundary;
  int center_node = -1;  ///< node nearest (0, 0)

  double element_area(int e) const;
  double element_centroid_r(int e) const;
  /// Revolved volume sum over elements of one region (2*pi*r_centroid*area).
  double region_volume(Region region) const;
  std::vector<int> tagged_nodes(BoundaryTag tag) const;
  bool has_region(Region region) const;
};

struct MeshOptions {
  int target_elements = 728;  ///< approximate sample element count at refine=1
  int refine = 1;             ///< uniform refinement factor
};

/// Builds a structured triangulated mesh of the geometry. The terminal tag
/// sits on the top boundary (sample face, or the top electrode face when
/// electrodes are included), ground on the bottom, axis at r = 0 and
/// insulation on the remaining exterior.
Mesh build_geometry(const AxiGeometry& g, const MeshOptions& opts = {});

struct QualityReport {
  double min_angle_deg = 0.0;
  double max_aspect = 0.0;            ///< longest/shortest edge
  std::vector<int> failing_elements;  ///< below 20 deg or above aspect 5
  bool pass() const { return failing_elements.empty(); }
};

QualityReport mesh_quality(const Mesh& mesh);

/// JSON dump (nodes, elements, boundary tags) for external visualization.
std::string mesh_to_json(const Mesh& mesh);

}  // namespace epsim
