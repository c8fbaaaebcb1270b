#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "whitney/simplex.hpp"

// Abstract simplicial meshes on a spacetime cylinder: M spacelike slices
// of N nodes each, periodic in space, with signed squared Lorentzian edge
// lengths as the only geometric data (signature (-,+), time first;
// negative squared length = timelike).  Node ids are slice-major:
// node = slice * N + position.  Nominal (t, x) labels for export and
// diagnostics are derived from the slice/position indices; the solver
// itself consumes only the edge lengths.

namespace whitney {

enum class MeshStyle { regular, lightcone };

struct MeshSpec {
  int nodes_per_slice = 30;
  int num_slices = 3;
  double dx = 1.0;
  double dt = 0.8;
  MeshStyle style = MeshStyle::regular;
};

/// Node-indexed scalar field.
struct DiscreteField {
  std::vector<double> values;
};

struct SpacetimeMesh {
  int nodes_per_slice = 0;
  int num_slices = 0;
  double dx = 0.0;
  double dt = 0.0;
  MeshStyle style = MeshStyle::regular;

  std::vector<std::array<int, 3>> triangles;
  std::vector<std::vector<int>> slices;
  std::unordered_map<std::uint64_t, double> edge_sq;

  int num_nodes() const { return nodes_per_slice * num_slices; }
  int node_id(int slice, int pos) const;
  int slice_of(int node) const { return node / nodes_per_slice; }
  int pos_of(int node) const { return node % nodes_per_slice; }

  bool has_edge(int i, int j) const;
  double edge_sq_length(int i, int j) const;
  void set_edge(int i, int j, double sq_length);

  /// Spatial circumference of the cylinder (N dx for the regular style,
  /// 2 N dx for the light-cone style whose in-slice spacing is 2 dx).
  double circumference() const;
  /// Nominal spatial label of a node (light-cone slices alternate offset).
  double node_x(int node) const;
  double node_t(int node) const { return slice_of(node) * dt; }
};

/// Uniform split of the N x M quad cylinder into triangles with one
/// diagonal direction; edge lengths dx^2 (horizontal), -dt^2 (vertical),
/// dx^2 - dt^2 (diagonal).  dt == dx is allowed (null diagonals) and only
/// warned about.
SpacetimeMesh build_cylinder_mesh(const MeshSpec& spec);

/// Diamond lattice aligned with the light cone: all cross-slice edges are
/// null, each diamond is split by a spacelike in-slice chord of squared
/// length (2 dx)^2.  Requires dt == dx and even N.
SpacetimeMesh build_lightcone_mesh(const MeshSpec& spec);

/// Checks every mesh invariant; returns human-readable violations (empty
/// means valid).
std::vector<std::string> validate(const SpacetimeMesh& mesh);

/// Abstract simplex of triangle `tri` from the stored edge lengths.
Simplex triangle_simplex(const SpacetimeMesh& mesh, int tri);
/// Embedded twin of triangle `tri` from nominal (t, x) coordinates with
/// the (-,+) signature, unwrapping the periodic seam.
Simplex triangle_simplex_embedded(const SpacetimeMesh& mesh, int tri);

// -- file formats -----------------------------------------------------------

/// ASCII PLY with nodes on a cylinder (radius = circumference / 2 pi plus
/// the field value as a radial offset, height = t) and the field exported
/// as the `quality` vertex property.
void export_ply(const SpacetimeMesh& mesh, const DiscreteField& field,
                const std::string& path);

/// CSV rows: slice_index,node_index,t,x,value,exact_value,abs_error.
void export_csv(const DiscreteField& field, const SpacetimeMesh& mesh,
                const std::string& path);

/// Reads a field back from the CSV written by export_csv.
DiscreteField load_field_csv(const std::string& path,
                             const SpacetimeMesh& mesh);

void save_mesh_json(const SpacetimeMesh& mesh, const std::string& path);
SpacetimeMesh load_mesh_json(const std::string& path);

/// Minimal ASCII PLY reader used to re-parse our own exports.
struct PlyData {
  std::vector<std::array<double, 4>> vertices;  // x y z quality
  std::vector<std::array<int, 3>> faces;
};
PlyData read_ply(const std::string& path);

}  // namespace whitney
