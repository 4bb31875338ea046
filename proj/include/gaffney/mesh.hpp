#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gaffney {

/// Oriented boundary edge of a triangulation. Endpoints are stored in the
/// counterclockwise traversal order of the boundary loop, so the domain
/// interior lies to the left of v[0] -> v[1] and the outward normal to the
/// right: normal = (tangent.y, -tangent.x), tangent = (-normal.y, normal.x).
struct Edge {
  std::array<int, 2> v{-1, -1};
  int tag = 0;  ///< boundary segment tag in [1, segment_count]
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  Eigen::Vector2d tangent = Eigen::Vector2d::Zero();
  double length = 0.0;
};

/// Conforming triangulation of a 2D polygon with tagged boundary segments.
/// Meshes are treated as immutable once generated; all members are plain
/// data so that tests can build deliberately broken instances.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< counterclockwise triples
  std::vector<Edge> boundary_edges;
  int segment_count = 0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int dof_count() const { return 2 * vertex_count(); }

  double triangle_area(int t) const;
  Eigen::Vector2d barycenter(int t) const;
  double total_area() const;
  double boundary_length() const;
  /// Mesh size h: length of the longest triangle edge.
  double longest_edge() const;
  Eigen::Vector2d edge_midpoint(const Edge& e) const;

  /// Lowest-index triangle containing x (ties on shared edges resolve to the
  /// lowest triangle index). Returns -1 when x lies outside the mesh.
  int locate(const Eigen::Vector2d& x) const;
};

Mesh generate_structured_square(int k);
Mesh generate_lshape(int k);
Mesh generate_regular_polygon(int sides, int k);

/// Uniform red refinement: every triangle splits into four via edge
/// midpoints; boundary edges bisect and inherit their tag.
Mesh refine(const Mesh& m);

/// Benchmark domain lookup: "square" | "lshape" | "hexagon" | "polygon:<sides>",
/// each generated with subdivision parameter k.
Mesh make_domain(const std::string& name, int k);

struct MeshIssue {
  std::string code;     ///< stable identifier, e.g. "negative-area"
  std::string message;  ///< human-readable detail
};

/// Diagnostics for the Mesh invariants. Returns an empty vector on valid
/// meshes; never throws.
std::vector<MeshIssue> validate(const Mesh& m);

/// Recompute normal/tangent/length of every boundary edge from its
/// endpoints. Loaded meshes never store frames; they are derived here.
void recompute_edge_frames(Mesh& m);

std::string to_json_string(const Mesh& m);
Mesh mesh_from_json_string(const std::string& text);
void save_mesh(const Mesh& m, const std::string& path);
Mesh load_mesh(const std::string& path);

}  // namespace gaffney
