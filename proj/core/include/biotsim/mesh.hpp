#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "biotsim/types.hpp"

namespace biotsim {

// Raised on malformed mesh files and broken mesh topology.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryEdge {
  int v0 = 0;
  int v1 = 0;
  int tag = 0;
};

// Conforming 2D triangle mesh. Triangles are counterclockwise; boundary
// edges are stored in the orientation of their owning triangle, so the
// outward normal of edge (v0,v1) is (t_y, -t_x)/|t| with t = v1 - v0.
// Immutable by convention once constructed.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> triangle_region;        // 0 = normal, 1 = injured
  std::vector<BoundaryEdge> boundary_edges;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int t) const;
  double total_area() const;
  double boundary_length(int tag) const;
  bool has_boundary_tag(int tag) const;
  std::vector<int> boundary_tags() const;  // sorted, unique

  // Full topology check: orientation, index ranges, edge manifoldness,
  // boundary coverage. Throws MeshError naming the offending entity.
  void validate() const;
};

// Unique undirected edges (as sorted vertex pairs in lexicographic order)
// plus per-triangle and per-edge adjacency.
struct EdgeConnectivity {
  std::vector<std::array<int, 2>> edges;            // (lo, hi), lexicographic
  std::vector<std::array<int, 3>> triangle_edges;   // edge ids of (v0,v1),(v1,v2),(v2,v0)
  std::vector<std::array<int, 2>> edge_triangles;   // adjacent triangles, -1 if none
};

EdgeConnectivity build_edge_connectivity(const Mesh& mesh);

// Structured unit-square mesh with 2n^2 right triangles. Boundary tags:
// 1 (x=1), 2 (y=0), 3 (x=0), 4 (y=1).
Mesh unit_square_mesh(int n);

// Red refinement: every triangle is split into 4 similar children by
// linking edge midpoints. Tags are inherited; midpoints are deduplicated
// by exact edge-key lookup, never by coordinate comparison.
Mesh refine_uniform(const Mesh& mesh);

}  // namespace biotsim
