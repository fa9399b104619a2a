#pragma once

// Bipartite square-lattice graphs for the dimer model: rectangles, periodic
// cylinders with a monodromy seam, multiply connected domains with rectangular
// holes, and punctured variants. Graphs are immutable once built and safe to
// share read-only across threads.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dimercff/errors.hpp"

namespace dimercff {

enum class Color : std::uint8_t { Black, White };

// Lattice vertex. Color is fixed by parity: black iff x + y is even.
struct VertexId {
  int x = 0;
  int y = 0;
  auto operator<=>(const VertexId&) const = default;
};

inline Color vertex_color(VertexId v) {
  return ((v.x + v.y) % 2 + 2) % 2 == 0 ? Color::Black : Color::White;
}

// Undirected edge; stored with the white endpoint first.
struct Edge {
  VertexId white;
  VertexId black;
  auto operator<=>(const Edge&) const = default;
};

// Faces of the embedded graph. Unit faces are indexed by their lower-left
// primal vertex; the unbounded region, hole regions, regions opened up by
// punctures, and the two cylinder boundary regions get reserved kinds.
struct FaceId {
  enum class Kind : std::uint8_t { Unit, Outer, Hole, Puncture, Bottom, Top };
  Kind kind = Kind::Unit;
  int x = 0;      // Unit only
  int y = 0;      // Unit only
  int index = 0;  // Hole / Puncture ordinal
  auto operator<=>(const FaceId&) const = default;
};

std::string to_string(FaceId f);

// Oriented dual edge from one face to an adjacent one, crossing a primal
// edge. sign = +1 when the white endpoint of the crossed edge lies to the
// left while traversing from -> to; reversing the dual edge flips it.
struct DualEdge {
  FaceId from;
  FaceId to;
  Edge crossed;
  int sign = 1;
};

inline DualEdge reversed(const DualEdge& d) {
  return DualEdge{d.to, d.from, d.crossed, -d.sign};
}

enum class Topology : std::uint8_t { PlanarRectangle, PlanarMultiholed, Cylinder };
enum class CylinderStyle : std::uint8_t { DD, ND };

// Rectangle of removed vertices: x0 <= x < x0+w, y0 <= y < y0+h.
struct HoleRect {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
};

class DimerGraph {
 public:
  Topology topology() const { return topology_; }
  CylinderStyle cylinder_style() const { return style_; }
  // Horizontal period 2k for cylinders; grid width for planar graphs.
  int width_period() const { return width_; }
  int rows() const { return rows_; }
  int y_min() const { return y_min_; }
  int y_max() const { return y_min_ + rows_ - 1; }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<VertexId>& removed() const { return removed_; }
  const std::vector<HoleRect>& holes() const { return holes_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int black_count() const { return black_count_; }
  int white_count() const { return white_count_; }
  bool balanced() const { return black_count_ == white_count_; }

  bool has_vertex(VertexId v) const;
  bool has_edge(VertexId a, VertexId b) const;
  int vertex_index(VertexId v) const;  // -1 if absent
  int edge_index(const Edge& e) const; // -1 if absent
  // Neighbors in fixed E,N,W,S rotation order (existing ones only).
  const std::vector<int>& neighbors(int vertex_idx) const { return adjacency_[vertex_idx]; }
  const Edge& edge(int edge_idx) const { return edges_[edge_idx]; }
  int edge_between(int va, int vb) const;

  // x coordinate reduced to [0, width) on cylinders; identity otherwise.
  int wrap_x(int x) const;
  bool is_horizontal(const Edge& e) const;
  // Horizontal edge closing the x-period (cylinders only).
  bool is_seam_edge(const Edge& e) const;

  // Monodromy cut: primal edges crossed by the cut curve that runs from one
  // boundary to the other at the seam column. Cylinders only.
  const std::vector<Edge>& cut_edges() const { return cut_edges_; }
  int cut_column() const { return cut_column_; }
  // Dual edges crossing the same cut curve; removing these opens all loops
  // winding around the cylinder.
  bool crosses_cut(const DualEdge& d) const;
  // Cut curves attached to holes / punctures (one per region, running to the
  // outer boundary); edges crossing cut curve of region r.
  const std::vector<std::vector<Edge>>& hole_cut_edges() const { return hole_cuts_; }
  // Whether a dual edge crosses any region cut curve (or, on cylinders, the
  // seam cut). The dual graph minus these edges is simply connected.
  bool crosses_any_cut(const DualEdge& d) const;

  // Faces.
  const std::vector<FaceId>& faces() const { return faces_; }  // all, reserved included
  int bounded_face_count() const { return unit_face_count_; }
  int face_index(FaceId f) const;  // -1 if absent
  bool has_face(FaceId f) const { return face_index(f) >= 0; }
  // Dual edges incident to a face, oriented outward from it.
  const std::vector<DualEdge>& dual_star(FaceId f) const;
  // The two faces on either side of a primal edge, as an oriented dual edge
  // with canonical orientation (sign = +1).
  DualEdge dual_of(const Edge& e) const;

  // Boundary components as ordered vertex cycles: outer component first,
  // then one per hole, then one per interior puncture region.
  const std::vector<std::vector<VertexId>>& boundary_components() const {
    return boundary_components_;
  }

  // Simple dual path from one face to another through optional waypoints
  // (BFS per leg, never revisiting a face). Throws if faces are missing or
  // the dual graph leg is disconnected.
  std::vector<DualEdge> dual_path(FaceId from, FaceId to,
                                  const std::vector<FaceId>& waypoints = {}) const;

  // Variant of a cylinder graph with the cut curve moved to another column.
  DimerGraph with_cut_at(int column) const;

  // Puncture: remove victims and their incident edges, recompute faces and
  // boundary components. Throws UnmatchableGraphError on color imbalance.
  friend DimerGraph puncture(const DimerGraph& g, const std::vector<VertexId>& victims);

  friend DimerGraph build_rectangle(int cols, int rows);
  friend DimerGraph build_cylinder(int k, double tau, CylinderStyle style, int cut_column);
  friend DimerGraph build_multiholed(int cols, int rows, const std::vector<HoleRect>& holes);

 private:
  DimerGraph() = default;
  void finalize();  // derives edges, faces, dual structure, boundary cycles
  void build_faces();
  void build_duals();
  void build_boundary_components();
  void build_region_cuts();
  int cell_index(int cx, int cy) const;
  FaceId region_of_cell(int cx, int cy) const;  // Outer/Bottom/Top for off-grid
  int horizontal_anchor_x(const Edge& e) const;

  Topology topology_ = Topology::PlanarRectangle;
  CylinderStyle style_ = CylinderStyle::DD;
  int width_ = 0;  // grid width (2k on cylinders)
  int rows_ = 0;
  int y_min_ = 0;
  int cut_column_ = -1;

  std::vector<VertexId> vertices_;
  std::vector<VertexId> removed_;
  std::vector<HoleRect> holes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> incident_edge_ids_;
  int black_count_ = 0;
  int white_count_ = 0;

  std::vector<Edge> cut_edges_;
  std::vector<std::vector<Edge>> hole_cuts_;
  // Per region cut curve: the horizontal row it runs along and the exclusive
  // upper bound on dual-edge anchor columns it crosses.
  std::vector<std::pair<int, int>> region_cut_geometry_;

  std::vector<FaceId> faces_;
  std::map<FaceId, int> face_lookup_;
  int unit_face_count_ = 0;
  std::vector<DualEdge> canonical_duals_;  // one per edge, sign = +1
  std::vector<std::vector<DualEdge>> dual_stars_;
  std::vector<std::vector<VertexId>> boundary_components_;

  std::vector<int> vertex_grid_;   // (x, y - y_min) -> vertex index or -1
  std::vector<FaceId> cell_face_;  // unit cell -> owning face
  int grid_w_ = 0, grid_h_ = 0;
  int cells_w_ = 0, cells_h_ = 0;
};

// cols x rows grid with nearest-neighbor edges. cols*rows must be even.
DimerGraph build_rectangle(int cols, int rows);

// Periodic cylinder with x in Z/2kZ. DD keeps vertex rows 0..2*floor(k*tau/2),
// ND drops row 0. Cut curve at the seam column by default.
DimerGraph build_cylinder(int k, double tau, CylinderStyle style, int cut_column = -1);

// Grid minus hole interiors; holes must be disjoint and strictly interior.
DimerGraph build_multiholed(int cols, int rows, const std::vector<HoleRect>& holes);

DimerGraph puncture(const DimerGraph& g, const std::vector<VertexId>& victims);

}  // namespace dimercff
