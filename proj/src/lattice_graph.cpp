#include "dimercff/lattice_graph.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace dimercff {

namespace {

// Rotation order around every vertex: E, N, W, S (counterclockwise).
constexpr int kDirX[4] = {1, 0, -1, 0};
constexpr int kDirY[4] = {0, 1, 0, -1};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

Edge make_edge(VertexId a, VertexId b) {
  if (vertex_color(a) == Color::White) return Edge{a, b};
  return Edge{b, a};
}

}  // namespace

std::string to_string(FaceId f) {
  std::ostringstream os;
  switch (f.kind) {
    case FaceId::Kind::Unit: os << "face(" << f.x << "," << f.y << ")"; break;
    case FaceId::Kind::Outer: os << "outer"; break;
    case FaceId::Kind::Hole: os << "hole[" << f.index << "]"; break;
    case FaceId::Kind::Puncture: os << "puncture[" << f.index << "]"; break;
    case FaceId::Kind::Bottom: os << "bottom"; break;
    case FaceId::Kind::Top: os << "top"; break;
  }
  return os.str();
}

bool DimerGraph::has_vertex(VertexId v) const { return vertex_index(v) >= 0; }

int DimerGraph::vertex_index(VertexId v) const {
  int x = v.x, y = v.y - y_min_;
  if (topology_ == Topology::Cylinder) x = wrap_x(x);
  if (x < 0 || x >= grid_w_ || y < 0 || y >= grid_h_) return -1;
  return vertex_grid_[static_cast<size_t>(y) * grid_w_ + x];
}

int DimerGraph::wrap_x(int x) const {
  if (topology_ != Topology::Cylinder) return x;
  int m = x % width_;
  return m < 0 ? m + width_ : m;
}

bool DimerGraph::has_edge(VertexId a, VertexId b) const {
  int ia = vertex_index(a), ib = vertex_index(b);
  if (ia < 0 || ib < 0) return false;
  return edge_between(ia, ib) >= 0;
}

int DimerGraph::edge_between(int va, int vb) const {
  if (va < 0 || vb < 0) return -1;
  const auto& nb = adjacency_[va];
  for (size_t j = 0; j < nb.size(); ++j) {
    if (nb[j] == vb) return incident_edge_ids_[va][j];
  }
  return -1;
}

int DimerGraph::edge_index(const Edge& e) const {
  return edge_between(vertex_index(e.white), vertex_index(e.black));
}

bool DimerGraph::is_horizontal(const Edge& e) const { return e.white.y == e.black.y; }

bool DimerGraph::is_seam_edge(const Edge& e) const {
  if (topology_ != Topology::Cylinder || !is_horizontal(e)) return false;
  int lo = std::min(e.white.x, e.black.x), hi = std::max(e.white.x, e.black.x);
  return lo == 0 && hi == width_ - 1 && width_ > 2;
}

bool DimerGraph::crosses_cut(const DualEdge& d) const {
  if (topology_ != Topology::Cylinder) return false;
  if (is_horizontal(d.crossed)) return false;
  // The cut curve runs vertically between columns cut and cut+1; it is
  // crossed by dual edges whose primal edge is the vertical edge at the
  // column just right of the cut.
  return d.crossed.white.x == wrap_x(cut_column_ + 1);
}

int DimerGraph::cell_index(int cx, int cy) const {
  return cy * cells_w_ + cx;
}

FaceId DimerGraph::region_of_cell(int cx, int cy) const {
  if (topology_ == Topology::Cylinder) {
    if (cy < 0) return FaceId{FaceId::Kind::Bottom};
    if (cy >= cells_h_) return FaceId{FaceId::Kind::Top};
    return cell_face_[cell_index(wrap_x(cx), cy)];
  }
  if (cx < 0 || cx >= cells_w_ || cy < 0 || cy >= cells_h_) return FaceId{FaceId::Kind::Outer};
  return cell_face_[cell_index(cx, cy)];
}

int DimerGraph::face_index(FaceId f) const {
  auto it = face_lookup_.find(f);
  return it == face_lookup_.end() ? -1 : it->second;
}

const std::vector<DualEdge>& DimerGraph::dual_star(FaceId f) const {
  int idx = face_index(f);
  if (idx < 0) throw ConstructionError("dual_star: " + to_string(f) + " does not exist");
  return dual_stars_[idx];
}

DualEdge DimerGraph::dual_of(const Edge& e) const {
  int ei = edge_index(e);
  if (ei < 0) throw ConstructionError("dual_of: edge not in graph");
  return canonical_duals_[ei];
}

void DimerGraph::finalize() {
  grid_w_ = width_;
  grid_h_ = rows_;
  cells_w_ = (topology_ == Topology::Cylinder) ? width_ : width_ - 1;
  cells_h_ = rows_ - 1;

  // Vertex grid and color counts.
  vertex_grid_.assign(static_cast<size_t>(grid_w_) * grid_h_, -1);
  std::sort(vertices_.begin(), vertices_.end());
  black_count_ = white_count_ = 0;
  for (size_t i = 0; i < vertices_.size(); ++i) {
    const VertexId v = vertices_[i];
    vertex_grid_[static_cast<size_t>(v.y - y_min_) * grid_w_ + v.x] = static_cast<int>(i);
    (vertex_color(v) == Color::Black ? black_count_ : white_count_)++;
  }

  // Edges: nearest neighbors among present vertices, E then N per vertex.
  edges_.clear();
  adjacency_.assign(vertices_.size(), {});
  incident_edge_ids_.assign(vertices_.size(), {});
  for (size_t i = 0; i < vertices_.size(); ++i) {
    const VertexId v = vertices_[i];
    for (int step : {0, 1}) {  // E, N
      VertexId w{v.x + kDirX[step], v.y + kDirY[step]};
      if (topology_ == Topology::Cylinder) w.x = wrap_x(w.x);
      if (step == 0 && topology_ != Topology::Cylinder && w.x >= width_) continue;
      if (topology_ == Topology::Cylinder && width_ == 1 && step == 0) continue;
      int j = vertex_index(w);
      if (j < 0) continue;
      edges_.push_back(make_edge(v, w));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (size_t ei = 0; ei < edges_.size(); ++ei) {
    int iw = vertex_index(edges_[ei].white);
    int ib = vertex_index(edges_[ei].black);
    adjacency_[iw].push_back(ib);
    incident_edge_ids_[iw].push_back(static_cast<int>(ei));
    adjacency_[ib].push_back(iw);
    incident_edge_ids_[ib].push_back(static_cast<int>(ei));
  }
  // Re-sort each adjacency into E,N,W,S rotation order.
  for (size_t i = 0; i < vertices_.size(); ++i) {
    const VertexId v = vertices_[i];
    std::vector<int> nb, eid;
    for (int d = 0; d < 4; ++d) {
      VertexId w{v.x + kDirX[d], v.y + kDirY[d]};
      if (topology_ == Topology::Cylinder) w.x = wrap_x(w.x);
      int j = vertex_index(w);
      if (j < 0) continue;
      int e = -1;
      for (size_t t = 0; t < adjacency_[i].size(); ++t) {
        if (adjacency_[i][t] == j) { e = incident_edge_ids_[i][t]; break; }
      }
      if (e < 0) continue;
      nb.push_back(j);
      eid.push_back(e);
    }
    adjacency_[i] = std::move(nb);
    incident_edge_ids_[i] = std::move(eid);
  }

  // Monodromy cut (cylinders): horizontal edges joining column cut to cut+1.
  cut_edges_.clear();
  if (topology_ == Topology::Cylinder) {
    if (cut_column_ < 0) cut_column_ = width_ - 1;
    cut_column_ = wrap_x(cut_column_);
    for (const Edge& e : edges_) {
      if (!is_horizontal(e)) continue;
      int xa = e.white.x, xb = e.black.x;
      int lo = std::min(xa, xb), hi = std::max(xa, xb);
      bool seam_pair = (lo == 0 && hi == width_ - 1);
      int anchor = seam_pair ? width_ - 1 : lo;
      if (anchor == cut_column_) cut_edges_.push_back(e);
    }
  }

  build_faces();
  build_duals();
  build_boundary_components();
  build_region_cuts();
}

// Faces are discovered by merging unit cells across missing primal edges;
// cells merged with the off-grid side become the outer (or bottom/top)
// reservoir region.
void DimerGraph::build_faces() {
  const int n_cells = cells_w_ * cells_h_;
  const int kOuterNode = n_cells;      // planar outer, or cylinder bottom
  const int kTopNode = n_cells + 1;    // cylinder top
  UnionFind uf(n_cells + 2);

  auto vertical_edge_present = [&](int x, int y) {
    return has_edge(VertexId{x, y}, VertexId{x, y + 1});
  };
  auto horizontal_edge_present = [&](int x, int y) {
    int x2 = (topology_ == Topology::Cylinder) ? wrap_x(x + 1) : x + 1;
    return has_edge(VertexId{x, y}, VertexId{x2, y});
  };

  for (int cy = 0; cy < cells_h_; ++cy) {
    for (int cx = 0; cx < cells_w_; ++cx) {
      const int c = cell_index(cx, cy);
      const int vx = cx, vy = cy + y_min_;
      // Right neighbor across the vertical edge at column cx+1.
      {
        bool has_right_cell = (topology_ == Topology::Cylinder) || (cx + 1 < cells_w_);
        int rx = (topology_ == Topology::Cylinder) ? wrap_x(cx + 1) : cx + 1;
        if (!vertical_edge_present(topology_ == Topology::Cylinder ? wrap_x(vx + 1) : vx + 1, vy)) {
          if (has_right_cell) uf.unite(c, cell_index(rx, cy));
          else uf.unite(c, kOuterNode);
        }
      }
      // Left side of the leftmost planar column.
      if (topology_ != Topology::Cylinder && cx == 0 && !vertical_edge_present(0, vy))
        uf.unite(c, kOuterNode);
      // Upper neighbor across the horizontal edge at row cy+1.
      {
        if (!horizontal_edge_present(vx, vy + 1)) {
          if (cy + 1 < cells_h_) uf.unite(c, cell_index(cx, cy + 1));
          else uf.unite(c, topology_ == Topology::Cylinder ? kTopNode : kOuterNode);
        }
      }
      // Lower side of the bottom row.
      if (cy == 0 && !horizontal_edge_present(vx, vy))
        uf.unite(c, topology_ == Topology::Cylinder ? kOuterNode : kOuterNode);
    }
  }
  // Cylinder reservoirs always exist even when no edge is missing.
  // (For planar graphs the outer region exists likewise.)

  faces_.clear();
  face_lookup_.clear();
  cell_face_.assign(n_cells, FaceId{});
  unit_face_count_ = 0;

  const int outer_root = uf.find(kOuterNode);
  const int top_root = (topology_ == Topology::Cylinder) ? uf.find(kTopNode) : -1;

  // Hole representative cells.
  std::map<int, int> root_to_hole;
  for (size_t h = 0; h < holes_.size(); ++h) {
    int cx = holes_[h].x0, cy = holes_[h].y0 - y_min_;
    if (cx >= 0 && cx < cells_w_ && cy >= 0 && cy < cells_h_) {
      int r = uf.find(cell_index(cx, cy));
      if (r != outer_root && r != top_root && !root_to_hole.count(r))
        root_to_hole[r] = static_cast<int>(h);
    }
  }

  std::map<int, FaceId> root_face;
  int puncture_ordinal = 0;
  auto classify_root = [&](int root, int cx, int cy) -> FaceId {
    if (root == outer_root)
      return topology_ == Topology::Cylinder ? FaceId{FaceId::Kind::Bottom}
                                             : FaceId{FaceId::Kind::Outer};
    if (root == top_root) return FaceId{FaceId::Kind::Top};
    auto it = root_to_hole.find(root);
    if (it != root_to_hole.end())
      return FaceId{FaceId::Kind::Hole, 0, 0, it->second};
    // Single complete cell: ordinary unit face.
    if (root == cell_index(cx, cy)) {
      // Verified below: a cell is its own root with no merges iff complete.
    }
    return FaceId{FaceId::Kind::Puncture, 0, 0, puncture_ordinal++};
  };

  // First pass: decide each cell's region id, scanning in deterministic order.
  for (int cy = 0; cy < cells_h_; ++cy) {
    for (int cx = 0; cx < cells_w_; ++cx) {
      const int c = cell_index(cx, cy);
      const int root = uf.find(c);
      auto it = root_face.find(root);
      if (it != root_face.end()) {
        cell_face_[c] = it->second;
        continue;
      }
      FaceId f;
      bool complete =
          root == c && [&] {
            // No merge touched this cell: all four corners present.
            for (int dx : {0, 1})
              for (int dy : {0, 1})
                if (!has_vertex(VertexId{topology_ == Topology::Cylinder ? wrap_x(cx + dx) : cx + dx,
                                         cy + dy + y_min_}))
                  return false;
            return true;
          }();
      // A complete singleton cell may still be the root of a larger class;
      // check that nothing else maps to the same root lazily: treat as unit
      // only if the class is exactly this cell.
      if (complete) {
        bool alone = true;
        // Cheap scan of the 4 cell neighbors; merges only happen between
        // adjacent cells, so a non-singleton class has an adjacent member.
        const int nx[4] = {cx + 1, cx - 1, cx, cx};
        const int ny[4] = {cy, cy, cy + 1, cy - 1};
        for (int t = 0; t < 4; ++t) {
          int ax = nx[t], ay = ny[t];
          if (topology_ == Topology::Cylinder) ax = wrap_x(ax);
          if (ax < 0 || ax >= cells_w_ || ay < 0 || ay >= cells_h_) continue;
          if (uf.find(cell_index(ax, ay)) == root && cell_index(ax, ay) != c) alone = false;
        }
        if (alone) {
          f = FaceId{FaceId::Kind::Unit, cx, cy + y_min_, 0};
          ++unit_face_count_;
        } else {
          f = classify_root(root, cx, cy);
        }
      } else {
        f = classify_root(root, cx, cy);
      }
      root_face[root] = f;
      cell_face_[c] = f;
    }
  }

  // Assemble the face list: unit faces in scan order, then reserved faces.
  for (int cy = 0; cy < cells_h_; ++cy)
    for (int cx = 0; cx < cells_w_; ++cx) {
      FaceId f = cell_face_[cell_index(cx, cy)];
      if (f.kind == FaceId::Kind::Unit && f.x == cx && f.y == cy + y_min_)
        faces_.push_back(f);
    }
  if (topology_ == Topology::Cylinder) {
    faces_.push_back(FaceId{FaceId::Kind::Bottom});
    faces_.push_back(FaceId{FaceId::Kind::Top});
  } else {
    faces_.push_back(FaceId{FaceId::Kind::Outer});
  }
  std::vector<FaceId> extra;
  for (const auto& [root, f] : root_face)
    if (f.kind == FaceId::Kind::Hole || f.kind == FaceId::Kind::Puncture) extra.push_back(f);
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  for (FaceId f : extra) faces_.push_back(f);

  for (size_t i = 0; i < faces_.size(); ++i) face_lookup_[faces_[i]] = static_cast<int>(i);
}

// For a horizontal edge, the anchor is the endpoint whose x+1 (mod period)
// is the other endpoint's x.
int DimerGraph::horizontal_anchor_x(const Edge& e) const {
  int xa = e.white.x, xb = e.black.x;
  if (topology_ == Topology::Cylinder) {
    int lo = std::min(xa, xb), hi = std::max(xa, xb);
    if (lo == 0 && hi == width_ - 1 && width_ > 2) return width_ - 1;
  }
  return std::min(xa, xb);
}

void DimerGraph::build_duals() {
  canonical_duals_.clear();
  canonical_duals_.reserve(edges_.size());
  dual_stars_.assign(faces_.size(), {});

  for (const Edge& e : edges_) {
    FaceId fa, fb;
    int sign_a_to_b;  // sign with orientation A -> B
    if (is_horizontal(e)) {
      const int ax = horizontal_anchor_x(e);
      const int y = e.white.y;
      fa = region_of_cell(ax, y - y_min_ - 1);  // below
      fb = region_of_cell(ax, y - y_min_);      // above
      // Traversing below -> above (+y), left is -x: the anchor endpoint.
      const bool anchor_is_white = (e.white.x == ax);
      sign_a_to_b = anchor_is_white ? 1 : -1;
    } else {
      const int x = e.white.x;
      const int y = std::min(e.white.y, e.black.y);
      int left_cx = x - 1;
      if (topology_ == Topology::Cylinder) left_cx = wrap_x(left_cx);
      fa = region_of_cell(left_cx, y - y_min_);  // left
      fb = region_of_cell(x, y - y_min_);        // right
      // Traversing left -> right (+x), left is +y: the upper endpoint.
      const bool upper_is_white = (e.white.y > e.black.y);
      sign_a_to_b = upper_is_white ? 1 : -1;
    }
    DualEdge d = (sign_a_to_b > 0) ? DualEdge{fa, fb, e, 1} : DualEdge{fb, fa, e, 1};
    canonical_duals_.push_back(d);
    int ia = face_index(d.from), ib = face_index(d.to);
    if (ia >= 0) dual_stars_[ia].push_back(d);
    if (ib >= 0) dual_stars_[ib].push_back(reversed(d));
  }
}

// Boundary cycles by rotation-system face traversal. The face to the left
// of a directed edge is followed counterclockwise; reservoir faces come out
// as their boundary walks.
void DimerGraph::build_boundary_components() {
  boundary_components_.clear();

  auto neighbor_dir = [&](int vi, int vj) {
    const VertexId a = vertices_[vi], b = vertices_[vj];
    for (int d = 0; d < 4; ++d) {
      int x = a.x + kDirX[d];
      if (topology_ == Topology::Cylinder) x = wrap_x(x);
      if (x == b.x && a.y + kDirY[d] == b.y) return d;
    }
    return -1;
  };
  auto next_in_face = [&](int ui, int vi) -> std::pair<int, int> {
    int back = neighbor_dir(vi, ui);
    for (int step = 1; step <= 4; ++step) {
      int d = ((back - step) % 4 + 4) % 4;  // clockwise scan
      int x = vertices_[vi].x + kDirX[d];
      if (topology_ == Topology::Cylinder) x = wrap_x(x);
      int w = vertex_index(VertexId{x, vertices_[vi].y + kDirY[d]});
      if (w >= 0) return {vi, w};
    }
    return {vi, ui};  // degree-1 vertex: bounce back
  };
  // A directed primal edge with face f on its left, derived from a dual edge
  // leaving f: rotate the crossing direction by +90 degrees.
  auto directed_edge_with_face_left = [&](const DualEdge& d) -> std::pair<int, int> {
    const Edge& e = d.crossed;
    if (is_horizontal(e)) {
      // Crossing direction +y if leaving the below-face.  v - u = (-1, 0)
      // puts the below-face on the left; (+1, 0) the above-face.
      const int ax = horizontal_anchor_x(e);
      VertexId anchor = (e.white.x == ax) ? e.white : e.black;
      VertexId other = (e.white.x == ax) ? e.black : e.white;
      const bool from_is_below = region_of_cell(ax, e.white.y - y_min_ - 1) == d.from;
      if (from_is_below) return {vertex_index(other), vertex_index(anchor)};
      return {vertex_index(anchor), vertex_index(other)};
    }
    // Vertical edge: crossing +x if leaving the left face. v - u = (0, 1)
    // puts the left face on the left; (0, -1) the right face.
    VertexId lower = (e.white.y < e.black.y) ? e.white : e.black;
    VertexId upper = (e.white.y < e.black.y) ? e.black : e.white;
    int left_cx = e.white.x - 1;
    if (topology_ == Topology::Cylinder) left_cx = wrap_x(left_cx);
    const bool from_is_left = region_of_cell(left_cx, lower.y - y_min_) == d.from;
    if (from_is_left) return {vertex_index(lower), vertex_index(upper)};
    return {vertex_index(upper), vertex_index(lower)};
  };

  std::vector<FaceId> reservoirs;
  if (topology_ == Topology::Cylinder) {
    reservoirs.push_back(FaceId{FaceId::Kind::Bottom});
    reservoirs.push_back(FaceId{FaceId::Kind::Top});
  } else {
    reservoirs.push_back(FaceId{FaceId::Kind::Outer});
  }
  for (FaceId f : faces_) {
    if (f.kind == FaceId::Kind::Hole || f.kind == FaceId::Kind::Puncture) reservoirs.push_back(f);
  }
  // Outer first, then holes, then punctures; cylinder: bottom then top.
  std::stable_sort(reservoirs.begin(), reservoirs.end(), [](FaceId a, FaceId b) {
    auto rank = [](FaceId f) {
      switch (f.kind) {
        case FaceId::Kind::Outer:
        case FaceId::Kind::Bottom: return 0;
        case FaceId::Kind::Top: return 1;
        case FaceId::Kind::Hole: return 2;
        default: return 3;
      }
    };
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    return a.index < b.index;
  });

  for (FaceId f : reservoirs) {
    const auto& star = dual_star(f);
    if (star.empty()) continue;
    auto [u0, v0] = directed_edge_with_face_left(star.front());
    if (u0 < 0 || v0 < 0) continue;
    std::vector<VertexId> cycle;
    int u = u0, v = v0;
    do {
      cycle.push_back(vertices_[u]);
      std::tie(u, v) = next_in_face(u, v);
    } while (!(u == u0 && v == v0) && cycle.size() <= 4 * edges_.size());
    // Rotate so the cycle starts at its smallest vertex.
    auto it = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), it, cycle.end());
    boundary_components_.push_back(std::move(cycle));
  }
}

bool DimerGraph::crosses_any_cut(const DualEdge& d) const {
  if (crosses_cut(d)) return true;
  if (region_cut_geometry_.empty() || !is_horizontal(d.crossed)) return false;
  const int row = d.crossed.white.y;
  const int ax = horizontal_anchor_x(d.crossed);
  for (const auto& [cut_row, entry_x] : region_cut_geometry_)
    if (row == cut_row && ax < entry_x) return true;
  return false;
}

// Straight cut curves from each hole / interior puncture region to the outer
// boundary, used by the Kasteleyn module for per-region monodromies.
void DimerGraph::build_region_cuts() {
  hole_cuts_.clear();
  region_cut_geometry_.clear();
  if (topology_ == Topology::Cylinder) return;
  std::vector<FaceId> regions;
  for (FaceId f : faces_)
    if (f.kind == FaceId::Kind::Hole || f.kind == FaceId::Kind::Puncture) regions.push_back(f);
  std::sort(regions.begin(), regions.end(), [](FaceId a, FaceId b) {
    if (a.kind != b.kind) return a.kind == FaceId::Kind::Hole;
    return a.index < b.index;
  });
  for (FaceId f : regions) {
    // Leftmost cell of the region in its lowest row.
    int rep_cx = -1, rep_cy = -1;
    for (int cy = 0; cy < cells_h_ && rep_cx < 0; ++cy)
      for (int cx = 0; cx < cells_w_; ++cx)
        if (cell_face_[cell_index(cx, cy)] == f) { rep_cx = cx; rep_cy = cy; break; }
    std::vector<Edge> cut;
    if (rep_cx >= 0) {
      // Walk left from the region just below height rep_cy + 1/2, crossing
      // existing vertical edges until the outer boundary.
      for (int x = rep_cx; x >= 0; --x) {
        VertexId a{x, rep_cy + y_min_}, b{x, rep_cy + y_min_ + 1};
        if (has_edge(a, b)) cut.push_back(make_edge(a, b));
      }
      region_cut_geometry_.emplace_back(rep_cy + y_min_, rep_cx);
    } else {
      region_cut_geometry_.emplace_back(INT_MIN, INT_MIN);
    }
    hole_cuts_.push_back(std::move(cut));
  }
}

std::vector<DualEdge> DimerGraph::dual_path(FaceId from, FaceId to,
                                            const std::vector<FaceId>& waypoints) const {
  std::vector<FaceId> stops;
  stops.push_back(from);
  for (FaceId w : waypoints) stops.push_back(w);
  stops.push_back(to);
  for (FaceId f : stops)
    if (face_index(f) < 0) throw ConstructionError("dual_path: " + to_string(f) + " does not exist");

  std::vector<DualEdge> path;
  std::vector<char> used(faces_.size(), 0);
  used[face_index(from)] = 1;
  for (size_t leg = 0; leg + 1 < stops.size(); ++leg) {
    const int src = face_index(stops[leg]);
    const int dst = face_index(stops[leg + 1]);
    if (src == dst) continue;
    // BFS avoiding faces already on the path.
    std::vector<int> prev(faces_.size(), -1);
    std::vector<DualEdge> via(faces_.size());
    std::queue<int> q;
    q.push(src);
    std::vector<char> seen(faces_.size(), 0);
    seen[src] = 1;
    bool found = false;
    while (!q.empty() && !found) {
      int cur = q.front();
      q.pop();
      for (const DualEdge& d : dual_stars_[cur]) {
        int nxt = face_index(d.to);
        if (nxt < 0 || seen[nxt] || (used[nxt] && nxt != dst)) continue;
        seen[nxt] = 1;
        prev[nxt] = cur;
        via[nxt] = d;
        if (nxt == dst) { found = true; break; }
        q.push(nxt);
      }
    }
    if (!found) throw ConstructionError("dual_path: faces not connected in dual graph");
    std::vector<DualEdge> leg_path;
    for (int cur = dst; cur != src; cur = prev[cur]) leg_path.push_back(via[cur]);
    std::reverse(leg_path.begin(), leg_path.end());
    for (const DualEdge& d : leg_path) {
      used[face_index(d.to)] = 1;
      path.push_back(d);
    }
  }
  return path;
}

DimerGraph DimerGraph::with_cut_at(int column) const {
  if (topology_ != Topology::Cylinder)
    throw ConstructionError("with_cut_at: only cylinders carry a cut");
  DimerGraph g = *this;
  g.cut_column_ = g.wrap_x(column);
  g.cut_edges_.clear();
  for (const Edge& e : g.edges_) {
    if (!g.is_horizontal(e)) continue;
    int lo = std::min(e.white.x, e.black.x), hi = std::max(e.white.x, e.black.x);
    bool seam_pair = (lo == 0 && hi == g.width_ - 1);
    int anchor = seam_pair ? g.width_ - 1 : lo;
    if (anchor == g.cut_column_) g.cut_edges_.push_back(e);
  }
  return g;
}

DimerGraph build_rectangle(int cols, int rows) {
  if (cols < 1 || rows < 1) throw ConstructionError("build_rectangle: cols, rows must be >= 1");
  if ((static_cast<long long>(cols) * rows) % 2 != 0)
    throw UnmatchableGraphError("build_rectangle: odd vertex count " +
                                std::to_string(cols * rows));
  DimerGraph g;
  g.topology_ = Topology::PlanarRectangle;
  g.width_ = cols;
  g.rows_ = rows;
  g.y_min_ = 0;
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) g.vertices_.push_back(VertexId{x, y});
  g.finalize();
  return g;
}

DimerGraph build_cylinder(int k, double tau, CylinderStyle style, int cut_column) {
  if (k < 2) throw ConstructionError("build_cylinder: k must be >= 2");
  if (!(tau > 0)) throw ConstructionError("build_cylinder: tau must be positive");
  const int y_top = 2 * static_cast<int>(std::floor(k * tau / 2.0 + 1e-12));
  if (y_top < 2)
    throw ConstructionError("build_cylinder: degenerate height range, 2*floor(k*tau/2) = " +
                            std::to_string(y_top));
  DimerGraph g;
  g.topology_ = Topology::Cylinder;
  g.style_ = style;
  g.width_ = 2 * k;
  g.y_min_ = (style == CylinderStyle::DD) ? 0 : 1;
  g.rows_ = y_top - g.y_min_ + 1;
  g.cut_column_ = cut_column;
  for (int y = g.y_min_; y <= y_top; ++y)
    for (int x = 0; x < g.width_; ++x) g.vertices_.push_back(VertexId{x, y});
  g.finalize();
  return g;
}

DimerGraph build_multiholed(int cols, int rows, const std::vector<HoleRect>& holes) {
  if (cols < 1 || rows < 1) throw ConstructionError("build_multiholed: cols, rows must be >= 1");
  for (const HoleRect& h : holes) {
    if (h.w < 1 || h.h < 1) throw ConstructionError("build_multiholed: empty hole");
    if (h.x0 < 1 || h.y0 < 1 || h.x0 + h.w > cols - 1 || h.y0 + h.h > rows - 1)
      throw ConstructionError("build_multiholed: hole touches or exceeds the boundary");
  }
  for (size_t i = 0; i < holes.size(); ++i)
    for (size_t j = i + 1; j < holes.size(); ++j) {
      const HoleRect &a = holes[i], &b = holes[j];
      bool overlap = a.x0 < b.x0 + b.w && b.x0 < a.x0 + a.w && a.y0 < b.y0 + b.h &&
                     b.y0 < a.y0 + a.h;
      if (overlap) throw ConstructionError("build_multiholed: overlapping holes");
    }
  DimerGraph g;
  g.topology_ = Topology::PlanarMultiholed;
  g.width_ = cols;
  g.rows_ = rows;
  g.y_min_ = 0;
  g.holes_ = holes;
  auto in_hole = [&](int x, int y) {
    for (const HoleRect& h : holes)
      if (x >= h.x0 && x < h.x0 + h.w && y >= h.y0 && y < h.y0 + h.h) return true;
    return false;
  };
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      if (in_hole(x, y)) g.removed_.push_back(VertexId{x, y});
      else g.vertices_.push_back(VertexId{x, y});
    }
  g.finalize();
  return g;
}

DimerGraph puncture(const DimerGraph& g, const std::vector<VertexId>& victims) {
  int removed_black = 0, removed_white = 0;
  for (VertexId v : victims) {
    if (!g.has_vertex(v))
      throw ConstructionError("puncture: vertex (" + std::to_string(v.x) + "," +
                              std::to_string(v.y) + ") not in graph");
    (vertex_color(v) == Color::Black ? removed_black : removed_white)++;
  }
  if (g.black_count() - removed_black != g.white_count() - removed_white)
    throw UnmatchableGraphError("puncture: color imbalance after removal");
  DimerGraph out;
  out.topology_ = g.topology_;
  out.style_ = g.style_;
  out.width_ = g.width_;
  out.rows_ = g.rows_;
  out.y_min_ = g.y_min_;
  out.cut_column_ = g.cut_column_;
  out.holes_ = g.holes_;
  out.removed_ = g.removed_;
  auto is_victim = [&](VertexId v) {
    return std::find(victims.begin(), victims.end(), v) != victims.end();
  };
  for (VertexId v : g.vertices()) {
    if (is_victim(v)) out.removed_.push_back(v);
    else out.vertices_.push_back(v);
  }
  std::sort(out.removed_.begin(), out.removed_.end());
  out.removed_.erase(std::unique(out.removed_.begin(), out.removed_.end()), out.removed_.end());
  out.finalize();
  return out;
}

}  // namespace dimercff
