#include "dimercff/height.hpp"

#include <cmath>
#include <queue>

namespace dimercff {

int height_increment_quarters(const DimerGraph& g, const DualEdge& d, const Matching& m) {
  const int ei = g.edge_index(d.crossed);
  if (ei < 0) throw ConstructionError("height_increment: crossed edge not in graph");
  return d.sign * (1 - 4 * (m.contains(ei) ? 1 : 0));
}

double HeightField::value(FaceId f) const {
  auto it = values.find(f);
  if (it == values.end()) throw ConstructionError("height: no value for " + to_string(f));
  return it->second;
}

HeightField height_field(const DimerGraph& g, const Matching& m, FaceId base_face) {
  if (g.face_index(base_face) < 0)
    throw ConstructionError("height_field: base " + to_string(base_face) + " does not exist");

  // Quarter-unit heights over the cut-open dual graph. Reservoir faces are
  // leaves: heights along them form a boundary staircase, not a single
  // value, so the walk never continues through one.
  std::map<FaceId, int> q;
  q[base_face] = 0;
  std::queue<FaceId> bfs;
  if (base_face.kind == FaceId::Kind::Unit) {
    bfs.push(base_face);
  } else {
    // Reservoir base: enter the bounded faces through its first crossing.
    for (const DualEdge& d : g.dual_star(base_face)) {
      if (g.crosses_any_cut(d) || d.to.kind != FaceId::Kind::Unit) continue;
      q[d.to] = height_increment_quarters(g, d, m);
      bfs.push(d.to);
      break;
    }
  }
  while (!bfs.empty()) {
    FaceId cur = bfs.front();
    bfs.pop();
    for (const DualEdge& d : g.dual_star(cur)) {
      if (g.crosses_any_cut(d)) continue;
      if (q.count(d.to)) continue;
      q[d.to] = q.at(cur) + height_increment_quarters(g, d, m);
      if (d.to.kind == FaceId::Kind::Unit) bfs.push(d.to);
    }
  }

  // Path independence on bounded faces: every unit-to-unit dual edge off the
  // cuts must reproduce the BFS increments.
  for (const Edge& e : g.edges()) {
    const DualEdge d = g.dual_of(e);
    if (g.crosses_any_cut(d)) continue;
    if (d.from.kind != FaceId::Kind::Unit || d.to.kind != FaceId::Kind::Unit) continue;
    auto a = q.find(d.from), b = q.find(d.to);
    if (a == q.end() || b == q.end()) continue;
    if (b->second - a->second != height_increment_quarters(g, d, m))
      throw InconsistencyError("height_field: inconsistent increment around a plaquette at " +
                               to_string(d.from));
  }

  HeightField h;
  h.graph = &g;
  h.base_face = base_face;
  for (const auto& [f, quarters] : q) h.values[f] = quarters / 4.0;
  return h;
}

namespace {

DualEdge oriented_dual(const DimerGraph& g, const Edge& crossed, FaceId from) {
  DualEdge d = g.dual_of(crossed);
  if (d.from == from) return d;
  if (d.to == from) return reversed(d);
  throw ConstructionError("oriented_dual: face does not border the crossed edge");
}

}  // namespace

std::vector<DualEdge> gap_path(const DimerGraph& g, int column) {
  if (g.topology() != Topology::Cylinder)
    throw ConstructionError("gap_path: cylinder topology required");
  const int x = g.wrap_x(column);
  const int x1 = g.wrap_x(column + 1);
  std::vector<DualEdge> path;
  FaceId cur{FaceId::Kind::Bottom};
  for (int y = g.y_min(); y <= g.y_max(); ++y) {
    VertexId a{x, y}, b{x1, y};
    const Edge e = (vertex_color(a) == Color::White) ? Edge{a, b} : Edge{b, a};
    path.push_back(oriented_dual(g, e, cur));
    cur = path.back().to;
  }
  if (!(cur == FaceId{FaceId::Kind::Top}))
    throw ConstructionError("gap_path: path did not reach the top boundary face");
  return path;
}

std::vector<DualEdge> winding_loop(const DimerGraph& g) {
  if (g.topology() != Topology::Cylinder)
    throw ConstructionError("winding_loop: cylinder topology required");
  const int cy = g.y_min() + (g.rows() - 1) / 2;  // a middle face row
  std::vector<DualEdge> loop;
  FaceId cur{FaceId::Kind::Unit, 0, cy, 0};
  for (int x = 0; x < g.width_period(); ++x) {
    const int xr = g.wrap_x(x + 1);
    VertexId a{xr, cy}, b{xr, cy + 1};
    const Edge e = (vertex_color(a) == Color::White) ? Edge{a, b} : Edge{b, a};
    loop.push_back(oriented_dual(g, e, cur));
    cur = loop.back().to;
  }
  return loop;
}

InstantonNumbers instanton_number(const DimerGraph& g, const Matching& m) {
  if (g.topology() != Topology::Cylinder)
    throw ConstructionError("instanton_number: cylinder topology required");
  InstantonNumbers out;
  for (const DualEdge& d : gap_path(g)) out.gap_quarters += height_increment_quarters(g, d, m);
  for (const DualEdge& d : winding_loop(g))
    out.winding_quarters += height_increment_quarters(g, d, m);
  out.gap = out.gap_quarters / 4.0;
  out.winding = out.winding_quarters / 4.0;
  return out;
}

KenyonMomentRequest canonical_request(const DimerGraph& g, const std::vector<Edge>& edges) {
  KenyonMomentRequest req;
  for (const Edge& e : edges) req.dual_edges.push_back(g.dual_of(e));
  return req;
}

namespace {

void require_vertex_disjoint(const std::vector<DualEdge>& duals) {
  for (size_t i = 0; i < duals.size(); ++i)
    for (size_t j = i + 1; j < duals.size(); ++j) {
      const Edge &a = duals[i].crossed, &b = duals[j].crossed;
      if (a.white == b.white || a.black == b.black)
        throw ConstructionError("kenyon_moment: primal edges must be vertex-disjoint");
    }
}

}  // namespace

double kenyon_moment(const KasteleynSystem& ks, const KenyonMomentRequest& req) {
  require_vertex_disjoint(req.dual_edges);
  const int m = static_cast<int>(req.dual_edges.size());
  if (m == 0) return 1.0;
  const DimerGraph& g = ks.graph();

  Complex prefactor{kKenyonSign, 0.0};
  for (const DualEdge& d : req.dual_edges) {
    if (g.edge_index(d.crossed) < 0)
      throw ConstructionError("kenyon_moment: edge not in graph");
    prefactor *= static_cast<double>(d.sign) * ks.weight(d.crossed);
  }

  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      mat(i, j) = ks.inverse_entry(req.dual_edges[i].crossed.black,
                                   req.dual_edges[j].crossed.white);
    }
  const Complex value = prefactor * mat.determinant();
  if (std::abs(value.imag()) > 1e-9)
    throw InconsistencyError("kenyon_moment: imaginary part " + std::to_string(value.imag()));
  return value.real();
}

double path_moment(const KasteleynSystem& ks, const std::vector<std::vector<DualEdge>>& paths) {
  // Edges crossed by different paths must not share vertices.
  for (size_t p = 0; p < paths.size(); ++p)
    for (size_t r = p + 1; r < paths.size(); ++r)
      for (const DualEdge& a : paths[p])
        for (const DualEdge& b : paths[r])
          if (a.crossed.white == b.crossed.white || a.crossed.black == b.crossed.black)
            throw ConstructionError("path_moment: overlapping paths");

  const int m = static_cast<int>(paths.size());
  if (m == 0) return 1.0;
  for (const auto& p : paths)
    if (p.empty()) return 0.0;  // empty path contributes no increment

  std::vector<size_t> pick(m, 0);
  double acc = 0.0;
  while (true) {
    KenyonMomentRequest req;
    for (int j = 0; j < m; ++j) req.dual_edges.push_back(paths[j][pick[j]]);
    acc += kenyon_moment(ks, req);
    int j = 0;
    for (; j < m; ++j) {
      if (++pick[j] < paths[j].size()) break;
      pick[j] = 0;
    }
    if (j == m) break;
  }
  return acc;
}

}  // namespace dimercff
