#include "doctest.h"

#include <set>

#include "dimercff/lattice_graph.hpp"
#include "oracles.hpp"

using namespace dimercff;

TEST_CASE("rectangle basics") {
  const DimerGraph g = build_rectangle(2, 2);
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.black_count() == 2);
  CHECK(g.white_count() == 2);
  CHECK(g.boundary_components().size() == 1);

  const DimerGraph g44 = build_rectangle(4, 4);
  CHECK(g44.vertex_count() == 16);
  CHECK(g44.edge_count() == 24);  // 2*cols*rows - cols - rows

  CHECK_THROWS_AS(build_rectangle(3, 3), UnmatchableGraphError);
}

TEST_CASE("every edge joins opposite colors") {
  for (const DimerGraph& g :
       {build_rectangle(5, 4), build_cylinder(2, 1.0, CylinderStyle::DD),
        build_multiholed(10, 10, {HoleRect{4, 4, 2, 2}})}) {
    for (const Edge& e : g.edges()) {
      CHECK(vertex_color(e.white) == Color::White);
      CHECK(vertex_color(e.black) == Color::Black);
    }
  }
}

TEST_CASE("cylinder vertex ranges") {
  const DimerGraph dd = build_cylinder(2, 1.0, CylinderStyle::DD);
  CHECK(dd.vertex_count() == 12);
  CHECK(dd.y_min() == 0);
  CHECK(dd.y_max() == 2);
  CHECK(dd.balanced());

  const DimerGraph nd = build_cylinder(2, 1.0, CylinderStyle::ND);
  CHECK(nd.vertex_count() == 8);
  CHECK(nd.y_min() == 1);
  CHECK(nd.y_max() == 2);

  CHECK_THROWS_AS(build_cylinder(2, 0.4, CylinderStyle::DD), ConstructionError);
  CHECK_THROWS_AS(build_cylinder(1, 1.0, CylinderStyle::DD), ConstructionError);
}

TEST_CASE("cylinder cut: one crossing per winding loop") {
  const DimerGraph g = build_cylinder(2, 1.0, CylinderStyle::DD);
  CHECK(g.cut_edges().size() == 3);  // one horizontal seam edge per vertex row
  for (const Edge& e : g.cut_edges()) {
    CHECK(g.is_horizontal(e));
    CHECK(g.is_seam_edge(e));
  }
  // A horizontal dual loop at any face row crosses the cut curve exactly once.
  for (int cy = g.y_min(); cy < g.y_max(); ++cy) {
    int crossings = 0;
    for (int x = 0; x < g.width_period(); ++x) {
      FaceId from{FaceId::Kind::Unit, x, cy, 0};
      FaceId to{FaceId::Kind::Unit, g.wrap_x(x + 1), cy, 0};
      const auto leg = g.dual_path(from, to);
      REQUIRE(leg.size() == 1);
      if (g.crosses_cut(leg.front())) ++crossings;
    }
    CHECK(crossings == 1);
  }
}

TEST_CASE("multiholed construction and boundary components") {
  CHECK(build_multiholed(8, 8, {}).boundary_components().size() == 1);

  const DimerGraph one = build_multiholed(10, 10, {HoleRect{4, 4, 2, 2}});
  CHECK(one.vertex_count() == 96);
  CHECK(one.boundary_components().size() == 2);
  CHECK(one.balanced());

  const DimerGraph two = build_multiholed(10, 10, {HoleRect{2, 2, 2, 2}, HoleRect{6, 6, 2, 2}});
  CHECK(two.boundary_components().size() == 3);

  CHECK_THROWS_AS(build_multiholed(10, 10, {HoleRect{0, 4, 2, 2}}), ConstructionError);
  CHECK_THROWS_AS(build_multiholed(10, 10, {HoleRect{4, 4, 2, 2}, HoleRect{5, 5, 2, 2}}),
                  ConstructionError);
}

TEST_CASE("puncture") {
  const DimerGraph g = build_rectangle(4, 4);
  // One black + one white boundary vertex.
  const DimerGraph p = puncture(g, {VertexId{0, 0}, VertexId{1, 0}});
  CHECK(p.vertex_count() == 14);
  CHECK(p.balanced());

  CHECK_THROWS_AS(puncture(g, {VertexId{1, 0}}), UnmatchableGraphError);
  CHECK_THROWS_AS(puncture(g, {VertexId{9, 9}}), ConstructionError);

  SUBCASE("order independence") {
    const std::vector<VertexId> a{VertexId{0, 0}, VertexId{1, 0}};
    const std::vector<VertexId> b{VertexId{3, 3}, VertexId{2, 3}};
    std::vector<VertexId> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const DimerGraph g1 = puncture(puncture(g, a), b);
    const DimerGraph g2 = puncture(puncture(g, b), a);
    const DimerGraph g3 = puncture(g, both);
    CHECK(g1.vertices() == g3.vertices());
    CHECK(g2.vertices() == g3.vertices());
    CHECK(g1.edges() == g3.edges());
    CHECK(g1.faces() == g3.faces());
  }

  SUBCASE("boundary pattern of a punctured holed domain") {
    const DimerGraph holed = build_multiholed(10, 10, {HoleRect{4, 4, 2, 2}});
    // One outer black vertex and one white vertex on the hole boundary.
    REQUIRE(vertex_color(VertexId{0, 0}) == Color::Black);
    REQUIRE(vertex_color(VertexId{3, 4}) == Color::White);
    const DimerGraph hp = puncture(holed, {VertexId{0, 0}, VertexId{3, 4}});
    CHECK(hp.vertex_count() == 94);
    CHECK(hp.balanced());
    CHECK(hp.boundary_components().size() == 2);
  }
}

TEST_CASE("faces match the orbit-count oracle") {
  SUBCASE("rectangles") {
    for (auto [c, r] : {std::pair{2, 2}, {4, 4}, {5, 4}}) {
      const DimerGraph g = build_rectangle(c, r);
      CHECK(static_cast<int>(g.faces().size()) == oracles::count_faces_by_orbits(g));
      // Euler with the outer face counted.
      CHECK(g.vertex_count() - g.edge_count() + static_cast<int>(g.faces().size()) == 2);
    }
  }
  SUBCASE("multiholed and punctured") {
    const DimerGraph g = build_multiholed(10, 10, {HoleRect{4, 4, 2, 2}});
    CHECK(static_cast<int>(g.faces().size()) == oracles::count_faces_by_orbits(g));
    CHECK(g.vertex_count() - g.edge_count() + static_cast<int>(g.faces().size()) == 2);

    const DimerGraph p = puncture(g, {VertexId{0, 0}, VertexId{3, 4}});
    CHECK(static_cast<int>(p.faces().size()) == oracles::count_faces_by_orbits(p));
    CHECK(p.vertex_count() - p.edge_count() + static_cast<int>(p.faces().size()) == 2);
  }
  SUBCASE("cylinder: boundary faces counted once each gives 2, once total gives 1") {
    for (auto style : {CylinderStyle::DD, CylinderStyle::ND}) {
      const DimerGraph g = build_cylinder(3, 1.0, style);
      CHECK(static_cast<int>(g.faces().size()) == oracles::count_faces_by_orbits(g));
      CHECK(g.vertex_count() - g.edge_count() + static_cast<int>(g.faces().size()) == 2);
      CHECK(g.vertex_count() - g.edge_count() + (g.bounded_face_count() + 1) == 1);
    }
  }
}

TEST_CASE("dual_path") {
  const DimerGraph g = build_cylinder(2, 1.0, CylinderStyle::DD);
  const FaceId bottom{FaceId::Kind::Bottom};
  const FaceId top{FaceId::Kind::Top};

  CHECK(g.dual_path(bottom, bottom).empty());

  const FaceId f00{FaceId::Kind::Unit, 0, 0, 0};
  const FaceId f01{FaceId::Kind::Unit, 0, 1, 0};
  CHECK(g.dual_path(f00, f01).size() == 1);

  // Bottom to top along a face column: one crossing per vertex row.
  const auto path = g.dual_path(bottom, top, {f00, f01});
  CHECK(path.size() == 3);
  for (const DualEdge& d : path) CHECK(g.is_horizontal(d.crossed));

  CHECK_THROWS_AS(g.dual_path(bottom, FaceId{FaceId::Kind::Outer}), ConstructionError);
}

TEST_CASE("dual edge orientation convention") {
  const DimerGraph g = build_rectangle(2, 2);
  // Bottom edge (0,0)-(1,0): traversing inner face -> outer face goes south;
  // facing south the white endpoint (1,0) sits on the left.
  const Edge bottom{VertexId{1, 0}, VertexId{0, 0}};
  const DualEdge d = g.dual_of(bottom);
  CHECK(d.sign == 1);
  CHECK(d.from == FaceId{FaceId::Kind::Unit, 0, 0, 0});
  CHECK(d.to == FaceId{FaceId::Kind::Outer});
  CHECK(reversed(d).sign == -1);
}

TEST_CASE("boundary components are ordered outer first") {
  const DimerGraph g = build_multiholed(8, 8, {HoleRect{3, 3, 2, 2}});
  REQUIRE(g.boundary_components().size() == 2);
  // Outer cycle passes through the corner, hole cycle does not.
  const auto& outer = g.boundary_components()[0];
  CHECK(std::find(outer.begin(), outer.end(), VertexId{0, 0}) != outer.end());
  const auto& hole = g.boundary_components()[1];
  CHECK(std::find(hole.begin(), hole.end(), VertexId{0, 0}) == hole.end());
  CHECK(std::find(hole.begin(), hole.end(), VertexId{2, 3}) != hole.end());
}
