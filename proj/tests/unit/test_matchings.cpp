#include "doctest.h"

#include <cmath>
#include <map>

#include "dimercff/matchings.hpp"

using namespace dimercff;

TEST_CASE("small rectangle counts") {
  CHECK(enumerate_matchings(build_rectangle(2, 2)).size() == 2);
  CHECK(enumerate_matchings(build_rectangle(4, 4)).size() == 36);
  CHECK(enumerate_matchings(build_rectangle(6, 6)).size() == 6728);
}

TEST_CASE("2xn strips follow the Fibonacci-style recurrence") {
  std::vector<std::uint64_t> c;
  for (int n = 1; n <= 10; ++n) c.push_back(for_each_matching(build_rectangle(n, 2), [](const Matching&) {}));
  CHECK(c[0] == 1);
  CHECK(c[1] == 2);
  for (size_t n = 2; n < c.size(); ++n) CHECK(c[n] == c[n - 1] + c[n - 2]);
}

TEST_CASE("profile count agrees with enumeration") {
  for (const DimerGraph& g :
       {build_rectangle(4, 4), build_rectangle(5, 4), build_rectangle(6, 6),
        build_multiholed(6, 6, {HoleRect{2, 2, 2, 2}}),
        puncture(build_rectangle(4, 4), {VertexId{0, 0}, VertexId{1, 0}})}) {
    CHECK(count_matchings(g) == enumerate_matchings(g).size());
  }
  CHECK_THROWS_AS(count_matchings(build_cylinder(2, 1.0, CylinderStyle::DD)), ConstructionError);
}

TEST_CASE("forced-edge counts") {
  const DimerGraph g = build_rectangle(2, 4);
  const std::uint64_t z = count_matchings(g);
  // Total of single-edge counts equals (vertices/2) * Z: every matching uses
  // exactly 4 edges.
  std::uint64_t total = 0;
  for (const Edge& e : g.edges()) total += count_matchings_containing(g, {e});
  CHECK(total == z * 4);
}

TEST_CASE("enumeration limit raises with partial count") {
  try {
    enumerate_matchings(build_rectangle(4, 4), 10);
    FAIL("expected EnumerationLimitError");
  } catch (const EnumerationLimitError& e) {
    CHECK(e.count_so_far == 10);
  }
}

TEST_CASE("empirical moments") {
  const DimerGraph g = build_rectangle(2, 4);
  const auto all = enumerate_matchings(g);

  SUBCASE("single edge is centered") {
    for (const Edge& e : g.edges()) {
      const double m1 = empirical_moment(g, {g.dual_of(e)}, all);
      CHECK(std::abs(m1) < 1e-15);
    }
  }

  SUBCASE("sign convention and permutation symmetry") {
    const Edge e1 = g.edge(0);
    Edge e2;
    bool found = false;
    for (const Edge& e : g.edges()) {
      if (e.white != e1.white && e.black != e1.black && !(e == e1)) {
        e2 = e;
        found = true;
        break;
      }
    }
    REQUIRE(found);
    const DualEdge d1 = g.dual_of(e1), d2 = g.dual_of(e2);
    const double ab = empirical_moment(g, {d1, d2}, all);
    const double ba = empirical_moment(g, {d2, d1}, all);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    const double flipped = empirical_moment(g, {reversed(d1), d2}, all);
    CHECK(flipped == doctest::Approx(-ab).epsilon(1e-12));
  }

  SUBCASE("non-disjoint edges rejected") {
    const Edge e1 = g.edge(0);
    Edge shared;
    for (const Edge& e : g.edges())
      if (!(e == e1) && (e.white == e1.white || e.black == e1.black)) {
        shared = e;
        break;
      }
    CHECK_THROWS_AS(empirical_moment(g, {g.dual_of(e1), g.dual_of(shared)}, all),
                    ConstructionError);
  }
}

TEST_CASE("count-based moment equals enumeration moment") {
  const DimerGraph g = build_multiholed(6, 6, {HoleRect{2, 2, 2, 2}});
  const auto all = enumerate_matchings(g);
  // Two disjoint edges on opposite sides of the hole.
  const DualEdge d1 = g.dual_of(Edge{VertexId{0, 1}, VertexId{0, 0}});
  const DualEdge d2 = g.dual_of(Edge{VertexId{5, 4}, VertexId{5, 5}});
  CHECK(empirical_moment(g, {d1, d2}, all) ==
        doctest::Approx(moment_from_counts(g, {d1, d2})).epsilon(1e-12));
}

TEST_CASE("uniform sampling") {
  const DimerGraph g = build_rectangle(2, 2);
  CHECK(sample_uniform(g, 7, 0).empty());

  const auto a = sample_uniform(g, 12345, 50);
  const auto b = sample_uniform(g, 12345, 50);
  REQUIRE(a.size() == 50);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].edge_ids == b[i].edge_ids);

  // 2x2 has two matchings; frequencies stay within 3 sigma of 1/2.
  const int n = 4000;
  const auto s = sample_uniform(g, 99, n);
  std::map<std::vector<int>, int> freq;
  for (const Matching& m : s) freq[m.edge_ids]++;
  REQUIRE(freq.size() == 2);
  const double sigma = std::sqrt(0.25 * n);
  for (const auto& [ids, count] : freq) CHECK(std::abs(count - n / 2.0) < 3.0 * sigma);
}
