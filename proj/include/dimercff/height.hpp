#pragma once

// Height functions on faces, cylinder instanton numbers (boundary gap and
// winding), and determinant evaluation of centered height-increment moments
// through the inverse Kasteleyn operator.

#include <map>
#include <vector>

#include "dimercff/kasteleyn.hpp"
#include "dimercff/lattice_graph.hpp"
#include "dimercff/matchings.hpp"

namespace dimercff {

// Global sign relating the determinant moment to the enumeration moment.
// Calibrated once against empirical_moment on the 2x4 rectangle and frozen;
// asserted on every instance by the test suite.
inline constexpr double kKenyonSign = 1.0;

// Height increment, in quarter units, across a dual edge: s * (1 - 4*[e in M]).
int height_increment_quarters(const DimerGraph& g, const DualEdge& d, const Matching& m);

inline double height_increment(const DimerGraph& g, const DualEdge& d, const Matching& m) {
  return height_increment_quarters(g, d, m) / 4.0;
}

// Heights on the cut-open dual graph, BFS-assigned from base_face (value 0).
// Values at reservoir faces depend on the spanning tree and are reported for
// reference only; unit-face increments are checked for path independence.
struct HeightField {
  const DimerGraph* graph = nullptr;
  FaceId base_face;
  std::map<FaceId, double> values;
  double value(FaceId f) const;
};

HeightField height_field(const DimerGraph& g, const Matching& m, FaceId base_face);

// Instanton data of a cylinder matching: total height increment along the
// fixed bottom-to-top dual path at the first column (gap) and along the
// fixed horizontal dual loop through the middle face row (winding).
struct InstantonNumbers {
  double gap = 0.0;
  double winding = 0.0;
  int gap_quarters = 0;      // exact, in quarter units
  int winding_quarters = 0;
};

InstantonNumbers instanton_number(const DimerGraph& g, const Matching& m);

// The canonical paths used above, exposed for homotopy tests.
std::vector<DualEdge> gap_path(const DimerGraph& g, int column = 0);
std::vector<DualEdge> winding_loop(const DimerGraph& g);

// A collection of vertex-disjoint primal edges with their crossing dual
// edges; the argument of the determinant moment.
struct KenyonMomentRequest {
  std::vector<DualEdge> dual_edges;
};

// Canonical request (sign +1 dual edges) from a list of primal edges.
KenyonMomentRequest canonical_request(const DimerGraph& g, const std::vector<Edge>& edges);

// sigma * prod_j s_j * det[1_{i != j} K^{-1}(b_i, w_j)] * prod_j K(w_j, b_j).
// Equals the centered moment prod_j s_j (1[e_j in M] - p_j) of the dimer
// measure; the imaginary part must vanish to 1e-9.
double kenyon_moment(const KasteleynSystem& ks, const KenyonMomentRequest& req);

// Multilinear expansion of the moment of products of height increments along
// dual paths: sum over one dual edge per path of kenyon_moment. Paths must
// cross pairwise vertex-disjoint primal edge sets.
double path_moment(const KasteleynSystem& ks, const std::vector<std::vector<DualEdge>>& paths);

}  // namespace dimercff
