#pragma once

// Kasteleyn operator of a dimer graph: unit-modulus edge weights (horizontal
// 1, vertical i) with optional monodromy twists on cut-crossing edges, the
// white x black matrix, its LU factorization, determinant in log/phase form,
// inverse entries and local edge statistics.
//
// Factorization and inverse columns are cached lazily; a KasteleynSystem is
// single-writer. After prefactor() all queries are safe concurrently.
// Independent systems parallelize freely.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "dimercff/lattice_graph.hpp"

namespace dimercff {

using Complex = std::complex<double>;

// Unit-modulus characters twisting the weights: one for the cylinder's
// non-contractible cycle, one per hole/puncture cut curve (in the order of
// DimerGraph::hole_cut_edges()). Missing entries default to 1.
struct Monodromy {
  Complex around_cylinder{1.0, 0.0};
  std::vector<Complex> around_regions;
};

class KasteleynSystem {
 public:
  // Standard weights (horizontal 1, vertical i), cut edges multiplied by the
  // monodromy characters, everything by the global phase.
  static KasteleynSystem assemble(const DimerGraph& g, const Monodromy& mono = {},
                                  Complex global_phase = Complex{1.0, 0.0});
  // Arbitrary unit-modulus weights, one per graph edge. Gauge hooks for tests.
  static KasteleynSystem assemble_from_weights(const DimerGraph& g,
                                               std::vector<Complex> weights);

  const DimerGraph& graph() const { return *graph_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  Complex weight(const Edge& e) const;         // 0 for non-edges
  Complex weight_by_index(int edge_id) const { return weights_[edge_id]; }

  int white_ordinal(VertexId w) const;  // row index
  int black_ordinal(VertexId b) const;  // column index
  VertexId white_of_row(int row) const { return whites_[row]; }
  VertexId black_of_col(int col) const { return blacks_[col]; }

  void prefactor() const;
  bool singular() const;

  // det K as log|det| and a unit phase; |det| overflows to inf only on
  // graphs far beyond the enumeration scale.
  double log_abs_det() const;
  Complex det_phase() const;
  double abs_det() const;

  // K^{-1}(b, w): entry of the matrix inverse in row b, column w. One LU
  // solve per distinct w, cached.
  Complex inverse_entry(VertexId b, VertexId w) const;

  // K(w,b) K^{-1}(b,w); real in [0,1] up to 1e-9, clamped. Values beyond the
  // tolerance signal a weight/orientation bug and throw InconsistencyError.
  double edge_probability(const Edge& e) const;

 private:
  KasteleynSystem() = default;
  void build_matrix();

  const DimerGraph* graph_ = nullptr;
  std::vector<Complex> weights_;  // per edge index
  std::vector<VertexId> whites_, blacks_;
  std::map<VertexId, int> white_index_, black_index_;
  Eigen::MatrixXcd matrix_;

  mutable std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;
  mutable double log_abs_det_ = 0.0;
  mutable Complex det_phase_{1.0, 0.0};
  mutable bool det_ready_ = false;
  mutable std::map<int, Eigen::VectorXcd> inverse_columns_;
};

// |det K|; equals the number of perfect matchings on planar instances and on
// cylinders with monodromy -1 (verified against enumeration in the tests).
double partition_function(const KasteleynSystem& ks);

// The character that aligns all matching phases in det K under the standard
// weight gauge, measured against the enumeration oracle: straight cylinders
// of period 2k need (-1)^(k-1) around the cylinder (the gauge itself carries
// a winding factor (-1)^(k-1)); plain planar domains need no twist. Twists
// for punctured multi-holed domains are instance-specific and must be
// verified per instance.
Monodromy counting_monodromy(const DimerGraph& g);

}  // namespace dimercff
