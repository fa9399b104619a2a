#include "dimercff/kasteleyn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dimercff {

KasteleynSystem KasteleynSystem::assemble(const DimerGraph& g, const Monodromy& mono,
                                          Complex global_phase) {
  std::vector<Complex> w(g.edge_count());
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    w[i] = g.is_horizontal(e) ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
  }
  auto twist = [&](const std::vector<Edge>& cut, Complex chi) {
    for (const Edge& e : cut) {
      int idx = g.edge_index(e);
      if (idx >= 0) w[idx] *= chi;
    }
  };
  if (g.topology() == Topology::Cylinder) twist(g.cut_edges(), mono.around_cylinder);
  const auto& region_cuts = g.hole_cut_edges();
  for (size_t r = 0; r < region_cuts.size() && r < mono.around_regions.size(); ++r)
    twist(region_cuts[r], mono.around_regions[r]);
  for (Complex& x : w) x *= global_phase;
  return assemble_from_weights(g, std::move(w));
}

KasteleynSystem KasteleynSystem::assemble_from_weights(const DimerGraph& g,
                                                       std::vector<Complex> weights) {
  if (!g.balanced())
    throw RectangularMatrixError("assemble: unbalanced graph gives a rectangular matrix (" +
                                 std::to_string(g.white_count()) + " white, " +
                                 std::to_string(g.black_count()) + " black)");
  if (static_cast<int>(weights.size()) != g.edge_count())
    throw ConstructionError("assemble_from_weights: one weight per edge required");
  for (const Complex& x : weights)
    if (std::abs(x) == 0.0)
      throw ConstructionError("assemble_from_weights: weights must be nonzero");
  KasteleynSystem ks;
  ks.graph_ = &g;
  ks.weights_ = std::move(weights);
  ks.build_matrix();
  return ks;
}

void KasteleynSystem::build_matrix() {
  const DimerGraph& g = *graph_;
  for (const VertexId& v : g.vertices())
    (vertex_color(v) == Color::White ? whites_ : blacks_).push_back(v);
  for (size_t i = 0; i < whites_.size(); ++i) white_index_[whites_[i]] = static_cast<int>(i);
  for (size_t i = 0; i < blacks_.size(); ++i) black_index_[blacks_[i]] = static_cast<int>(i);

  const int n = static_cast<int>(whites_.size());
  matrix_ = Eigen::MatrixXcd::Zero(n, n);
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    const Edge& e = g.edge(ei);
    matrix_(white_index_.at(e.white), black_index_.at(e.black)) = weights_[ei];
  }
}

Complex KasteleynSystem::weight(const Edge& e) const {
  int idx = graph_->edge_index(e);
  return idx < 0 ? Complex{0.0, 0.0} : weights_[idx];
}

int KasteleynSystem::white_ordinal(VertexId w) const {
  auto it = white_index_.find(w);
  if (it == white_index_.end()) throw ConstructionError("white_ordinal: not a white vertex of the graph");
  return it->second;
}

int KasteleynSystem::black_ordinal(VertexId b) const {
  auto it = black_index_.find(b);
  if (it == black_index_.end()) throw ConstructionError("black_ordinal: not a black vertex of the graph");
  return it->second;
}

void KasteleynSystem::prefactor() const {
  if (lu_) return;
  lu_.emplace(matrix_);
  const auto& diag = lu_->matrixLU().diagonal();
  double log_abs = 0.0;
  Complex phase{1.0, 0.0};
  bool zero = false;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double a = std::abs(diag[i]);
    if (a == 0.0) {
      zero = true;
      break;
    }
    log_abs += std::log(a);
    phase *= diag[i] / a;
  }
  if (zero) {
    log_abs_det_ = -std::numeric_limits<double>::infinity();
    det_phase_ = Complex{0.0, 0.0};
  } else {
    log_abs_det_ = log_abs;
    det_phase_ = phase * static_cast<double>(lu_->permutationP().determinant());
  }
  det_ready_ = true;
}

bool KasteleynSystem::singular() const {
  prefactor();
  if (std::isinf(log_abs_det_)) return true;
  // Relative pivot collapse also counts as singular for inversion purposes.
  const auto& diag = lu_->matrixLU().diagonal();
  double max_p = 0.0, min_p = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    max_p = std::max(max_p, std::abs(diag[i]));
    min_p = std::min(min_p, std::abs(diag[i]));
  }
  return max_p == 0.0 || min_p < 1e-13 * max_p;
}

double KasteleynSystem::log_abs_det() const {
  prefactor();
  return log_abs_det_;
}

Complex KasteleynSystem::det_phase() const {
  prefactor();
  return det_phase_;
}

double KasteleynSystem::abs_det() const { return std::exp(log_abs_det()); }

double partition_function(const KasteleynSystem& ks) { return ks.abs_det(); }

Monodromy counting_monodromy(const DimerGraph& g) {
  Monodromy mono;
  if (g.topology() == Topology::Cylinder) {
    const int k = g.width_period() / 2;
    mono.around_cylinder = (k % 2 == 0) ? Complex{-1.0, 0.0} : Complex{1.0, 0.0};
  }
  return mono;
}

Complex KasteleynSystem::inverse_entry(VertexId b, VertexId w) const {
  if (vertex_color(b) != Color::Black || vertex_color(w) != Color::White)
    throw ConstructionError("inverse_entry: expects (black, white)");
  if (singular()) throw SingularSystemError("inverse_entry: det K = 0, no inverse");
  const int col = white_ordinal(w);
  auto it = inverse_columns_.find(col);
  if (it == inverse_columns_.end()) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(matrix_.rows());
    e[col] = Complex{1.0, 0.0};
    it = inverse_columns_.emplace(col, lu_->solve(e)).first;
  }
  return it->second[black_ordinal(b)];
}

double KasteleynSystem::edge_probability(const Edge& e) const {
  const int idx = graph_->edge_index(e);
  if (idx < 0) throw ConstructionError("edge_probability: edge not in graph");
  const Complex val = weights_[idx] * inverse_entry(e.black, e.white);
  if (std::abs(val.imag()) > 1e-9 || val.real() < -1e-9 || val.real() > 1.0 + 1e-9)
    throw InconsistencyError("edge_probability: K(w,b) K^{-1}(b,w) = " +
                             std::to_string(val.real()) + " + " + std::to_string(val.imag()) +
                             "i outside [0,1]");
  return std::clamp(val.real(), 0.0, 1.0);
}

}  // namespace dimercff
