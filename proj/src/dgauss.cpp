#include "dimercff/dgauss.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

namespace dimercff {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

PolynomialMoment PolynomialMoment::constant(double c) {
  PolynomialMoment f;
  f.terms.push_back(Term{c, {}});
  return f;
}

PolynomialMoment PolynomialMoment::monomial(std::vector<int> powers, double coeff) {
  PolynomialMoment f;
  f.terms.push_back(Term{coeff, std::move(powers)});
  return f;
}

DiscreteGaussianLaw::DiscreteGaussianLaw(Eigen::VectorXd c0, Eigen::MatrixXd Q,
                                         int min_truncation)
    : n_(static_cast<int>(c0.size())), c0_(std::move(c0)), q_(std::move(Q)) {
  if (q_.rows() != n_ || q_.cols() != n_)
    throw ConstructionError("DiscreteGaussianLaw: Q must be n x n");
  if (!q_.isApprox(q_.transpose(), 1e-10))
    throw ConstructionError("DiscreteGaussianLaw: Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q_);
  const double lambda_min = es.eigenvalues().minCoeff();
  if (!(lambda_min > 0.0))
    throw ConstructionError("DiscreteGaussianLaw: Q must be positive definite");

  // Geometric tail bound for the box {-N..N}^n: the dropped shells carry at
  // most n (2N+1)^{n-1} * 2 e^{-l (N-1)^2} / (1 - e^{-l (2N-1)}).
  const int n_cap = (n_ == 1) ? 4000 : (n_ == 2 ? 300 : 60);
  for (int N = 4; N <= n_cap; ++N) {
    const double l = lambda_min;
    const double tail = n_ * std::pow(2.0 * N + 1.0, n_ - 1) * 2.0 *
                        std::exp(-l * (N - 1.0) * (N - 1.0)) /
                        (1.0 - std::exp(-l * (2.0 * N - 1.0)));
    if (tail < 1e-14) {
      trunc_ = N;
      break;
    }
  }
  if (trunc_ == 0)
    throw ConstructionError("DiscreteGaussianLaw: truncation tail bound not met; Q too flat");
  trunc_ = std::max(trunc_, min_truncation);

  double theta = 0.0;
  sum_lattice([&](const Eigen::VectorXd&, double w, long long) { theta += w; });
  theta_ = theta;
}

double DiscreteGaussianLaw::raw_weight(const Eigen::VectorXd& u) const {
  return std::exp(-u.dot(q_ * u));
}

// Walks the truncation box in a fixed symmetric order (k and -k adjacent per
// coordinate), passing the atom, its raw weight, and m-free parity data via
// the dot product with k computed by the caller.
void DiscreteGaussianLaw::sum_lattice(
    const std::function<void(const Eigen::VectorXd&, double, long long)>& fn) const {
  std::vector<int> k(n_, -trunc_);
  Eigen::VectorXd u(n_);
  while (true) {
    long long ksum = 0;
    for (int i = 0; i < n_; ++i) {
      u[i] = c0_[i] + k[i];
      ksum += k[i];
    }
    fn(u, raw_weight(u), ksum);
    int i = 0;
    for (; i < n_; ++i) {
      if (++k[i] <= trunc_) break;
      k[i] = -trunc_;
    }
    if (i == n_) break;
  }
}

double DiscreteGaussianLaw::pmf(const Eigen::VectorXd& u) const {
  if (u.size() != n_) throw ConstructionError("pmf: dimension mismatch");
  for (int i = 0; i < n_; ++i) {
    const double frac = u[i] - c0_[i];
    if (std::abs(frac - std::round(frac)) > 1e-9)
      throw ConstructionError("pmf: u does not lie on c0 + Z^n");
    if (std::abs(std::round(frac)) > trunc_) return 0.0;
  }
  return raw_weight(u) / theta_;
}

double DiscreteGaussianLaw::twist_weight(const Eigen::VectorXi& twist) const {
  if (twist.size() != n_) throw ConstructionError("twist_weight: twist dimension mismatch");
  long double den = 0.0L;
  sum_lattice([&](const Eigen::VectorXd& u, double w, long long) {
    long long mk = 0;
    for (int i = 0; i < n_; ++i)
      mk += static_cast<long long>(twist[i]) * static_cast<long long>(std::llround(u[i] - c0_[i]));
    den += ((mk % 2 == 0) ? 1.0 : -1.0) * w;
  });
  return static_cast<double>(den) / theta_;
}

Complex DiscreteGaussianLaw::twisted_expectation(const Eigen::VectorXi& twist,
                                                 const PolynomialMoment& f) const {
  if (twist.size() != n_) throw ConstructionError("twisted_expectation: twist dimension mismatch");
  for (const auto& t : f.terms) {
    if (static_cast<int>(t.powers.size()) > n_)
      throw ConstructionError("twisted_expectation: monomial has too many variables");
    int deg = 0;
    for (int p : t.powers) deg += p;
    if (deg > 4) throw ConstructionError("twisted_expectation: moment degree capped at 4");
  }
  // exp(pi i m.(c - c0)) = (-1)^{m.k} on the lattice.
  long double num = 0.0L, den = 0.0L;
  Eigen::VectorXi m = twist;
  sum_lattice([&](const Eigen::VectorXd& u, double w, long long) {
    long long mk = 0;
    for (int i = 0; i < n_; ++i)
      mk += static_cast<long long>(m[i]) * static_cast<long long>(std::llround(u[i] - c0_[i]));
    const double sign = (mk % 2 == 0) ? 1.0 : -1.0;
    den += sign * w;
    double fu = 0.0;
    for (const auto& t : f.terms) {
      double term = t.coeff;
      for (size_t i = 0; i < t.powers.size(); ++i) term *= std::pow(u[static_cast<int>(i)], t.powers[i]);
      fu += term;
    }
    num += sign * w * fu;
  });
  if (std::abs(static_cast<double>(den)) / theta_ <= 1e-12)
    throw DegenerateTwistError("twisted_expectation: E[exp(pi i m.(c-c0))] vanishes");
  return Complex{static_cast<double>(num / den), 0.0};
}

VarianceReport DiscreteGaussianLaw::variance_test(const Eigen::VectorXi& twist) const {
  Eigen::VectorXd mean(n_);
  for (int i = 0; i < n_; ++i) {
    std::vector<int> pw(i + 1, 0);
    pw[i] = 1;
    mean[i] = twisted_expectation(twist, PolynomialMoment::monomial(pw)).real();
  }
  Eigen::MatrixXd cov(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      std::vector<int> pw(std::max(i, j) + 1, 0);
      pw[i] += 1;
      pw[j] += 1;
      const double second = twisted_expectation(twist, PolynomialMoment::monomial(pw)).real();
      cov(i, j) = cov(j, i) = second - mean[i] * mean[j];
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  VarianceReport out;
  out.covariance = cov;
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.positive_definite = out.min_eigenvalue > 0.0;
  return out;
}

void DiscreteGaussianLaw::for_each_atom(
    const std::function<void(const Eigen::VectorXd&, double)>& fn) const {
  sum_lattice([&](const Eigen::VectorXd& u, double w, long long) { fn(u, w / theta_); });
}

namespace {

// 5-point Dirichlet solve on a node grid. present/boundary masks and
// boundary data come from the caller; returns node values.
struct GridSolve {
  int nxn, nyn;              // node counts
  double hx, hy;
  bool periodic_x;
  std::vector<int> unknown;  // node -> unknown index or -1
  std::vector<double> value; // Dirichlet data and solution

  int node(int i, int j) const { return j * nxn + i; }
};

void solve_laplace(GridSolve& gs) {
  using Trip = Eigen::Triplet<double>;
  const double wx = 1.0 / (gs.hx * gs.hx), wy = 1.0 / (gs.hy * gs.hy);
  int n_unknown = 0;
  for (int v : gs.unknown)
    if (v >= 0) ++n_unknown;
  std::vector<Trip> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknown);
  for (int j = 0; j < gs.nyn; ++j) {
    for (int i = 0; i < gs.nxn; ++i) {
      const int row = gs.unknown[gs.node(i, j)];
      if (row < 0) continue;
      double diag = 2.0 * wx + 2.0 * wy;
      auto couple = [&](int ii, int jj, double w) {
        if (gs.periodic_x) ii = (ii % gs.nxn + gs.nxn) % gs.nxn;
        const int nb = gs.node(ii, jj);
        const int col = gs.unknown[nb];
        if (col >= 0) trips.emplace_back(row, col, -w);
        else rhs[row] += w * gs.value[nb];
      };
      couple(i - 1, j, wx);
      couple(i + 1, j, wx);
      couple(i, j - 1, wy);
      couple(i, j + 1, wy);
      trips.emplace_back(row, row, diag);
    }
  }
  Eigen::SparseMatrix<double> a(n_unknown, n_unknown);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success)
    throw Error("energy_matrix: harmonic solve factorization failed");
  Eigen::VectorXd x = solver.solve(rhs);
  const double residual = (a * x - rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
    throw Error("energy_matrix: harmonic solve residual " + std::to_string(residual));
  for (int v = 0; v < static_cast<int>(gs.unknown.size()); ++v)
    if (gs.unknown[v] >= 0) gs.value[v] = x[gs.unknown[v]];
}

}  // namespace

Eigen::MatrixXd energy_matrix(const ContinuumDomain& dom, int nx, int ny) {
  if (nx < 4 || ny < 4) throw ConstructionError("energy_matrix: grid too coarse");
  const int n = dom.inner_components();
  if (n < 1) throw ConstructionError("energy_matrix: domain has no inner boundary component");

  GridSolve gs;
  std::vector<std::vector<double>> hm(n);

  if (dom.kind == ContinuumDomain::Kind::Cylinder) {
    if (!(dom.tau > 0.0)) throw ConstructionError("energy_matrix: tau must be positive");
    gs.nxn = nx;  // periodic: node nx == node 0
    gs.nyn = ny + 1;
    gs.hx = 1.0 / nx;
    gs.hy = (dom.tau / 2.0) / ny;
    gs.periodic_x = true;
    gs.unknown.assign(gs.nxn * gs.nyn, -1);
    gs.value.assign(gs.nxn * gs.nyn, 0.0);
    int next = 0;
    for (int j = 0; j < gs.nyn; ++j)
      for (int i = 0; i < gs.nxn; ++i) {
        if (j == 0) gs.value[gs.node(i, j)] = 0.0;        // bottom boundary B_0
        else if (j == ny) gs.value[gs.node(i, j)] = 1.0;  // top boundary B_1
        else gs.unknown[gs.node(i, j)] = next++;
      }
    solve_laplace(gs);
    hm[0] = gs.value;
  } else {
    if (!(dom.width > 0.0) || !(dom.height > 0.0))
      throw ConstructionError("energy_matrix: empty rectangle");
    for (const ContinuumHole& hh : dom.holes)
      if (!(hh.x0 > 0.0 && hh.y0 > 0.0 && hh.x0 + hh.w < dom.width && hh.y0 + hh.h < dom.height))
        throw ConstructionError("energy_matrix: holes must be strictly interior");
    gs.nxn = nx + 1;
    gs.nyn = ny + 1;
    gs.hx = dom.width / nx;
    gs.hy = dom.height / ny;
    gs.periodic_x = false;
    auto hole_of_node = [&](int i, int j) {
      const double x = i * gs.hx, y = j * gs.hy;
      for (size_t k = 0; k < dom.holes.size(); ++k) {
        const ContinuumHole& hh = dom.holes[k];
        if (x >= hh.x0 - 1e-12 && x <= hh.x0 + hh.w + 1e-12 && y >= hh.y0 - 1e-12 &&
            y <= hh.y0 + hh.h + 1e-12)
          return static_cast<int>(k);
      }
      return -1;
    };
    for (int comp = 0; comp < n; ++comp) {
      gs.unknown.assign(gs.nxn * gs.nyn, -1);
      gs.value.assign(gs.nxn * gs.nyn, 0.0);
      int next = 0;
      for (int j = 0; j < gs.nyn; ++j)
        for (int i = 0; i < gs.nxn; ++i) {
          const bool outer = (i == 0 || i == nx || j == 0 || j == ny);
          const int hole = hole_of_node(i, j);
          if (outer) gs.value[gs.node(i, j)] = 0.0;
          else if (hole >= 0) gs.value[gs.node(i, j)] = (hole == comp) ? 1.0 : 0.0;
          else gs.unknown[gs.node(i, j)] = next++;
        }
      solve_laplace(gs);
      hm[comp] = gs.value;
    }
  }

  // Midpoint quadrature of grad hm_i . grad hm_j over all cells.
  Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(n, n);
  const int cells_x = nx;
  const int cells_y = ny;
  auto node_value = [&](const std::vector<double>& h, int i, int j) {
    if (gs.periodic_x) i = (i % gs.nxn + gs.nxn) % gs.nxn;
    return h[gs.node(i, j)];
  };
  for (int comp_i = 0; comp_i < n; ++comp_i)
    for (int comp_j = comp_i; comp_j < n; ++comp_j) {
      double acc = 0.0;
      for (int j = 0; j < cells_y; ++j)
        for (int i = 0; i < cells_x; ++i) {
          auto grad = [&](const std::vector<double>& h) {
            const double v00 = node_value(h, i, j), v10 = node_value(h, i + 1, j);
            const double v01 = node_value(h, i, j + 1), v11 = node_value(h, i + 1, j + 1);
            const double gx = ((v10 + v11) - (v00 + v01)) / (2.0 * gs.hx);
            const double gy = ((v01 + v11) - (v00 + v10)) / (2.0 * gs.hy);
            return std::pair<double, double>{gx, gy};
          };
          auto [gxi, gyi] = grad(hm[comp_i]);
          auto [gxj, gyj] = grad(hm[comp_j]);
          acc += (gxi * gxj + gyi * gyj) * gs.hx * gs.hy;
        }
      energy(comp_i, comp_j) = energy(comp_j, comp_i) = acc;
    }
  return energy;
}

DiscreteGaussianLaw law_from_domain(const ContinuumDomain& dom, Eigen::VectorXd c0, int nx,
                                    int ny) {
  const Eigen::MatrixXd e = energy_matrix(dom, nx, ny);
  return DiscreteGaussianLaw(std::move(c0), (kPi / 2.0) * e);
}

}  // namespace dimercff
