#pragma once

// Discrete Gaussian instanton laws: lattice measures proportional to
// exp(-u^T Q u) on c0 + Z^n, twisted expectations E_m, covariance reports,
// and the quadratic form Q itself from Dirichlet energies of harmonic
// measures solved by finite differences.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "dimercff/errors.hpp"

namespace dimercff {

using Complex = std::complex<double>;

// Sum of monomial terms c^powers, total degree at most 4.
struct PolynomialMoment {
  struct Term {
    double coeff = 1.0;
    std::vector<int> powers;
  };
  std::vector<Term> terms;

  static PolynomialMoment constant(double c);
  static PolynomialMoment monomial(std::vector<int> powers, double coeff = 1.0);
};

struct VarianceReport {
  Eigen::MatrixXd covariance;  // E_m[c_i c_j] - E_m[c_i] E_m[c_j]
  double min_eigenvalue = 0.0;
  bool positive_definite = false;
};

// P[c = c0 + k] = exp(-u^T Q u) / Theta over the truncated lattice box
// {-N..N}^n. N is chosen adaptively so the dropped Gaussian tail, bounded by
// a geometric series in exp(-lambda_min), stays below 1e-14.
class DiscreteGaussianLaw {
 public:
  // min_truncation can force a wider box than the adaptive choice (used by
  // the truncation-robustness checks).
  DiscreteGaussianLaw(Eigen::VectorXd c0, Eigen::MatrixXd Q, int min_truncation = 0);

  int dimension() const { return n_; }
  const Eigen::VectorXd& shift() const { return c0_; }
  const Eigen::MatrixXd& energy() const { return q_; }
  int truncation() const { return trunc_; }
  double normalizer() const { return theta_; }

  // u must lie on c0 + Z^n.
  double pmf(const Eigen::VectorXd& u) const;

  // E[e^{pi i m.(c - c0)}], the normalizing weight of the twist; a ratio of
  // alternating to plain theta-type lattice sums.
  double twist_weight(const Eigen::VectorXi& twist) const;

  // E_m[f(c)] = E[f(c) e^{pi i m.(c - c0)}] / E[e^{pi i m.(c - c0)}].
  // Throws DegenerateTwistError when the denominator is below 1e-12.
  Complex twisted_expectation(const Eigen::VectorXi& twist, const PolynomialMoment& f) const;

  VarianceReport variance_test(const Eigen::VectorXi& twist) const;

  void for_each_atom(const std::function<void(const Eigen::VectorXd&, double)>& fn) const;

 private:
  double raw_weight(const Eigen::VectorXd& u) const;
  void sum_lattice(const std::function<void(const Eigen::VectorXd&, double, long long)>& fn) const;

  int n_;
  Eigen::VectorXd c0_;
  Eigen::MatrixXd q_;
  int trunc_ = 0;
  double theta_ = 0.0;
};

// Continuum domain for the harmonic-measure solver: either the round
// cylinder of modulus tau (period 1, height tau/2) or a rectangle with
// rectangular holes. Inner boundary components are the cylinder top,
// respectively the holes in declaration order.
struct ContinuumHole {
  double x0 = 0.0, y0 = 0.0, w = 0.0, h = 0.0;
};

struct ContinuumDomain {
  enum class Kind { Cylinder, HoledRectangle };
  Kind kind = Kind::Cylinder;
  double tau = 1.0;                 // cylinder
  double width = 1.0, height = 1.0; // rectangle
  std::vector<ContinuumHole> holes;
  int inner_components() const {
    return kind == Kind::Cylinder ? 1 : static_cast<int>(holes.size());
  }
};

// Entries int grad hm_i . grad hm_j by a 5-point Dirichlet solve on an
// nx x ny grid and midpoint quadrature; symmetric by construction.
Eigen::MatrixXd energy_matrix(const ContinuumDomain& dom, int nx, int ny);

// Instanton law of a domain: Q = (pi/2) * energy_matrix.
DiscreteGaussianLaw law_from_domain(const ContinuumDomain& dom, Eigen::VectorXd c0, int nx,
                                    int ny);

}  // namespace dimercff
