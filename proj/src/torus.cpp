#include "dimercff/torus.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace dimercff {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI{0.0, 1.0};

Complex reduce_mod_lattice(Complex z, Complex tau) {
  // Bring z close to 0 modulo Z + tau Z (tau has positive imaginary part).
  const double n2 = std::round(z.imag() / tau.imag());
  z -= n2 * tau;
  z -= std::round(z.real());
  return z;
}

}  // namespace

Theta::Theta(Complex tau, ThetaCharacteristic ch) : tau_(tau), ch_(ch) {
  if (!(tau.imag() > 0.0)) throw ConstructionError("Theta: Im tau must be positive");
}

int Theta::truncation(Complex z) const {
  // Largest dropped term exp(-pi (n+a)^2 Im tau + 2 pi |n+a| |Im z|) < 1e-18.
  const double t = tau_.imag();
  const double y = std::abs(z.imag());
  const double n = (y + std::sqrt(y * y + 42.0 * t / kPi)) / t;
  const int trunc = static_cast<int>(std::ceil(n)) + 4;
  if (trunc > 2'000'000) throw ConstructionError("Theta: truncation explodes, Im tau too small");
  return trunc;
}

Complex Theta::eval(Complex z) const {
  const int n_max = truncation(z);
  Complex acc{0.0, 0.0};
  // Symmetric order: n and -(n+1) paired, so odd-characteristic cancellations
  // happen term by term.
  for (int n = n_max; n >= 0; --n) {
    for (int m : {n, -n - 1}) {
      const double na = m + ch_.a;
      acc += std::exp(kPi * kI * (na * na * tau_ + 2.0 * na * (z + ch_.b)));
    }
  }
  return acc;
}

Complex Theta::derivative(Complex z) const {
  const int n_max = truncation(z);
  Complex acc{0.0, 0.0};
  for (int n = n_max; n >= 0; --n) {
    for (int m : {n, -n - 1}) {
      const double na = m + ch_.a;
      acc += 2.0 * kPi * kI * na *
             std::exp(kPi * kI * (na * na * tau_ + 2.0 * na * (z + ch_.b)));
    }
  }
  return acc;
}

TorusKernel::TorusKernel(Complex tau, ThetaCharacteristic ch)
    : tau_(tau),
      ch_(ch),
      theta_ch_(tau, ch),
      theta_odd_(tau, kCharOdd),
      theta_ch_zero_(0.0),
      theta_odd_deriv_zero_(0.0) {
  if (ch == kCharOdd)
    throw ConstructionError(
        "TorusKernel: odd characteristic (1/2,1/2) has theta(0) = 0, no Cauchy kernel exists");
  theta_ch_zero_ = theta_ch_.eval(Complex{0.0, 0.0});
  theta_odd_deriv_zero_ = theta_odd_.derivative(Complex{0.0, 0.0});
  if (std::abs(theta_ch_zero_) < 1e-14)
    throw ConstructionError("TorusKernel: theta[a,b](0) vanished unexpectedly");
}

Complex TorusKernel::eval(Complex z, Complex w) const {
  const Complex u = w - z;
  if (std::abs(reduce_mod_lattice(u, tau_)) < 1e-12)
    throw PoleError("TorusKernel: evaluation on the diagonal");
  return (1.0 / (2.0 * kPi * kI)) * theta_ch_.eval(u) * theta_odd_deriv_zero_ /
         (theta_ch_zero_ * theta_odd_.eval(u));
}

std::pair<Complex, Complex> TorusKernel::measured_monodromy() const {
  const Complex z{0.137, 0.29 * tau_.imag()};
  const Complex w{0.611, 0.43 * tau_.imag()};
  const Complex base = eval(z, w);
  return {eval(z + 1.0, w) / base, eval(z + tau_, w) / base};
}

ThetaCharacteristic select_characteristic(CylStyle style, double tau) {
  if (!(tau > 0.0)) throw ConstructionError("select_characteristic: tau must be positive");
  const Complex modulus{0.0, tau};
  const Complex target_a{-1.0, 0.0};
  const Complex target_b = (style == CylStyle::DD) ? Complex{1.0, 0.0} : Complex{-1.0, 0.0};
  ThetaCharacteristic found{};
  int matches = 0;
  for (ThetaCharacteristic ch : {kCharEvenEven, kCharHalfZero, kCharZeroHalf}) {
    TorusKernel k(modulus, ch);
    auto [ma, mb] = k.measured_monodromy();
    if (std::abs(ma - target_a) < 1e-9 && std::abs(mb - target_b) < 1e-9) {
      found = ch;
      ++matches;
    }
  }
  if (matches != 1)
    throw ConventionMismatchError("select_characteristic: " + std::to_string(matches) +
                                  " even characteristics match the requested monodromy pattern");
  return found;
}

CylinderComponents::CylinderComponents(double tau, CylStyle style)
    : tau_(tau), style_(style), kernel_(Complex{0.0, tau}, select_characteristic(style, tau)) {}

Complex CylinderComponents::component(HalfSign s1, HalfSign s2, Complex p, Complex q) const {
  const bool p_plus = (s1 == HalfSign::Plus);
  const bool q_plus = (s2 == HalfSign::Plus);
  const Complex pp = p_plus ? p : sigma(p);
  const Complex qq = q_plus ? q : sigma(q);
  const double sign = q_plus ? 1.0 : -1.0;
  return sign * kernel_.eval(pp, qq);
}

double CylinderComponents::u_m(const std::vector<Complex>& points,
                               const std::vector<Complex>& tangents) const {
  const int m = static_cast<int>(points.size());
  if (m == 0) return 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::abs(points[i] - points[j]) < 1e-12)
        throw PoleError("u_m: coincident points");
  std::vector<Complex> tan = tangents;
  if (tan.empty()) tan.assign(m, Complex{1.0, 0.0});
  if (static_cast<int>(tan.size()) != m)
    throw ConstructionError("u_m: one tangent per point required");

  Complex total{0.0, 0.0};
  Eigen::MatrixXcd mat(m, m);
  for (unsigned s = 0; s < (1u << m); ++s) {
    auto sign_of = [&](int j) {
      return (s & (1u << j)) ? HalfSign::Minus : HalfSign::Plus;
    };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        mat(i, j) = (i == j) ? Complex{0.0, 0.0}
                             : component(sign_of(i), sign_of(j), points[i], points[j]);
    Complex term = (m == 1) ? Complex{0.0, 0.0} : Complex{mat.determinant()};
    for (int j = 0; j < m; ++j)
      term *= (sign_of(j) == HalfSign::Plus) ? tan[j] : std::conj(tan[j]);
    total += term;
  }
  if (std::abs(total.imag()) > 1e-9)
    throw InconsistencyError("u_m: imaginary part " + std::to_string(total.imag()));
  return total.real();
}

AbelJacobiShift abel_jacobi_shift(double tau, Complex p1, Complex p2) {
  if (!(tau > 0.0)) throw ConstructionError("abel_jacobi_shift: tau must be positive");
  for (Complex p : {p1, p2}) {
    const double y = p.imag();
    if (std::abs(y) > 1e-9 && std::abs(y - tau / 2.0) > 1e-9)
      throw ConstructionError("abel_jacobi_shift: points must lie on the boundary lines");
  }
  AbelJacobiShift out;
  out.a_period = kPi * (p2 - p1).real();
  out.b_period = kPi * (p2 - p1).imag() / tau;
  out.normalized = (p2 - p1).real();
  return out;
}

}  // namespace dimercff
