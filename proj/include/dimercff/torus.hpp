#pragma once

// Continuum kernels on the torus C/(Z + tau*Z): theta functions with
// half-integer characteristics, the twisted Szego kernel normalized to
// residue 1/(2 pi i), characteristic selection by measured monodromies, the
// four reflected components on the cylinder strip, and the determinant sums
// U_m built from them.

#include <complex>
#include <utility>
#include <vector>

#include "dimercff/errors.hpp"

namespace dimercff {

using Complex = std::complex<double>;

struct ThetaCharacteristic {
  double a = 0.0;
  double b = 0.0;
  bool operator==(const ThetaCharacteristic&) const = default;
};

inline constexpr ThetaCharacteristic kCharEvenEven{0.0, 0.0};
inline constexpr ThetaCharacteristic kCharHalfZero{0.5, 0.0};
inline constexpr ThetaCharacteristic kCharZeroHalf{0.0, 0.5};
inline constexpr ThetaCharacteristic kCharOdd{0.5, 0.5};

// theta[a,b](z | tau) = sum_n exp(pi i (n+a)^2 tau + 2 pi i (n+a)(z+b)).
class Theta {
 public:
  Theta(Complex tau, ThetaCharacteristic ch);
  Complex eval(Complex z) const;
  Complex derivative(Complex z) const;  // d/dz
  Complex tau() const { return tau_; }
  ThetaCharacteristic characteristic() const { return ch_; }
  int truncation(Complex z) const;

 private:
  Complex tau_;
  ThetaCharacteristic ch_;
};

enum class CylStyle { DD, ND };

// Scalar Szego kernel S(z,w) with multiplicative monodromies fixed by the
// characteristic; S has a simple pole on the diagonal with residue
// 1/(2 pi i) in the first variable.
class TorusKernel {
 public:
  TorusKernel(Complex tau, ThetaCharacteristic ch);

  Complex tau() const { return tau_; }
  ThetaCharacteristic characteristic() const { return ch_; }

  Complex eval(Complex z, Complex w) const;

  // Measured multipliers under z -> z+1 and z -> z+tau at a generic point.
  std::pair<Complex, Complex> measured_monodromy() const;

 private:
  Complex tau_;
  ThetaCharacteristic ch_;
  Theta theta_ch_;
  Theta theta_odd_;
  Complex theta_ch_zero_;
  Complex theta_odd_deriv_zero_;
};

// The even characteristic whose kernel realizes the style's monodromy
// pattern on the double of the round cylinder of modulus tau: DD wants
// (z->z+1: -1, z->z+i*tau: +1), ND wants (-1, -1). Found by searching the
// three even characteristics, not by a convention table.
ThetaCharacteristic select_characteristic(CylStyle style, double tau);

enum class HalfSign : int { Plus = +1, Minus = -1 };

// The four components of the Dirac Green's kernel on the strip
// 0 <= Im z <= tau/2, realized through one torus kernel and the reflection
// sigma(z) = conj(z).
class CylinderComponents {
 public:
  CylinderComponents(double tau, CylStyle style);

  double tau() const { return tau_; }
  CylStyle style() const { return style_; }
  const TorusKernel& kernel() const { return kernel_; }

  // The reflections fixing the two boundary lines Im z = 0 and Im z = tau/2.
  Complex sigma(Complex z) const { return std::conj(z); }
  Complex sigma_top(Complex z) const { return std::conj(z) + Complex{0.0, tau_}; }

  // Glued function on the torus.
  Complex f(Complex p, Complex q) const { return kernel_.eval(p, q); }

  Complex component(HalfSign s1, HalfSign s2, Complex p, Complex q) const;

  // U_m at the given points: sum over sign vectors s of
  // det[1_{i != j} f^[s_i,s_j](p_i, p_j)] * prod_j t_j^[s_j], with
  // t^[+] = t and t^[-] = conj(t). Tangents default to 1. Real up to 1e-9.
  double u_m(const std::vector<Complex>& points,
             const std::vector<Complex>& tangents = {}) const;

 private:
  double tau_;
  CylStyle style_;
  TorusKernel kernel_;
};

// Abel-Jacobi shift data of a boundary divisor q - p on the cylinder double:
// A- and B-periods of Im alpha and the normalized height-shift contribution.
struct AbelJacobiShift {
  double a_period = 0.0;    // pi * Re(p2 - p1)
  double b_period = 0.0;    // pi * Im(p2 - p1) / tau
  double normalized = 0.0;  // Re(p2 - p1), defined modulo integers
};

AbelJacobiShift abel_jacobi_shift(double tau, Complex p1, Complex p2);

}  // namespace dimercff
