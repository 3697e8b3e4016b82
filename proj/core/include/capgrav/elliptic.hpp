#pragma once

#include <optional>

namespace capgrav {

/// The squared elliptic modulus m = k^2 appearing in Legendre-form
/// integrals and Jacobi functions. Valid range is 0 <= m < 1; the
/// complementary parameter 1 - m is stored alongside so that values
/// extremely close to 1 keep full precision (the stored m may round to
/// 1.0 while the complement stays positive and authoritative).
class EllipticModulusSquared {
 public:
  /// Construct from the parameter m. Throws ConfigError unless 0 <= m < 1.
  static EllipticModulusSquared from_parameter(double m);
  /// Construct from the complement mc = 1 - m. Throws unless 0 < mc <= 1.
  static EllipticModulusSquared from_complement(double mc);

  double m() const { return m_; }
  double complement() const { return mc_; }

 private:
  EllipticModulusSquared(double m, double mc) : m_(m), mc_(mc) {}
  double m_;
  double mc_;
};

/// sn, cn, dn at a common argument. sn^2 + cn^2 = 1 and
/// dn^2 + m sn^2 = 1 hold to rounding.
struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// Complete elliptic integral of the first kind,
/// K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi), by AGM iteration.
double complete_elliptic_k(EllipticModulusSquared m);

/// Incomplete elliptic integral of the first kind in Legendre form,
/// F(phi | m) = int_0^phi dtheta / sqrt(1 - m sin^2 theta).
/// Odd in phi; F(phi + n pi | m) = F(phi | m) + 2 n K(m).
double incomplete_elliptic_f(double phi, EllipticModulusSquared m);

/// Jacobi elliptic functions, the inverse of F: if u = F(phi|m) then
/// sn(u|m) = sin phi. Arguments are reduced by the 4K period before
/// evaluation; 1 - m below Tolerances::hyperbolic_limit switches to the
/// hyperbolic limit sn -> tanh, cn, dn -> sech.
JacobiTriple jacobi_elliptic(double u, EllipticModulusSquared m);

}  // namespace capgrav
