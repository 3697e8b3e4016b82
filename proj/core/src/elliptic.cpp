#include "capgrav/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "capgrav/constants.hpp"
#include "capgrav/errors.hpp"

namespace capgrav {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Carlson symmetric integral R_F(x, y, z) by the duplication theorem
// (Carlson 1995). Relative accuracy ~ machine epsilon for the arguments
// produced by incomplete_elliptic_f.
double carlson_rf(double x, double y, double z) {
  double xn = x, yn = y, zn = z;
  double an = (x + y + z) / 3.0;
  const double a0 = an;
  const double q = std::pow(3.0 * kEps, -1.0 / 8.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double pow4 = 1.0;
  while (q * pow4 > std::abs(an)) {
    const double sx = std::sqrt(xn);
    const double sy = std::sqrt(yn);
    const double sz = std::sqrt(zn);
    const double lambda = sx * sy + sy * sz + sz * sx;
    an = 0.25 * (an + lambda);
    xn = 0.25 * (xn + lambda);
    yn = 0.25 * (yn + lambda);
    zn = 0.25 * (zn + lambda);
    pow4 *= 0.25;
  }
  const double xd = (a0 - x) * pow4 / an;
  const double yd = (a0 - y) * pow4 / an;
  const double zd = -xd - yd;
  const double e2 = xd * yd - zd * zd;
  const double e3 = xd * yd * zd;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
         std::sqrt(an);
}

// Bulirsch (1965) descending-Landen AGM recurrence for sn, cn, dn.
// Takes the complementary parameter mc = 1 - m, assumed in (0, 1].
void sncndn(double u, double mc, double& sn, double& cn, double& dn) {
  constexpr int kMaxLevels = 16;
  constexpr double kStop = 1e-12;
  std::array<double, kMaxLevels> am;  // arithmetic means
  std::array<double, kMaxLevels> gm;  // geometric means

  double a = 1.0;
  double emc = mc;
  double mid = 0.0;
  dn = 1.0;
  int top = 0;
  for (int i = 0; i < kMaxLevels; ++i) {
    top = i;
    am[i] = a;
    emc = std::sqrt(emc);
    gm[i] = emc;
    mid = 0.5 * (a + emc);
    if (std::abs(a - emc) <= kStop * a) break;
    emc *= a;
    a = mid;
  }

  const double phi = mid * u;
  sn = std::sin(phi);
  cn = std::cos(phi);
  if (sn != 0.0) {
    double av = cn / sn;
    double cv = mid * av;
    for (int i = top; i >= 0; --i) {
      av *= cv;
      cv *= dn;
      dn = (gm[i] + av) / (am[i] + av);
      av = cv / am[i];
    }
    const double norm = 1.0 / std::sqrt(cv * cv + 1.0);
    sn = (sn >= 0.0) ? norm : -norm;
    cn = cv * sn;
  }
}

}  // namespace

EllipticModulusSquared EllipticModulusSquared::from_parameter(double m) {
  if (!(m >= 0.0) || !(m < 1.0)) {
    throw ConfigError("elliptic parameter m must satisfy 0 <= m < 1 (K diverges at m = 1)");
  }
  return EllipticModulusSquared(m, 1.0 - m);
}

EllipticModulusSquared EllipticModulusSquared::from_complement(double mc) {
  if (!(mc > 0.0) || !(mc <= 1.0)) {
    throw ConfigError("elliptic complement 1 - m must satisfy 0 < 1 - m <= 1");
  }
  return EllipticModulusSquared(1.0 - mc, mc);
}

double complete_elliptic_k(EllipticModulusSquared m) {
  double a = 1.0;
  double g = std::sqrt(m.complement());
  while (std::abs(a - g) > 2.0 * kEps * a) {
    const double an = 0.5 * (a + g);
    g = std::sqrt(a * g);
    a = an;
  }
  return kPi / (a + g);
}

double incomplete_elliptic_f(double phi, EllipticModulusSquared m) {
  if (!std::isfinite(phi)) {
    throw ConfigError("incomplete_elliptic_f: phi must be finite");
  }
  if (m.m() == 0.0) return phi;

  // Periodicity: F(phi + n pi) = F(phi) + 2 n K.
  const double n = std::nearbyint(phi / kPi);
  const double phi_r = phi - n * kPi;  // in [-pi/2, pi/2]
  double result = 0.0;
  if (n != 0.0) result = 2.0 * n * complete_elliptic_k(m);

  const double s = std::sin(phi_r);
  const double c = std::cos(phi_r);
  const double w = 1.0 - m.m() * s * s;
  result += s * carlson_rf(c * c, w, 1.0);
  return result;
}

JacobiTriple jacobi_elliptic(double u, EllipticModulusSquared m) {
  if (!std::isfinite(u)) {
    throw ConfigError("jacobi_elliptic: u must be finite");
  }
  if (m.m() == 0.0) {
    return {std::sin(u), std::cos(u), 1.0};
  }
  if (m.complement() < Tolerances::hyperbolic_limit) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }

  // Reduce by the 4K period of sn and cn (dn has period 2K, a divisor).
  const double big_k = complete_elliptic_k(m);
  const double u_r = std::remainder(u, 4.0 * big_k);

  JacobiTriple out{};
  sncndn(u_r, m.complement(), out.sn, out.cn, out.dn);
  return out;
}

}  // namespace capgrav
