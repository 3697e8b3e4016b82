#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "capgrav/constants.hpp"
#include "capgrav/elliptic.hpp"
#include "capgrav/errors.hpp"
#include "oracles.hpp"

using namespace capgrav;

namespace {
const double kMSet[] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

TEST_CASE("modulus construction enforces 0 <= m < 1") {
  CHECK_NOTHROW(EllipticModulusSquared::from_parameter(0.0));
  CHECK_NOTHROW(EllipticModulusSquared::from_parameter(0.999999999));
  CHECK_THROWS_AS(EllipticModulusSquared::from_parameter(1.0), ConfigError);
  CHECK_THROWS_AS(EllipticModulusSquared::from_parameter(-0.1), ConfigError);
  CHECK_THROWS_AS(EllipticModulusSquared::from_parameter(2.0), ConfigError);
  CHECK_THROWS_AS(EllipticModulusSquared::from_complement(0.0), ConfigError);
  const auto near_one = EllipticModulusSquared::from_complement(1e-30);
  CHECK(near_one.complement() == 1e-30);
}

TEST_CASE("complete K: trivial and frozen values") {
  const auto m0 = EllipticModulusSquared::from_parameter(0.0);
  CHECK(std::abs(complete_elliptic_k(m0) - kPi / 2) < 1e-15);  // integrand is 1

  // Reference values computed from the defining integral at the exact
  // double-precision parameters.
  const auto m05 = EllipticModulusSquared::from_parameter(0.5);
  CHECK(complete_elliptic_k(m05) == doctest::Approx(1.8540746773013719).epsilon(1e-15));

  const auto m_near1 = EllipticModulusSquared::from_parameter(0.999999);
  const double k_near1 = complete_elliptic_k(m_near1);
  CHECK(std::isfinite(k_near1));
  CHECK(k_near1 > 7.0);
  CHECK(k_near1 == doctest::Approx(8.294051463601062).epsilon(1e-13));
}

TEST_CASE("complete K agrees with the quadrature oracle") {
  for (double m : {0.1, 0.5, 0.9, 0.99, 0.999999}) {
    const double lib = complete_elliptic_k(EllipticModulusSquared::from_parameter(m));
    const double quad = static_cast<double>(oracles::elliptic_k_quadrature(m));
    CHECK(std::abs(lib - quad) / quad < 1e-13);
  }
}

TEST_CASE("incomplete F: trivial reductions") {
  const auto m0 = EllipticModulusSquared::from_parameter(0.0);
  for (double phi : {-2.0, -0.3, 0.0, 0.7, 4.0}) {
    CHECK(incomplete_elliptic_f(phi, m0) == phi);  // integrand is 1
  }
  const auto m05 = EllipticModulusSquared::from_parameter(0.5);
  CHECK(incomplete_elliptic_f(kPi / 2, m05) ==
        doctest::Approx(complete_elliptic_k(m05)).epsilon(1e-13));
}

TEST_CASE("incomplete F matches the quadrature oracle") {
  const auto m03 = EllipticModulusSquared::from_parameter(0.3);
  const double lib = incomplete_elliptic_f(0.7, m03);
  CHECK(std::abs(lib - 0.71651771598539313) < 1e-14);
  for (double m : {0.2, 0.55, 0.9}) {
    const auto mod = EllipticModulusSquared::from_parameter(m);
    for (double phi : {-1.3, -0.4, 0.25, 0.7, 1.2, 2.9, 7.0}) {
      const double quad = static_cast<double>(oracles::elliptic_f_quadrature(phi, m));
      CHECK(std::abs(incomplete_elliptic_f(phi, mod) - quad) < 1e-12);
    }
  }
}

TEST_CASE("incomplete F is odd and quasi-periodic") {
  const auto m = EllipticModulusSquared::from_parameter(0.6);
  const double big_k = complete_elliptic_k(m);
  for (double phi : {0.2, 0.9, 1.4}) {
    CHECK(incomplete_elliptic_f(-phi, m) ==
          doctest::Approx(-incomplete_elliptic_f(phi, m)).epsilon(1e-15));
    CHECK(incomplete_elliptic_f(phi + kPi, m) ==
          doctest::Approx(incomplete_elliptic_f(phi, m) + 2 * big_k).epsilon(1e-14));
  }
  CHECK_THROWS_AS(incomplete_elliptic_f(std::nan(""), m), ConfigError);
}

TEST_CASE("jacobi: origin and circular limit") {
  const auto m05 = EllipticModulusSquared::from_parameter(0.5);
  const JacobiTriple at0 = jacobi_elliptic(0.0, m05);
  CHECK(at0.sn == 0.0);
  CHECK(at0.cn == 1.0);
  CHECK(at0.dn == 1.0);

  const auto m0 = EllipticModulusSquared::from_parameter(0.0);
  for (double u : {-3.0, 0.4, 11.0}) {
    const JacobiTriple j = jacobi_elliptic(u, m0);
    CHECK(j.sn == doctest::Approx(std::sin(u)).epsilon(1e-15));
    CHECK(j.cn == doctest::Approx(std::cos(u)).epsilon(1e-15));
    CHECK(j.dn == 1.0);
  }
}

TEST_CASE("jacobi at u=1, m=0.5: frozen values and F-inversion oracle") {
  const auto m05 = EllipticModulusSquared::from_parameter(0.5);
  const JacobiTriple j = jacobi_elliptic(1.0, m05);
  CHECK(j.sn == doctest::Approx(0.80300182489564389).epsilon(1e-14));
  CHECK(j.cn == doctest::Approx(0.59597656767214067).epsilon(1e-14));
  CHECK(j.dn == doctest::Approx(0.82316100163159627).epsilon(1e-14));

  // Invert F by root-finding: phi* with F(phi*) = 1, then sn = sin(phi*).
  const double phi_star = oracles::bisect(
      [&](double phi) { return incomplete_elliptic_f(phi, m05) - 1.0; }, 0.0, kPi / 2);
  CHECK(std::abs(j.sn - std::sin(phi_star)) < 1e-12);
  CHECK(std::abs(j.cn - std::cos(phi_star)) < 1e-12);
}

TEST_CASE("algebraic identities on the acceptance grid") {
  double worst_sc = 0.0, worst_dn = 0.0;
  for (double m : kMSet) {
    const auto mod = EllipticModulusSquared::from_parameter(m);
    for (int i = 0; i < 10000; ++i) {
      const double u = -20.0 + 40.0 * i / 9999.0;
      const JacobiTriple j = jacobi_elliptic(u, mod);
      worst_sc = std::max(worst_sc, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
      worst_dn = std::max(worst_dn, std::abs(j.dn * j.dn + m * j.sn * j.sn - 1.0));
    }
  }
  CHECK(worst_sc < 1e-11);
  CHECK(worst_dn < 1e-11);
}

TEST_CASE("periodicity: sn by 4K, dn by 2K") {
  for (double m : {0.1, 0.5, 0.9, 0.99}) {
    const auto mod = EllipticModulusSquared::from_parameter(m);
    const double big_k = complete_elliptic_k(mod);
    double worst_sn = 0.0, worst_dn = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const double u = -20.0 + 40.0 * i / 1999.0;
      worst_sn = std::max(worst_sn, std::abs(jacobi_elliptic(u + 4 * big_k, mod).sn -
                                             jacobi_elliptic(u, mod).sn));
      worst_dn = std::max(worst_dn, std::abs(jacobi_elliptic(u + 2 * big_k, mod).dn -
                                             jacobi_elliptic(u, mod).dn));
    }
    CHECK(worst_sn < 1e-10);
    CHECK(worst_dn < 1e-10);
  }
}

TEST_CASE("parity in u") {
  auto gen = oracles::rng(1);
  std::uniform_real_distribution<double> uu(-15.0, 15.0), um(0.0, 0.99);
  for (int i = 0; i < 500; ++i) {
    const auto mod = EllipticModulusSquared::from_parameter(um(gen));
    const double u = uu(gen);
    const JacobiTriple p = jacobi_elliptic(u, mod);
    const JacobiTriple n = jacobi_elliptic(-u, mod);
    CHECK(std::abs(p.sn + n.sn) < 1e-12);
    CHECK(std::abs(p.cn - n.cn) < 1e-12);
    CHECK(std::abs(p.dn - n.dn) < 1e-12);
  }
}

TEST_CASE("inverse relation sn(F(phi)) = sin(phi)") {
  double worst = 0.0;
  for (double m : kMSet) {
    const auto mod = EllipticModulusSquared::from_parameter(m);
    for (int i = 0; i <= 400; ++i) {
      const double phi = -kPi / 2 + kPi * i / 400.0;
      const double u = incomplete_elliptic_f(phi, mod);
      worst = std::max(worst, std::abs(jacobi_elliptic(u, mod).sn - std::sin(phi)));
    }
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("derivative identity d(sn)/du = cn dn") {
  const double h = 1e-5;
  for (double m : {0.15, 0.5, 0.85}) {
    const auto mod = EllipticModulusSquared::from_parameter(m);
    double worst = 0.0;
    for (int i = 0; i <= 300; ++i) {
      const double u = -6.0 + 12.0 * i / 300.0;
      const double d = oracles::d1_central(
          [&](double x) { return jacobi_elliptic(x, mod).sn; }, u, h);
      const JacobiTriple j = jacobi_elliptic(u, mod);
      worst = std::max(worst, std::abs(d - j.cn * j.dn));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("hyperbolic limit near m = 1") {
  const auto mod = EllipticModulusSquared::from_complement(1e-13);
  for (double u : {-2.0, 0.3, 1.7}) {
    const JacobiTriple j = jacobi_elliptic(u, mod);
    CHECK(j.sn == doctest::Approx(std::tanh(u)).epsilon(1e-12));
    CHECK(j.cn == doctest::Approx(1.0 / std::cosh(u)).epsilon(1e-12));
    CHECK(j.dn == doctest::Approx(1.0 / std::cosh(u)).epsilon(1e-12));
  }
}
