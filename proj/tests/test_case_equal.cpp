#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "capgrav/case_equal.hpp"
#include "capgrav/dynamics.hpp"
#include "capgrav/elliptic.hpp"
#include "capgrav/errors.hpp"
#include "capgrav/ode.hpp"
#include "oracles.hpp"

using namespace capgrav;

namespace {

// Free-constant sets in the closed-form regimes (they do not arise from
// coupled physical initial data, so they are constructed directly).
std::vector<CaseIConstants> mixed_sets() {
  std::vector<CaseIConstants> out;
  for (double c1 : {-0.5, -0.2, 0.0, 0.3, 0.7}) {
    CaseIConstants k = case1_constants(1.0, c1, -2.0);
    const double amp = std::sqrt((1.0 + c1) / (1.0 - c1));
    k.t0_x = fit_x_offset(k, 0.3 * amp, /*ydot_negative=*/false);
    out.push_back(k);
  }
  return out;
}

std::vector<CaseIConstants> vertical_sets() {
  std::vector<CaseIConstants> out;
  for (double c2 : {-1.5, -2.0, -3.0, -5.0, -10.0}) {
    CaseIConstants k = case1_constants(1.0, 2.0, c2);
    const double w_floor = std::sqrt(1.0 - k.m2->m());
    k.t0_z = fit_z_offset(k, 0.5 * (w_floor + 1.0), /*wdot_negative=*/true);
    out.push_back(k);
  }
  return out;
}

}  // namespace

TEST_CASE("a_squared") {
  const WaveParameters wp = WaveParameters::make_equal_current(0.2, 0.0);
  // frozen 40-digit evaluation of 8 pi^4 delta^2 c^2 / sinh^2(2 pi delta)
  CHECK(a_squared(wp) == doctest::Approx(8.0901670933202996).epsilon(1e-14));

  // equals half the square of the moving-frame prefactor
  const double kd = kTwoPi * wp.delta();
  const double alpha = kTwoPi * wp.c() * kd / std::sinh(kd);
  CHECK(a_squared(wp) == doctest::Approx(0.5 * alpha * alpha).epsilon(1e-13));

  // scales as c^2 at fixed delta
  const WaveParameters wp2 = WaveParameters::make_equal_current(0.2, 1.5);
  const double ratio = a_squared(wp2) / a_squared(wp);
  CHECK(ratio == doctest::Approx((wp2.c() * wp2.c()) / (wp.c() * wp.c())).epsilon(1e-13));
}

TEST_CASE("first integral constants") {
  const WaveParameters wp = WaveParameters::make_equal_current(0.8, 0.3);
  const double a2 = a_squared(wp);

  SUBCASE("bed release: c1 = a^2, c2 = -a^2") {
    const CaseIConstants k = first_integral_constants(0.7, 0.0, wp);
    CHECK(k.c1 == doctest::Approx(a2).epsilon(1e-12));
    CHECK(k.c2 == doctest::Approx(-a2).epsilon(1e-12));
  }

  SUBCASE("X0 = pi/2 release: horizontal velocity vanishes, c1 = a^2") {
    const CaseIConstants k = first_integral_constants(kPi / 2, 0.9, wp);
    CHECK(std::abs(k.c1 - a2) < 1e-10);
  }

  SUBCASE("c1 + c2 = 0 and the c1 identity on random states") {
    auto gen = oracles::rng(31);
    std::uniform_real_distribution<double> uX(-3.0, 3.0), uZ(0.0, 2.5);
    for (int i = 0; i < 1000; ++i) {
      const double X0 = uX(gen), Z0 = uZ(gen);
      const CaseIConstants k = first_integral_constants(X0, Z0, wp);
      CHECK(std::abs(k.c1 + k.c2) < 1e-10);
      const double q = std::cos(X0) * std::sinh(Z0);
      CHECK(std::abs(k.c1 - a2 * (1.0 + 2.0 * q * q)) < 1e-10);
    }
  }

  SUBCASE("wrong case and bad Z0") {
    const WaveParameters general = WaveParameters::make(0.8, 0.3, 0.1);
    CHECK_THROWS_AS(first_integral_constants(0.0, 0.5, general), WrongCaseError);
    CHECK_THROWS_AS(first_integral_constants(0.0, -0.5, wp), ConfigError);
  }
}

TEST_CASE("regime classification") {
  // c1 = 0 < a^2: mixed (supports the horizontal closed form)
  CHECK(regime_classify(case1_constants(1.0, 0.0, -2.0)).x_regime ==
        ComponentRegime::mixed);

  // physical data: c1 > a^2 (deferred closed form)
  const WaveParameters wp = WaveParameters::make_equal_current(0.9, 0.0);
  const CaseIConstants phys = first_integral_constants(0.5, 0.8, wp);
  CHECK(regime_classify(phys).x_regime == ComponentRegime::c_minus_a2_positive);
  CHECK_FALSE(regime_classify(phys).x_closed_form());
  CHECK(regime_classify(phys).z_closed_form());

  // c2 = -2 a^2: both negative, m2 = 2/3
  const CaseIConstants k = case1_constants(1.0, 2.0, -2.0);
  CHECK(regime_classify(k).z_regime == ComponentRegime::both_negative);
  REQUIRE(k.m2.has_value());
  CHECK(k.m2->m() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("y_exact") {
  SUBCASE("value at the offset and the m1 -> 0 amplitude limit") {
    for (const CaseIConstants& k : mixed_sets()) {
      const double amp = std::sqrt((k.a_sq + k.c1) / (k.a_sq - k.c1));
      CHECK(y_exact(k.t0_x, k) == doctest::Approx(k.sign_x * amp).epsilon(1e-12));
    }
    const CaseIConstants tiny = case1_constants(1.0, -1.0 + 1e-10, -2.0);
    CHECK(std::abs(y_exact(0.4, tiny)) < 1e-4);  // amplitude -> 0 as c1 -> -a^2
  }

  SUBCASE("scalar equation residual along a time grid") {
    for (const CaseIConstants& k : mixed_sets()) {
      const double rate = std::sqrt(2.0 * k.a_sq);
      const double amp = std::sqrt((k.a_sq + k.c1) / (k.a_sq - k.c1));
      double worst_identity = 0.0, worst_fd = 0.0;
      for (int i = 0; i <= 300; ++i) {
        const double t = -2.0 + 7.0 * i / 300.0;
        // derivative from the cn identity
        const JacobiTriple j = jacobi_elliptic(rate * (t - k.t0_x), *k.m1);
        const double y = k.sign_x * amp * j.cn;
        const double ydot = -k.sign_x * amp * rate * j.sn * j.dn;
        const double w = 1.0 + y * y;
        worst_identity = std::max(
            worst_identity,
            std::abs(ydot * ydot - k.a_sq * (1.0 - y * y * y * y) - k.c1 * w * w));
        // derivative from finite differences
        const double ydot_fd = oracles::d1_fourth(
            [&](double s) { return y_exact(s, k); }, t, 1e-4);
        const double res_fd =
            ydot_fd * ydot_fd - k.a_sq * (1.0 - y * y * y * y) - k.c1 * w * w;
        worst_fd = std::max(worst_fd, std::abs(res_fd));
      }
      CHECK(worst_identity < 1e-8);
      CHECK(worst_fd < 1e-8);
    }
  }

  SUBCASE("unsupported regime raises") {
    const CaseIConstants above = case1_constants(1.0, 1.5, -2.0);
    CHECK_THROWS_AS(y_exact(0.0, above), RegimeUnsupportedError);
  }
}

TEST_CASE("w_exact") {
  SUBCASE("offset value and the quarter-period value") {
    for (const CaseIConstants& k : vertical_sets()) {
      CHECK(w_exact(k.t0_z, k) == doctest::Approx(k.sign_z * 1.0).epsilon(1e-12));
      const double beta = std::sqrt(k.a_sq - k.c2);
      const double quarter = complete_elliptic_k(*k.m2) / beta;
      CHECK(w_exact(k.t0_z + quarter, k) ==
            doctest::Approx(k.sign_z * std::sqrt(1.0 - k.m2->m())).epsilon(1e-12));
    }
  }

  SUBCASE("equals the dn closed form") {
    for (const CaseIConstants& k : vertical_sets()) {
      const double beta = std::sqrt(k.a_sq - k.c2);
      for (int i = 0; i <= 100; ++i) {
        const double t = -1.0 + 4.0 * i / 100.0;
        const double dn = jacobi_elliptic(beta * (t - k.t0_z), *k.m2).dn;
        CHECK(std::abs(w_exact(t, k) - k.sign_z * dn) < 1e-12);
      }
    }
  }

  SUBCASE("scalar equation residual along a time grid") {
    for (const CaseIConstants& k : vertical_sets()) {
      const double beta = std::sqrt(k.a_sq - k.c2);
      const double m2 = k.m2->m();
      double worst = 0.0, worst_fd = 0.0;
      for (int i = 0; i <= 300; ++i) {
        const double t = -2.0 + 7.0 * i / 300.0;
        const JacobiTriple j = jacobi_elliptic(beta * (t - k.t0_z), *k.m2);
        const double w = w_exact(t, k);
        const double wdot = -k.sign_z * m2 * beta * j.sn * j.cn;  // (dn)' = -m sn cn
        const double q = 1.0 - w * w;
        worst = std::max(worst, std::abs(wdot * wdot - k.a_sq * (1.0 - w * w * w * w) -
                                         k.c2 * q * q));
        const double wdot_fd = oracles::d1_fourth(
            [&](double s) { return w_exact(s, k); }, t, 1e-4);
        worst_fd = std::max(worst_fd, std::abs(wdot_fd * wdot_fd -
                                               k.a_sq * (1.0 - w * w * w * w) -
                                               k.c2 * q * q));
      }
      CHECK(worst < 1e-8);
      CHECK(worst_fd < 1e-7);  // fd differentiation noise dominates
    }
  }

  SUBCASE("unsupported regime raises") {
    const CaseIConstants mixed_z = case1_constants(1.0, 0.0, -0.5);
    CHECK_THROWS_AS(w_exact(0.0, mixed_z), RegimeUnsupportedError);
  }
}

TEST_CASE("second-derivative form of the moving-frame equations") {
  // X(t) = arctan y(t) satisfies X'' = -a^2 sin(2X); Z(t) = arctanh w(t)
  // satisfies Z'' = +a^2 sinh(2Z).
  const double h = 1e-4;
  for (const CaseIConstants& k : mixed_sets()) {
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.3 + 3.0 * i / 100.0;
      const auto X = [&](double s) { return std::atan(y_exact(s, k)); };
      const double xdd = oracles::d2_fourth(X, t, h);
      worst = std::max(worst, std::abs(xdd + k.a_sq * std::sin(2.0 * X(t))));
    }
    CHECK(worst < 1e-6);
  }
  for (const CaseIConstants& k : vertical_sets()) {
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.3 + 3.0 * i / 100.0;
      const double w = std::abs(w_exact(t, k));
      // Keep clear of the arctanh blow-up: near |w| = 1 the 1/(1-w^2)
      // amplification lifts the h^-2 rounding floor above the tolerance.
      if (w > 0.9) continue;
      const auto Z = [&](double s) { return std::atanh(w_exact(s, k)); };
      const double zdd = oracles::d2_fourth(Z, t, h);
      worst = std::max(worst, std::abs(zdd - k.a_sq * std::sinh(2.0 * Z(t))));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("closed forms against the adaptive scalar oracle") {
  ode::Options opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-14;
  opts.max_step = 0.05;

  SUBCASE("horizontal") {
    for (const CaseIConstants& k : mixed_sets()) {
      const auto rhs = [&k](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = -2.0 * k.a_sq * std::pow(y[0], 3) + 2.0 * k.c1 * y[0] * (1.0 + y[0] * y[0]);
      };
      const double rate = std::sqrt(2.0 * k.a_sq);
      const double amp = std::sqrt((k.a_sq + k.c1) / (k.a_sq - k.c1));
      const JacobiTriple j0 = jacobi_elliptic(rate * (0.0 - k.t0_x), *k.m1);
      const double y0[2] = {k.sign_x * amp * j0.cn, -k.sign_x * amp * rate * j0.sn * j0.dn};
      const ode::Result r = ode::integrate(rhs, y0, 0.0, 5.0, opts);
      double worst = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double t = 5.0 * i / 400.0;
        worst = std::max(worst, std::abs(r.dense.evaluate(t)[0] - y_exact(t, k)));
      }
      CHECK(worst < 1e-8);
    }
  }

  SUBCASE("vertical") {
    for (const CaseIConstants& k : vertical_sets()) {
      const auto rhs = [&k](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = -2.0 * k.a_sq * std::pow(y[0], 3) - 2.0 * k.c2 * y[0] * (1.0 - y[0] * y[0]);
      };
      const double beta = std::sqrt(k.a_sq - k.c2);
      const JacobiTriple j0 = jacobi_elliptic(beta * (0.0 - k.t0_z), *k.m2);
      const double w0 = k.sign_z * std::sqrt(j0.cn * j0.cn + k.m2->complement() * j0.sn * j0.sn);
      const double y0[2] = {w0, -k.sign_z * k.m2->m() * beta * j0.sn * j0.cn};
      const ode::Result r = ode::integrate(rhs, y0, 0.0, 5.0, opts);
      double worst = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double t = 5.0 * i / 400.0;
        worst = std::max(worst, std::abs(r.dense.evaluate(t)[0] - w_exact(t, k)));
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("periods and drift") {
  SUBCASE("horizontal: x drifts by exactly c * period") {
    for (const CaseIConstants& k : mixed_sets()) {
      const double period = x_period(k);
      // x(t) - c t = arctan(y)/(2 pi) must be period-periodic.
      double worst = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double t = 2.0 * i / 40.0;
        worst = std::max(worst, std::abs(std::atan(y_exact(t + period, k)) -
                                         std::atan(y_exact(t, k))) / kTwoPi);
      }
      CHECK(worst < 1e-8);
    }
  }

  SUBCASE("vertical: w is periodic with 2K(m2)/beta") {
    for (const CaseIConstants& k : vertical_sets()) {
      const double period = z_period(k);
      double worst = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double t = 2.0 * i / 40.0;
        worst = std::max(worst, std::abs(w_exact(t + period, k) - w_exact(t, k)));
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("trajectory_case1") {
  const WaveParameters wp = WaveParameters::make_equal_current(1.2, 0.0);

  SUBCASE("reproduces the initial data at t = 0") {
    std::vector<double> grid{0.0, 0.5, 1.0};
    const Trajectory tr = trajectory_case1(0.12, 0.2, grid, wp);
    CHECK(std::abs(tr.samples()[0].x - 0.12) < 1e-10);
    CHECK(std::abs(tr.samples()[0].z - 0.2) < 1e-10);
    CHECK(tr.meta().method == TrajectoryMethod::exact_case1);
    CHECK(tr.meta().z_closed_form);
    CHECK_FALSE(tr.meta().x_closed_form);  // c1 >= a^2: deferred, numeric fallback
  }

  SUBCASE("matches the coupled system") {
    std::vector<double> grid;
    for (int i = 0; i <= 250; ++i) grid.push_back(5.0 * i / 250.0);
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-13;
    const Trajectory exact = trajectory_case1(0.12, 0.2, grid, wp, cfg);
    const Trajectory numeric = integrate({0.12, 0.2, 0.0}, 5.0, wp, cfg, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max({worst, std::abs(exact.samples()[i].x - numeric.samples()[i].x),
                        std::abs(exact.samples()[i].z - numeric.samples()[i].z)});
    }
    CHECK(worst < 1e-7);
  }

  SUBCASE("vertical closed form is periodic along the trajectory") {
    // The vertical period is long at this delta (slow forcing); the dense
    // window must span it, which the decoupled horizontal integration
    // handles cheaply.
    const CaseIConstants k =
        first_integral_constants(kTwoPi * 0.12, kTwoPi * wp.delta() * 0.2, wp);
    const double period = z_period(k);
    std::vector<double> grid{0.0, period + 2.1};
    const Trajectory tr = trajectory_case1(0.12, 0.2, grid, wp);
    for (double t : {0.1, 0.7, 1.9}) {
      CHECK(std::abs(tr.at(t + period).z - tr.at(t).z) < 1e-9);
    }
  }

  SUBCASE("bed particle") {
    std::vector<double> grid{0.0, 1.0, 2.0};
    const Trajectory tr = trajectory_case1(0.3, 0.0, grid, wp);
    for (const ParticleState& s : tr.samples()) CHECK(s.z == 0.0);
    CHECK(tr.samples()[2].x != tr.samples()[0].x);  // still advected
  }

  SUBCASE("errors") {
    std::vector<double> grid{0.0, 1.0};
    const WaveParameters general = WaveParameters::make(1.2, 0.0, 0.1);
    CHECK_THROWS_AS(trajectory_case1(0.0, 0.5, grid, general), WrongCaseError);
    CHECK_THROWS_AS(trajectory_case1(0.0, 1.5, grid, wp), ConfigError);
    CHECK_THROWS_AS(trajectory_case1(0.0, 0.5, {}, wp), ConfigError);
    const std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS_AS(trajectory_case1(0.0, 0.5, bad, wp), ConfigError);
  }
}

TEST_CASE("offset fitting contracts") {
  auto gen = oracles::rng(33);
  std::uniform_real_distribution<double> uc(-0.9, 0.9), uy(-0.95, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    const double c1 = uc(gen);
    CaseIConstants k = case1_constants(1.0, c1, -2.0);
    const double amp = std::sqrt((1.0 + c1) / (1.0 - c1));
    const double y0 = uy(gen) * amp;
    k.sign_x = (y0 > 0.0 || (y0 == 0.0)) ? +1 : -1;
    const bool downward = trial % 2 == 0;
    k.t0_x = fit_x_offset(k, y0, downward);
    CHECK(std::abs(y_exact(0.0, k) - y0) < 1e-10);
    const double slope = oracles::d1_central([&](double s) { return y_exact(s, k); },
                                             0.0, 1e-6);
    if (std::abs(y0) < 0.999 * amp) {
      CHECK((downward ? slope <= 1e-9 : slope >= -1e-9));
    }
  }
}
