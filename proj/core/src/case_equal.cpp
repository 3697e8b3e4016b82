#include "capgrav/case_equal.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "capgrav/detail/prefactors.hpp"
#include "capgrav/errors.hpp"
#include "capgrav/ode.hpp"

namespace capgrav {
namespace {

// Relative width of the band around |c| = a^2 treated as the separatrix
// boundary: inside it the elliptic parameter would be 1 to rounding and
// the closed form is numerically meaningless.
constexpr double kBoundaryBand = 1e-12;

ComponentRegime classify_component(double c, double a_sq, bool vertical) {
  const double band = kBoundaryBand * a_sq;
  if (c - a_sq >= -band) return ComponentRegime::c_minus_a2_positive;
  if (vertical) {
    // The vertical closed form lives at c + a^2 < 0; the boundary itself
    // (separatrix) is folded into both_negative and served by the
    // hyperbolic limit of the elliptic functions.
    if (c + a_sq > band) return ComponentRegime::mixed;
    return ComponentRegime::both_negative;
  }
  if (c + a_sq >= 0.0) return ComponentRegime::mixed;
  return ComponentRegime::both_negative;
}

void fill_moduli(CaseIConstants& k) {
  const RegimeTag tag = regime_classify(k);
  if (tag.x_regime == ComponentRegime::mixed) {
    const double mc1 = (k.a_sq - k.c1) / (2.0 * k.a_sq);
    if (mc1 > 0.0 && mc1 <= 1.0) k.m1 = EllipticModulusSquared::from_complement(mc1);
  }
  if (tag.z_regime == ComponentRegime::both_negative && !k.m2) {
    const double mc2 = -(k.c2 + k.a_sq) / (k.a_sq - k.c2);
    if (mc2 > 0.0 && mc2 <= 1.0) k.m2 = EllipticModulusSquared::from_complement(mc2);
  }
}

}  // namespace

double a_squared(const WaveParameters& wp) {
  const double kd = kTwoPi * wp.delta();
  const double alpha = kTwoPi * wp.c() * detail::x_over_sinh(kd);
  return 0.5 * alpha * alpha;
}

CaseIConstants first_integral_constants(double X0, double Z0, const WaveParameters& wp) {
  if (!wp.equal_case()) {
    throw WrongCaseError("first_integral_constants: requires c0 = c (Case I)");
  }
  if (!(Z0 >= 0.0)) throw ConfigError("first_integral_constants: Z0 must be >= 0");

  CaseIConstants k;
  k.a_sq = a_squared(wp);
  const double alpha = std::sqrt(2.0 * k.a_sq);
  const double xdot0 = alpha * std::cosh(Z0) * std::cos(X0);
  const double zdot0 = alpha * std::sinh(Z0) * std::sin(X0);
  k.c1 = xdot0 * xdot0 - k.a_sq * std::cos(2.0 * X0);
  k.c2 = zdot0 * zdot0 - k.a_sq * std::cosh(2.0 * Z0);

  // m2 complement computed from q = cos^2(X0) sinh^2(Z0) directly: the
  // algebraic form -(c2+a^2)/(a^2-c2) equals q/(1+q) but loses all digits
  // when q is tiny (the separatrix boundary).
  const double cq = std::cos(X0) * std::sinh(Z0);
  const double q = cq * cq;
  if (q > 0.0) {
    k.m2 = EllipticModulusSquared::from_complement(q / (1.0 + q));
  }

  const double y0 = std::tan(X0);
  k.sign_x = (y0 > 0.0 || (y0 == 0.0 && xdot0 >= 0.0)) ? +1 : -1;
  k.sign_z = +1;  // Z0 >= 0

  fill_moduli(k);
  if (k.m2 && Z0 > 0.0) {
    k.t0_z = fit_z_offset(k, std::tanh(Z0), /*wdot_negative=*/std::sin(X0) < 0.0);
  }
  if (k.m1) {
    k.t0_x = fit_x_offset(k, y0, /*ydot_negative=*/xdot0 < 0.0);
  }
  return k;
}

CaseIConstants case1_constants(double a_sq, double c1, double c2) {
  if (!(a_sq > 0.0)) throw ConfigError("case1_constants: a_sq must be > 0");
  CaseIConstants k;
  k.a_sq = a_sq;
  k.c1 = c1;
  k.c2 = c2;
  fill_moduli(k);
  return k;
}

RegimeTag regime_classify(const CaseIConstants& k) {
  return {classify_component(k.c1, k.a_sq, false),
          classify_component(k.c2, k.a_sq, true)};
}

double fit_x_offset(const CaseIConstants& k, double y0, bool ydot_negative) {
  if (!regime_classify(k).x_closed_form() || !k.m1) {
    throw RegimeUnsupportedError(
        "fit_x_offset: horizontal closed form requires the mixed regime");
  }
  const double amp = std::sqrt((k.a_sq + k.c1) / (k.a_sq - k.c1));
  const double q = y0 / (k.sign_x * amp);
  if (!(q >= -1.0 - 1e-12 && q <= 1.0 + 1e-12)) {
    throw ConfigError("fit_x_offset: y0 exceeds the cn amplitude");
  }
  const double v0 = incomplete_elliptic_f(std::acos(std::clamp(q, -1.0, 1.0)), *k.m1);
  const double rate = std::sqrt(2.0 * k.a_sq);
  const double sigma = ydot_negative ? -1.0 : 1.0;
  return k.sign_x * sigma * v0 / rate;
}

double fit_z_offset(const CaseIConstants& k, double w0, bool wdot_negative) {
  if (!regime_classify(k).z_closed_form() || !k.m2) {
    throw RegimeUnsupportedError(
        "fit_z_offset: vertical closed form requires the both-negative regime");
  }
  const double qv = w0 / k.sign_z;
  const double m2 = k.m2->m();
  const double mc2 = k.m2->complement();
  if (!(qv <= 1.0 + 1e-12 && qv * qv >= mc2 - 1e-12)) {
    throw ConfigError("fit_z_offset: w0 outside the dn range for these constants");
  }
  double sn_sq = (1.0 - qv) * (1.0 + qv) / std::max(m2, 1e-300);
  sn_sq = std::clamp(sn_sq, 0.0, 1.0);
  const double v0 = incomplete_elliptic_f(std::asin(std::sqrt(sn_sq)), *k.m2);
  const double beta = std::sqrt(k.a_sq - k.c2);
  const double sigma = wdot_negative ? -1.0 : 1.0;
  return k.sign_z * sigma * v0 / beta;
}

double y_exact(double t, const CaseIConstants& k) {
  if (!regime_classify(k).x_closed_form() || !k.m1) {
    throw RegimeUnsupportedError(
        "y_exact: regime without closed form; integrate the scalar equation instead");
  }
  const double amp = std::sqrt((k.a_sq + k.c1) / (k.a_sq - k.c1));
  const double u = std::sqrt(2.0 * k.a_sq) * (t - k.t0_x);
  return k.sign_x * amp * jacobi_elliptic(u, *k.m1).cn;
}

double w_exact(double t, const CaseIConstants& k) {
  if (!regime_classify(k).z_closed_form() || !k.m2) {
    throw RegimeUnsupportedError(
        "w_exact: regime without closed form; integrate the scalar equation instead");
  }
  const double beta = std::sqrt(k.a_sq - k.c2);
  const JacobiTriple j = jacobi_elliptic(beta * (t - k.t0_z), *k.m2);
  // 1 - m sn^2 rewritten as cn^2 + (1 - m) sn^2: no cancellation near m = 1.
  const double w = std::sqrt(j.cn * j.cn + k.m2->complement() * j.sn * j.sn);
  return k.sign_z * w;
}

double x_period(const CaseIConstants& k) {
  if (!k.m1) throw RegimeUnsupportedError("x_period: no horizontal closed form");
  return 4.0 * complete_elliptic_k(*k.m1) / std::sqrt(2.0 * k.a_sq);
}

double z_period(const CaseIConstants& k) {
  if (!k.m2) throw RegimeUnsupportedError("z_period: no vertical closed form");
  return 2.0 * complete_elliptic_k(*k.m2) / std::sqrt(k.a_sq - k.c2);
}

namespace {

// Dense solution of a decoupled scalar second-order equation
// q'' = force(q), integrated over [t_lo, t_hi] containing 0 with initial
// data (q0, qdot0) at t = 0.
class ScalarPendulum {
 public:
  ScalarPendulum(std::function<double(double)> force, double q0, double qdot0,
                 double t_lo, double t_hi, const IntegratorConfig& cfg) {
    const auto rhs = [f = std::move(force)](double, std::span<const double> y,
                                            std::span<double> dydt) {
      dydt[0] = y[1];
      dydt[1] = f(y[0]);
    };
    ode::Options opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.max_step = cfg.max_step;
    const double y0[2] = {q0, qdot0};
    if (t_hi > 0.0) {
      forward_ = std::make_shared<ode::DenseSolution>(
          ode::integrate(rhs, y0, 0.0, t_hi, opts).dense);
    }
    if (t_lo < 0.0) {
      backward_ = std::make_shared<ode::DenseSolution>(
          ode::integrate(rhs, y0, 0.0, t_lo, opts).dense);
    }
    q0_ = q0;
  }

  double operator()(double t) const {
    if (t == 0.0) return q0_;
    const auto& sol = (t > 0.0) ? forward_ : backward_;
    if (!sol) throw std::out_of_range("scalar solution: t outside integrated range");
    double y[2];
    sol->evaluate(t, y);
    return y[0];
  }

 private:
  std::shared_ptr<ode::DenseSolution> forward_;
  std::shared_ptr<ode::DenseSolution> backward_;
  double q0_ = 0.0;
};

}  // namespace

Trajectory trajectory_case1(double x0, double z0, std::span<const double> t_grid,
                            const WaveParameters& wp, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!wp.equal_case()) throw WrongCaseError("trajectory_case1: requires c0 = c");
  if (wp.wave_scale() != 1.0) {
    throw ConfigError("trajectory_case1: closed forms assume wave_scale == 1");
  }
  if (!(z0 >= 0.0 && z0 <= 1.0)) throw ConfigError("trajectory_case1: z0 must lie in [0, 1]");
  if (t_grid.empty()) throw ConfigError("trajectory_case1: empty t_grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw ConfigError("trajectory_case1: t_grid must be strictly increasing");
    }
  }

  const double X0 = kTwoPi * x0;
  const double Z0 = kTwoPi * wp.delta() * z0;
  const double two_pi_delta = kTwoPi * wp.delta();
  const double c = wp.c();

  const CaseIConstants k = first_integral_constants(X0, Z0, wp);
  const RegimeTag regime = regime_classify(k);
  const double alpha = std::sqrt(2.0 * k.a_sq);

  TrajectoryMeta meta(wp);
  meta.method = TrajectoryMethod::exact_case1;

  // Vertical component.
  std::function<double(double)> z_at;
  if (z0 == 0.0) {
    z_at = [](double) { return 0.0; };
    meta.z_closed_form = true;
    meta.warnings.push_back("bed particle: z == 0 for all time");
  } else if (regime.z_closed_form() && k.m2) {
    z_at = [k, two_pi_delta](double t) {
      return std::atanh(w_exact(t, k)) / two_pi_delta;
    };
    meta.z_closed_form = true;
  } else {
    // Not reachable from physical initial data; kept for free-standing
    // constants fed through non-physical states.
    const double zdot0 = alpha * std::sinh(Z0) * std::sin(X0);
    auto pend = std::make_shared<ScalarPendulum>(
        [a2 = k.a_sq](double Z) { return a2 * std::sinh(2.0 * Z); }, Z0, zdot0,
        std::min(0.0, t_grid.front()), std::max(0.0, t_grid.back()), cfg);
    z_at = [pend, two_pi_delta](double t) { return (*pend)(t) / two_pi_delta; };
    meta.warnings.push_back("vertical component: no closed form; adaptive integration used");
  }

  // Horizontal component.
  std::function<double(double)> x_at;
  if (regime.x_closed_form() && k.m1) {
    x_at = [k, c](double t) {
      return c * t + std::atan(y_exact(t, k)) / kTwoPi;
    };
    meta.x_closed_form = true;
  } else {
    const double xdot0 = alpha * std::cosh(Z0) * std::cos(X0);
    auto pend = std::make_shared<ScalarPendulum>(
        [a2 = k.a_sq](double X) { return -a2 * std::sin(2.0 * X); }, X0, xdot0,
        std::min(0.0, t_grid.front()), std::max(0.0, t_grid.back()), cfg);
    x_at = [pend, c](double t) { return c * t + (*pend)(t) / kTwoPi; };
    meta.warnings.push_back(
        "horizontal component: c1 >= a^2 regime has no published closed form; "
        "adaptive integration of the decoupled scalar equation used");
  }

  std::vector<ParticleState> samples;
  samples.reserve(t_grid.size());
  bool left_strip = false;
  for (double t : t_grid) {
    const double z = z_at(t);
    if (!(z >= 0.0 && z <= 1.0)) left_strip = true;
    samples.push_back({x_at(t), z, t});
  }
  if (left_strip) {
    meta.warnings.push_back(
        "particle left the physical strip z in [0, 1] (the vertical closed form "
        "diverges at its period points)");
  }

  Trajectory::DenseFn dense = [x_at, z_at](double t) -> ParticleState {
    return {x_at(t), z_at(t), t};
  };
  return Trajectory(Frame::lab, std::move(meta), std::move(samples), std::move(dense));
}

}  // namespace capgrav
