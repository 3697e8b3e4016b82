#include "capgrav/case_general.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "capgrav/case_equal.hpp"
#include "capgrav/errors.hpp"
#include "capgrav/quadrature.hpp"
#include "capgrav/roots.hpp"

namespace capgrav {
namespace {

constexpr double kBlowupCap = 40.0;  // theta excursion treated as blow-up

double chart_exit_theta(const CaseIIConstants& k) {
  // L(theta) = C - b (ln alpha + theta) vanishes here (X -> +-pi/2).
  return (k.C - k.b * std::log(k.alpha)) / k.b;
}

double upper_limit(const CaseIIConstants& k, double from) {
  double lim = k.theta0 + kBlowupCap;
  if (k.b > 0.0) lim = std::min(lim, chart_exit_theta(k));
  return std::max(lim, from);
}

double lower_limit(const CaseIIConstants& k, double from) {
  double lim = 0.0;
  if (k.b < 0.0) lim = std::max(lim, chart_exit_theta(k));
  return std::min(lim, from);
}

struct BranchEnd {
  double theta;
  bool turning;  // endpoint is a root of the branch radicand
};

// March from `from` in direction dir until the branch radicand changes
// sign or the limit is reached; polish roots with Brent. Steps off the
// starting point first so that a turning-point start is not rediscovered.
BranchEnd scan_branch_end(const CaseIIConstants& k, double from, int dir, double limit) {
  const auto g = [&k](double th) { return k.branch_radicand(th); };
  const double span = std::abs(limit - from);
  if (span <= 1e-14) return {from, false};
  const double eps0 = std::min(1e-9, 1e-6 * span);
  double x = from + dir * eps0;
  if (g(x) <= 0.0) return {from, true};  // no room: branch ends at the start
  const double step = span / 256.0;
  while (dir * (limit - x) > 0.0) {
    double xn = x + dir * step;
    if (dir * (xn - limit) > 0.0) xn = limit;
    if (g(xn) <= 0.0) {
      const double root = find_root(g, std::min(x, xn), std::max(x, xn));
      return {root, true};
    }
    x = xn;
  }
  return {limit, false};
}

}  // namespace

double CaseIIConstants::tau_of_theta(double theta) const {
  return alpha * std::cosh(theta);
}

double CaseIIConstants::theta_of_tau(double tau) const {
  if (!(tau >= alpha)) {
    throw ConfigError("CaseIIConstants: tau below sqrt(2 a^2) has no real theta");
  }
  return std::acosh(tau / alpha);
}

double CaseIIConstants::log_factor(double theta) const {
  return C - b * (std::log(alpha) + theta);
}

double CaseIIConstants::radical(double theta) const {
  return alpha * std::sinh(theta);
}

double CaseIIConstants::branch_radicand(double theta) const {
  // Evaluated in extended precision: near a turning point R - L cancels
  // to ~1e-9 of its operands and the quadrature nodes cluster exactly
  // there, so double rounding would cap the time quadrature near 1e-9.
  const long double r = static_cast<long double>(alpha) * std::sinh(static_cast<long double>(theta));
  const long double l = static_cast<long double>(C) -
                        static_cast<long double>(b) *
                            (std::log(static_cast<long double>(alpha)) +
                             static_cast<long double>(theta));
  return static_cast<double>((r - l) * (r + l));
}

double abel_reduction_residual(double y, double ydot, double yddot,
                               const CaseIIConstants& k) {
  const double w = 1.0 + y * y;
  return yddot - 2.0 * y * ydot * ydot / w + k.b * y * ydot + 2.0 * k.a_sq * y -
         k.b * k.b * y * w;
}

double canonical_form_residual(double u_val, double dudxi, double xi,
                               const CaseIIConstants& k) {
  return u_val * dudxi - u_val - (2.0 * k.a_sq / k.b) * std::exp(2.0 * xi / k.b) + k.b;
}

ParametricPoint parametric_solution(double tau, const CaseIIConstants& k) {
  if (!std::isfinite(tau)) throw ConfigError("parametric_solution: tau must be finite");
  const double r_sq = tau * tau - 2.0 * k.a_sq;
  if (!(r_sq > 0.0)) {
    throw ConfigError("parametric_solution: tau^2 must exceed 2 a^2");
  }
  const double r = std::sqrt(r_sq);
  const double l = k.C - k.b * std::log(std::abs(tau + r));
  if (l == 0.0) {
    throw ConfigError("parametric_solution: log factor vanishes (chart boundary)");
  }
  return {tau * l / r + k.b, -k.b * std::log(r / std::abs(l))};
}

double y_of_tau(double tau, const CaseIIConstants& k) {
  if (!std::isfinite(tau)) throw ConfigError("y_of_tau: tau must be finite");
  const double r_sq = tau * tau - 2.0 * k.a_sq;
  if (!(r_sq > 0.0)) throw ConfigError("y_of_tau: tau^2 must exceed 2 a^2");
  const double r = std::sqrt(r_sq);
  const double l = k.C - k.b * std::log(std::abs(tau + r));
  if (l == 0.0) throw ConfigError("y_of_tau: log factor vanishes (chart boundary)");
  const double radicand = (r - l) * (r + l);
  const double scale = std::max(r_sq, l * l);
  if (radicand < -1e-12 * scale) {
    throw ConfigError("y_of_tau: negative radicand (tau beyond a turning point)");
  }
  return k.sign_y0 * std::sqrt(std::max(radicand, 0.0)) / std::abs(l);
}

namespace detail {

// Fixed-rule cumulative time quadrature along one theta interval. The
// sin^2 map flattens at both ends, cancelling the inverse-square-root
// turning singularities; the composite Gauss rule uses one fixed
// subdivision so all cumulative values are samples of a single function
// (per-query rules would disagree at the 1e-8 level near turning points,
// where rounding in the fitted constants shifts the radicand root).
struct BranchClock {
  CaseIIConstants k;  // owned copy: clocks outlive any particular bridge
  double a = 0.0;     // theta at sigma = 0
  double span = 0.0;  // theta extent (positive)
  int cells = 0;
  std::vector<double> prefix;  // cumulative time at the grid nodes

  double theta_of(double sigma) const {
    const double sp = std::sin(0.5 * kPi * sigma);
    return a + span * sp * sp;
  }
  double sigma_of(double theta) const {
    const double q = std::clamp((theta - a) / span, 0.0, 1.0);
    return std::asin(std::sqrt(q)) / (0.5 * kPi);
  }
  double integrand(double sigma) const {
    const double th = theta_of(sigma);
    const double dth = span * 0.5 * kPi * std::sin(kPi * sigma);
    return dth / std::sqrt(std::max(k.branch_radicand(th), 1e-300));
  }
  double cumulative(double sigma) const {
    sigma = std::clamp(sigma, 0.0, 1.0);
    int j = std::min(static_cast<int>(sigma * cells), cells - 1);
    return prefix[j] + integrate_gauss([this](double s) { return integrand(s); },
                                       static_cast<double>(j) / cells, sigma, 1);
  }
};

}  // namespace detail

namespace {

int default_branch_cells(double span) {
  // Wide branches (the blow-up cap sits 40 units up) concentrate the
  // integrand near one end of the unit interval; scale the resolution.
  return std::min(1536, 128 + static_cast<int>(32.0 * std::abs(span)));
}

std::shared_ptr<const detail::BranchClock> make_clock(const CaseIIConstants& k,
                                                      double th_a, double th_b,
                                                      int cells) {
  auto clock = std::make_shared<detail::BranchClock>();
  clock->k = k;
  clock->a = th_a;
  clock->span = th_b - th_a;
  clock->cells = cells;
  clock->prefix.resize(cells + 1);
  clock->prefix[0] = 0.0;
  for (int j = 0; j < cells; ++j) {
    clock->prefix[j + 1] =
        clock->prefix[j] +
        integrate_gauss([&clock](double s) { return clock->integrand(s); },
                        static_cast<double>(j) / cells,
                        static_cast<double>(j + 1) / cells, 1);
  }
  return clock;
}

}  // namespace

double t_of_tau(double tau, const CaseIIConstants& k, int cells) {
  if (cells <= 0) cells = default_branch_cells(k.theta_hi - k.theta_lo);
  const double theta_t = k.theta_of_tau(tau);
  const double slack = 1e-12 * (1.0 + std::abs(k.theta_hi) + std::abs(k.theta_lo));
  if (theta_t < k.theta_lo - slack || theta_t > k.theta_hi + slack) {
    throw ConfigError("t_of_tau: tau outside the anchor branch");
  }
  if (theta_t == k.theta0) return 0.0;
  const auto clock = make_clock(k, k.theta_lo, k.theta_hi, cells);
  const double delta_t = clock->cumulative(clock->sigma_of(theta_t)) -
                         clock->cumulative(clock->sigma_of(k.theta0));
  return k.sign_y0 * delta_t;
}

CaseIIConstants fit_constants(double X0, double Z0, const WaveParameters& wp) {
  if (wp.equal_case()) {
    throw WrongCaseError("fit_constants: requires c0 != c (use the c0 = c module)");
  }
  if (wp.wave_scale() != 1.0) {
    throw ConfigError("fit_constants: closed forms assume wave_scale == 1");
  }
  if (!(Z0 > 0.0)) {
    throw RegimeUnsupportedError("fit_constants: Z0 must be positive");
  }
  if (!(std::abs(X0) < 0.5 * kPi)) {
    throw RegimeUnsupportedError(
        "fit_constants: X0 outside the principal chart (-pi/2, pi/2) of y = tan X");
  }

  CaseIIConstants k;
  k.a_sq = a_squared(wp);
  k.alpha = std::sqrt(2.0 * k.a_sq);
  k.b = kTwoPi * (wp.c0() - wp.c());

  const double cos_x = std::cos(X0);
  k.y0 = std::tan(X0);
  k.u0 = k.alpha * std::cosh(Z0) * cos_x + k.b;
  k.xi0 = -0.5 * k.b * std::log1p(k.y0 * k.y0);
  k.tau0 = k.alpha * std::cosh(Z0);
  k.theta0 = Z0;
  k.C = k.alpha * std::sinh(Z0) * cos_x + k.b * (Z0 + std::log(k.alpha));
  k.z_const = std::log(std::tanh(0.5 * Z0));

  if (k.y0 != 0.0) {
    k.sign_y0 = (k.y0 > 0.0) ? +1 : -1;
  } else {
    k.sign_y0 = (k.u0 >= 0.0) ? +1 : -1;
  }
  k.dir0 = k.sign_y0;

  const BranchEnd up = scan_branch_end(k, Z0, +1, upper_limit(k, Z0));
  const BranchEnd dn = scan_branch_end(k, Z0, -1, lower_limit(k, Z0));
  k.theta_hi = up.theta;
  k.hi_is_turning = up.turning;
  k.theta_lo = dn.theta;
  k.lo_is_turning = dn.turning;
  k.tau_hi = k.tau_of_theta(k.theta_hi);
  k.tau_lo = k.tau_of_theta(k.theta_lo);
  if (!(k.theta_lo <= k.theta0 && k.theta0 <= k.theta_hi)) {
    throw RegimeUnsupportedError("fit_constants: empty parametric branch around the anchor");
  }
  return k;
}

double TauBridge::segment_time(const Segment& s, double sigma) const {
  // Time increases along the motion, whichever way sigma runs.
  const double from = s.clock->cumulative(s.sigma_from);
  const double at = s.clock->cumulative(sigma);
  return s.t_start + ((s.sigma_to >= s.sigma_from) ? (at - from) : (from - at));
}

TauBridge::TauBridge(const CaseIIConstants& k, double t_horizon, int cells_per_segment)
    : k_(k) {
  if (!(t_horizon >= 0.0)) throw ConfigError("TauBridge: horizon must be >= 0");

  double t_cur = 0.0;
  double theta_cur = k_.theta0;
  int dir = k_.dir0;
  constexpr int kMaxSegments = 512;

  for (int seg_i = 0; seg_i < kMaxSegments; ++seg_i) {
    if (t_cur >= t_horizon && !segments_.empty()) break;

    BranchEnd end;
    if (seg_i == 0) {
      end = (dir > 0) ? BranchEnd{k_.theta_hi, k_.hi_is_turning}
                      : BranchEnd{k_.theta_lo, k_.lo_is_turning};
    } else {
      const double limit = (dir > 0) ? upper_limit(k_, theta_cur) : lower_limit(k_, theta_cur);
      end = scan_branch_end(k_, theta_cur, dir, limit);
    }

    if (end.theta == theta_cur) {
      truncated_ = true;
      diagnostic_ = (seg_i == 0)
                        ? "anchor sits at an equilibrium or isolated turning point"
                        : "motion stalls at a degenerate (tangential) turning point";
      break;
    }

    Segment s;
    s.t_start = t_cur;
    s.y_sign = dir;
    if (seg_i == 0) {
      // The anchor branch shares its clock (map and rule) with t_of_tau,
      // so the two stay mutually consistent to root-finder accuracy.
      const int cells = (cells_per_segment > 0)
                            ? cells_per_segment
                            : default_branch_cells(k_.theta_hi - k_.theta_lo);
      s.clock = make_clock(k_, k_.theta_lo, k_.theta_hi, cells);
    } else {
      const double lo = std::min(theta_cur, end.theta);
      const double hi = std::max(theta_cur, end.theta);
      const int cells = (cells_per_segment > 0) ? cells_per_segment
                                                : default_branch_cells(hi - lo);
      s.clock = make_clock(k_, lo, hi, cells);
    }
    s.sigma_from = s.clock->sigma_of(theta_cur);
    s.sigma_to = s.clock->sigma_of(end.theta);
    s.t_end = segment_time(s, s.sigma_to);
    t_cur = s.t_end;
    theta_cur = end.theta;
    segments_.push_back(std::move(s));

    if (!end.turning) {
      truncated_ = true;
      const double l_end = std::abs(k_.log_factor(end.theta));
      const double l_scale = std::abs(k_.C) + std::abs(k_.b) * (1.0 + std::abs(end.theta));
      diagnostic_ = (l_end <= 1e-9 * std::max(l_scale, 1.0))
                        ? "trajectory reaches the chart boundary X = +-pi/2; exact "
                          "evaluation truncated"
                        : "vertical coordinate exceeded the blow-up cap; exact "
                          "evaluation truncated";
      break;
    }
    dir = -dir;
  }

  if (segments_.empty() && diagnostic_.empty()) {
    truncated_ = true;
    diagnostic_ = "no representable motion from the anchor";
  }
  if (truncated_ && t_covered() >= t_horizon) {
    // The natural end of the motion lies beyond the requested horizon:
    // not a truncation from the caller's point of view.
    truncated_ = false;
    diagnostic_.clear();
  }
}

double TauBridge::t_covered() const {
  return segments_.empty() ? 0.0 : segments_.back().t_end;
}

const TauBridge::Segment& TauBridge::segment_for(double t) const {
  std::size_t si = 0;
  while (si + 1 < segments_.size() && t > segments_[si].t_end) ++si;
  return segments_[si];
}

double TauBridge::theta_at(double t) const {
  if (segments_.empty()) throw std::out_of_range("TauBridge: empty bridge");
  const double slack = 1e-12 * (1.0 + t_covered());
  if (t < -slack || t > t_covered() + slack) {
    throw std::out_of_range("TauBridge: t outside the covered range");
  }
  t = std::clamp(t, 0.0, t_covered());
  const Segment& s = segment_for(t);
  const double tt = std::clamp(t, s.t_start, s.t_end);
  if (tt == s.t_start) return s.clock->theta_of(s.sigma_from);
  if (tt == s.t_end) return s.clock->theta_of(s.sigma_to);
  const auto residual = [this, &s, tt](double sigma) { return segment_time(s, sigma) - tt; };
  const double lo = std::min(s.sigma_from, s.sigma_to);
  const double hi = std::max(s.sigma_from, s.sigma_to);
  const double sigma = find_root(residual, lo, hi, {1e-15, 200});
  return s.clock->theta_of(sigma);
}

double TauBridge::tau_at(double t) const { return k_.tau_of_theta(theta_at(t)); }

double TauBridge::y_at(double t) const {
  if (segments_.empty()) throw std::out_of_range("TauBridge: empty bridge");
  const double theta = theta_at(t);
  const double l = k_.log_factor(theta);
  const double g = std::max(k_.branch_radicand(theta), 0.0);
  return segment_for(std::clamp(t, 0.0, t_covered())).y_sign * std::sqrt(g) / std::abs(l);
}

double tau_of_t(double t, const TauBridge& bridge) { return bridge.tau_at(t); }

namespace {

// Cumulative vertical quadrature int_0^t alpha y / sqrt(1 + y^2) ds with
// checkpoints at the output grid, so dense evaluation only re-integrates
// a short stretch.
class VerticalQuadrature {
 public:
  VerticalQuadrature(std::shared_ptr<const TauBridge> bridge, double alpha,
                     std::span<const double> checkpoints)
      : bridge_(std::move(bridge)), alpha_(alpha) {
    t_nodes_.push_back(0.0);
    values_.push_back(0.0);
    for (double t : checkpoints) {
      if (t <= t_nodes_.back()) continue;
      const double inc = stretch(t_nodes_.back(), t);
      t_nodes_.push_back(t);
      values_.push_back(values_.back() + inc);
    }
  }

  double eval(double t) const {
    const auto it = std::upper_bound(t_nodes_.begin(), t_nodes_.end(), t);
    const std::size_t j = (it == t_nodes_.begin()) ? 0 : (it - t_nodes_.begin() - 1);
    if (t == t_nodes_[j]) return values_[j];
    return values_[j] + stretch(t_nodes_[j], t);
  }

 private:
  // The integrand alpha sin X(t) is analytic along the motion, so fixed
  // composite Gauss panels at ~0.01 time units converge past double
  // precision (an adaptive rule would chase the tiny inversion noise of
  // the bridge instead).
  double stretch(double t0, double t1) const {
    const int cells = std::clamp(static_cast<int>(std::ceil((t1 - t0) / 0.01)), 2, 256);
    return integrate_gauss([this](double s) { return integrand(s); }, t0, t1, cells);
  }
  double integrand(double s) const {
    const double y = bridge_->y_at(s);
    return alpha_ * y / std::hypot(1.0, y);  // = alpha sin X
  }
  std::shared_ptr<const TauBridge> bridge_;
  double alpha_;
  std::vector<double> t_nodes_;
  std::vector<double> values_;
};

Trajectory numeric_fallback(double x0, double z0, std::span<const double> t_grid,
                            const WaveParameters& wp, const IntegratorConfig& cfg,
                            const std::string& reason) {
  Trajectory traj = integrate({x0, z0, t_grid.front() < 0.0 ? t_grid.front() : 0.0},
                              t_grid.back(), wp, cfg, t_grid);
  traj.meta().warnings.insert(traj.meta().warnings.begin(),
                              "exact Case II evaluation unavailable (" + reason +
                                  "); numerical integration used");
  return traj;
}

}  // namespace

Trajectory trajectory_case2(double x0, double z0, std::span<const double> t_grid,
                            const WaveParameters& wp, const IntegratorConfig& cfg) {
  cfg.validate();
  if (wp.equal_case()) throw WrongCaseError("trajectory_case2: requires c0 != c");
  if (t_grid.empty()) throw ConfigError("trajectory_case2: empty t_grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw ConfigError("trajectory_case2: t_grid must be strictly increasing");
    }
  }
  if (!(t_grid.front() >= 0.0)) {
    throw ConfigError("trajectory_case2: the exact parametrization is anchored at t = 0; "
                      "t_grid must be nonnegative");
  }
  if (!(z0 >= 0.0 && z0 <= 1.0)) throw ConfigError("trajectory_case2: z0 must lie in [0, 1]");

  const double c = wp.c();
  const double pi_delta = kPi * wp.delta();
  const double X0r = std::remainder(kTwoPi * x0, kTwoPi);  // x is 1-periodic

  if (z0 == 0.0) {
    return numeric_fallback(x0, z0, t_grid, wp, cfg, "bed particle, Z0 = 0");
  }

  CaseIIConstants k;
  try {
    k = fit_constants(X0r, kTwoPi * wp.delta() * z0, wp);
  } catch (const RegimeUnsupportedError& e) {
    return numeric_fallback(x0, z0, t_grid, wp, cfg, e.what());
  }
  const double x_shift = x0 - X0r / kTwoPi;  // whole wavelengths, restored below

  TrajectoryMeta meta(wp);
  meta.method = TrajectoryMethod::exact_case2;
  meta.x_closed_form = true;
  meta.z_closed_form = true;

  // A full equilibrium (crest-aligned particle whose drift cancels the
  // forcing) stays put; the parametric branch is a single point.
  if (std::abs(k.y0) < 1e-15 && std::abs(k.u0) < 1e-12 * std::max(1.0, k.alpha)) {
    // Moving-frame equilibrium: the particle rides the wave at speed c.
    std::vector<ParticleState> samples;
    for (double t : t_grid) samples.push_back({x0 + c * t, z0, t});
    meta.warnings.push_back("initial state is an equilibrium of the moving-frame system");
    Trajectory::DenseFn dense = [x0, z0, c](double t) -> ParticleState {
      return {x0 + c * t, z0, t};
    };
    return Trajectory(Frame::lab, std::move(meta), std::move(samples), std::move(dense));
  }

  auto bridge = std::make_shared<const TauBridge>(k, t_grid.back());
  const double coverage = bridge->t_covered();
  if (bridge->truncated() && coverage <= 0.0) {
    return numeric_fallback(x0, z0, t_grid, wp, cfg, bridge->diagnostic());
  }

  std::vector<double> checkpoints;
  for (double t : t_grid) {
    if (t <= coverage) checkpoints.push_back(t);
  }
  auto vq = std::make_shared<const VerticalQuadrature>(bridge, k.alpha, checkpoints);

  const double z_const = k.z_const;
  const auto z_at = [bridge, vq, z_const, pi_delta](double t) {
    const double arg = std::exp(z_const + vq->eval(t));
    if (!(arg < 1.0)) {
      throw NumericalError("trajectory_case2: vertical quadrature reached the "
                           "arctanh singularity");
    }
    return std::atanh(arg) / pi_delta;
  };
  const auto x_at = [bridge, c, x_shift](double t) {
    return c * t + std::atan(bridge->y_at(t)) / kTwoPi + x_shift;
  };

  std::vector<ParticleState> samples;
  bool left_strip = false;
  const double slack = 1e-12 * (1.0 + coverage);
  for (double t : t_grid) {
    if (t > coverage + slack) break;
    const double tt = std::min(t, coverage);
    double zv;
    try {
      zv = z_at(tt);
    } catch (const NumericalError&) {
      meta.warnings.push_back(
          "vertical quadrature argument reached the arctanh singularity; "
          "trajectory truncated at t = " + std::to_string(tt));
      break;
    }
    if (!(zv >= 0.0 && zv <= 1.0)) left_strip = true;
    samples.push_back({x_at(tt), zv, t});
  }
  if (samples.empty()) {
    return numeric_fallback(x0, z0, t_grid, wp, cfg,
                            "exact coverage window is empty: " + bridge->diagnostic());
  }
  if (bridge->truncated()) {
    meta.warnings.push_back(bridge->diagnostic() + " (covered t <= " +
                            std::to_string(coverage) + ")");
  }
  if (left_strip) {
    meta.warnings.push_back("particle left the physical strip z in [0, 1]");
  }

  Trajectory::DenseFn dense = [x_at, z_at](double t) -> ParticleState {
    return {x_at(t), z_at(t), t};
  };
  return Trajectory(Frame::lab, std::move(meta), std::move(samples), std::move(dense));
}

}  // namespace capgrav
