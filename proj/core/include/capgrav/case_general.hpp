#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "capgrav/dynamics.hpp"
#include "capgrav/wave.hpp"

namespace capgrav {

/// Constants of the c0 != c parametric solution. The parameter tau runs
/// over tau = alpha cosh(theta) with theta the moving-frame vertical
/// coordinate, alpha = sqrt(2 a^2); the log factor
/// L(tau) = C - b ln|tau + sqrt(tau^2 - 2 a^2)| is linear in theta:
/// L = C - b (ln alpha + theta).
struct CaseIIConstants {
  double a_sq = 0.0;    // 8 pi^4 delta^2 c^2 / sinh^2(2 pi delta)
  double alpha = 0.0;   // sqrt(2 a_sq)
  double b = 0.0;       // 2 pi (c0 - c), nonzero
  double C = 0.0;       // integration constant of the parametric form
  double z_const = 0.0; // additive constant of the vertical quadrature
  double tau0 = 0.0;    // anchor tau where t = 0
  double theta0 = 0.0;  // anchor theta (= 2 pi delta z0)
  double u0 = 0.0;      // canonical u at the anchor (= dX/dt at t = 0)
  double xi0 = 0.0;     // canonical xi at the anchor
  double y0 = 0.0;      // tan X0
  int sign_y0 = +1;     // y branch sign at the anchor
  int dir0 = +1;        // initial theta direction (equals sign_y0)

  // Connected branch of {radicand >= 0, L > 0} containing the anchor.
  double tau_lo = 0.0, tau_hi = 0.0;
  double theta_lo = 0.0, theta_hi = 0.0;
  bool lo_is_turning = false;  // endpoint is a root of the radicand
  bool hi_is_turning = false;  // (false means chart exit or cap truncation)

  double tau_of_theta(double theta) const;
  double theta_of_tau(double tau) const;  // throws for tau < alpha
  double log_factor(double theta) const;  // L
  double radical(double theta) const;     // R = sqrt(tau^2 - 2 a^2) = alpha sinh(theta)
  /// R^2 - L^2, the radicand driving turning points; dtheta/dt = +-sqrt of it.
  double branch_radicand(double theta) const;
};

/// Residual of the second-order reduced horizontal equation in y = tan X:
/// yddot - 2 y ydot^2/(1+y^2) + b y ydot + 2 a^2 y - b^2 y (1+y^2).
double abel_reduction_residual(double y, double ydot, double yddot,
                               const CaseIIConstants& k);

/// Residual of the canonical first-order form:
/// u du/dxi - u - (2 a^2 / b) exp(2 xi / b) + b.
double canonical_form_residual(double u_val, double dudxi, double xi,
                               const CaseIIConstants& k);

struct ParametricPoint {
  double u;
  double xi;
};

/// The parametric solution of the canonical equation:
/// u = tau L / sqrt(tau^2 - 2 a^2) + b, xi = -b ln| sqrt(tau^2 - 2 a^2) / L |.
/// Both square roots use the same tau^2 - 2 a^2 radicand; the test suite
/// pins this reconciliation through the canonical-form residual. Throws
/// ConfigError for tau^2 <= 2 a^2 or L = 0.
ParametricPoint parametric_solution(double tau, const CaseIIConstants& k);

/// y(tau) = sign sqrt( (tau^2 - 2 a^2)/L^2 - 1 ) with the branch sign
/// fixed by the initial data. Throws ConfigError when the radicand is
/// negative.
double y_of_tau(double tau, const CaseIIConstants& k);

/// Time along the anchor branch: t(tau) = int_{tau0}^{tau} of
/// 1 / (sqrt(tau^2-2a^2) sqrt(tau^2-2a^2-L^2)) with the branch
/// orientation, evaluated as a theta-substituted quadrature that is
/// regular at turning endpoints. tau must lie in the stored branch.
/// Monotone in tau; cells > 0 overrides the quadrature resolution.
double t_of_tau(double tau, const CaseIIConstants& k, int cells = 0);

namespace detail {
struct BranchClock;  // fixed-rule cumulative time quadrature along a branch
}

/// Piecewise-monotone time parametrization tau(t) across turning points,
/// built once per trajectory. Time starts at 0 at the anchor and the
/// bridge extends branch by branch until the horizon, a chart exit
/// (L -> 0, X -> +-pi/2), or a vertical blow-up cap. The anchor branch
/// shares its quadrature rule with t_of_tau, so inverting here and
/// re-evaluating there closes to root-finder accuracy.
class TauBridge {
 public:
  TauBridge(const CaseIIConstants& k, double t_horizon, int cells_per_segment = 0);

  const CaseIIConstants& constants() const { return k_; }
  double t_covered() const;      // last representable time (>= horizon unless truncated)
  bool truncated() const { return truncated_; }
  const std::string& diagnostic() const { return diagnostic_; }
  int segment_count() const { return static_cast<int>(segments_.size()); }

  double theta_at(double t) const;  // throws std::out_of_range beyond coverage
  double tau_at(double t) const;
  double y_at(double t) const;      // branch-correct y(t)

 private:
  struct Segment {
    double t_start = 0.0, t_end = 0.0;
    double sigma_from = 0.0, sigma_to = 0.0;  // motion range in map coordinates
    int y_sign = +1;
    std::shared_ptr<const detail::BranchClock> clock;
  };
  double segment_time(const Segment& s, double sigma) const;
  const Segment& segment_for(double t) const;

  CaseIIConstants k_;
  std::vector<Segment> segments_;
  bool truncated_ = false;
  std::string diagnostic_;
};

/// Inversion of the time parametrization: |t_of_tau(result) - t| stays
/// within Tolerances::bridge_inversion. Throws std::out_of_range outside
/// the covered range.
double tau_of_t(double t, const TauBridge& bridge);

/// Solve the parametric form for the anchor (tau0, C) matching the
/// particle released at moving-frame (X0, Z0), and fix the vertical
/// quadrature constant so z(0) = z0. Requires c0 != c, Z0 > 0 and X0 in
/// the principal chart (-pi/2, pi/2); throws RegimeUnsupportedError
/// otherwise (callers fall back to numerical integration).
CaseIIConstants fit_constants(double X0, double Z0, const WaveParameters& wp);

/// Particle path for c0 != c released at lab (x0, z0) at t = 0, sampled
/// on t_grid (t >= 0). x(t) = c t + arctan(y(t))/(2 pi); z(t) through the
/// cumulative vertical quadrature, whose argument must stay negative
/// (arctanh in range) - violation truncates with a diagnostic, as does a
/// chart exit. Fit failures fall back to numerical integration with the
/// method tag recording it.
Trajectory trajectory_case2(double x0, double z0, std::span<const double> t_grid,
                            const WaveParameters& wp, const IntegratorConfig& cfg = {});

}  // namespace capgrav
