#pragma once

#include <numbers>

namespace capgrav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Central record of every numerical tolerance and switch-over threshold
/// used by the library. Tests and the verification harness read the same
/// values, so tightening one constant tightens everything consistently.
struct Tolerances {
  // Special functions.
  static constexpr double elliptic_relative = 1e-13;   // target accuracy of K, F, sn/cn/dn
  static constexpr double hyperbolic_limit = 1e-12;    // 1-m below this: use tanh/sech limits

  // Wave model.
  static constexpr double sinh_ratio_series = 1e-6;    // |x| below this: series for x/sinh(x)
  static constexpr double fd_step = 1e-4;              // central-difference step for residuals
  static constexpr double pde_residual = 1e-6;
  static constexpr double mean_current = 1e-10;
  static constexpr double scaling_round_trip = 1e-14;

  // Particle dynamics.
  static constexpr double default_rel_tol = 1e-10;
  static constexpr double default_abs_tol = 1e-10;
  static constexpr double default_max_step = 0.1;
  static constexpr double chain_rule = 1e-12;
  static constexpr double conservation_drift = 1e-8;

  // Case selection (uniform current vs wave speed).
  static constexpr double equal_case = 1e-12;          // |c0 - c| below this: treat c0 = c

  // Closed forms.
  static constexpr double offset_fit = 1e-10;          // initial-condition reproduction
  static constexpr double scalar_ode_residual = 1e-8;
  static constexpr double case2_canonical = 1e-9;
  static constexpr double case2_oracle = 1e-6;
  static constexpr double bridge_inversion = 1e-10;    // |t(tau(t)) - t|
  static constexpr double chart_margin = 1e-9;         // stay this far inside |X| < pi/2
};

}  // namespace capgrav
