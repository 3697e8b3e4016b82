#pragma once

#include <optional>
#include <span>

#include "capgrav/dynamics.hpp"
#include "capgrav/elliptic.hpp"
#include "capgrav/wave.hpp"

namespace capgrav {

/// Sign pattern of (c - a^2, c + a^2) for a first-integral constant c.
/// Only `mixed` admits the elliptic closed form for the horizontal
/// component and only `both_negative` for the vertical one; the others
/// are served by numerical integration.
enum class ComponentRegime {
  c_minus_a2_positive,  // c - a^2 >= 0
  mixed,                // c - a^2 < 0, c + a^2 >= 0
  both_negative,        // c - a^2 < 0, c + a^2 < 0
};

struct RegimeTag {
  ComponentRegime x_regime;
  ComponentRegime z_regime;

  bool x_closed_form() const { return x_regime == ComponentRegime::mixed; }
  bool z_closed_form() const { return z_regime == ComponentRegime::both_negative; }
};

/// First-integral data for the c0 = c case. The moving-frame components
/// satisfy (dX/dt)^2 = a^2 cos(2X) + c1 and (dZ/dt)^2 = a^2 cosh(2Z) + c2.
/// For constants derived from physical initial data, c1 >= a^2,
/// c2 <= -a^2 and c1 + c2 = 0.
struct CaseIConstants {
  double a_sq = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<EllipticModulusSquared> m1;  // (a^2 + c1) / (2 a^2), when in [0, 1)
  std::optional<EllipticModulusSquared> m2;  // 2 a^2 / (a^2 - c2), when in [0, 1)
  int sign_x = +1;
  int sign_z = +1;
  double t0_x = 0.0;
  double t0_z = 0.0;
};

/// a^2 = 8 pi^4 delta^2 c^2 / sinh^2(2 pi delta): half the square of the
/// moving-frame forcing prefactor.
double a_squared(const WaveParameters& wp);

/// Constants for the particle released at moving-frame position (X0, Z0)
/// with velocities from the c0 = c system. Fills moduli, regime signs and
/// the vertical time offset. Throws WrongCaseError when c0 != c.
CaseIConstants first_integral_constants(double X0, double Z0, const WaveParameters& wp);

/// Free-constants factory for studying the scalar equations on their own
/// (the closed-form horizontal regime does not arise from coupled
/// physical initial data). Offsets/signs default to 0 / +1.
CaseIConstants case1_constants(double a_sq, double c1, double c2);

RegimeTag regime_classify(const CaseIConstants& constants);

/// Fit the horizontal time offset so that y(0) = y0 with the requested
/// derivative sign. Requires the mixed regime and |y0| within the cn
/// amplitude. Returns the offset; sign_x must already be set to sign(y0)
/// (or the sign of the approach for y0 = 0).
double fit_x_offset(const CaseIConstants& constants, double y0, bool ydot_negative);

/// Same for the vertical component: w(0) = w0, requires the
/// both-negative regime and sqrt(1 - m2) <= |w0| <= 1.
double fit_z_offset(const CaseIConstants& constants, double w0, bool wdot_negative);

/// y(t) = sign_x sqrt((a^2+c1)/(a^2-c1)) cn(sqrt(2) a (t - t0_x); m1),
/// the tan-substituted horizontal solution. Throws
/// RegimeUnsupportedError outside the mixed regime.
double y_exact(double t, const CaseIConstants& constants);

/// w(t) = sign_z sqrt(1 - (2 a^2/(a^2-c2)) sn^2(sqrt(a^2-c2)(t - t0_z); m2)),
/// the tanh-substituted vertical solution (equal to sign_z dn of the same
/// argument). Throws RegimeUnsupportedError outside the both-negative
/// regime.
double w_exact(double t, const CaseIConstants& constants);

/// Period of the horizontal oscillation, 4 K(m1) / (sqrt(2) a).
double x_period(const CaseIConstants& constants);
/// Period of the vertical oscillation, 2 K(m2) / sqrt(a^2 - c2).
double z_period(const CaseIConstants& constants);

/// Particle path for c0 = c released at lab position (x0, z0) at t = 0,
/// sampled on t_grid. The vertical component uses the elliptic closed
/// form; the horizontal component falls back to adaptive integration of
/// its decoupled scalar equation whenever its regime has no closed form
/// (which is always the case for physical initial data) and the metadata
/// records which components are closed-form. z0 = 0 returns the bed
/// particle z == 0.
Trajectory trajectory_case1(double x0, double z0, std::span<const double> t_grid,
                            const WaveParameters& wp, const IntegratorConfig& cfg = {});

}  // namespace capgrav
