#pragma once

#include "capgrav/constants.hpp"

namespace capgrav {

/// Physical (dimensional) parameters of the flow and wave.
struct DimensionalParameters {
  double h0 = 1.0;               // undisturbed depth, > 0
  double wavelength = 1.0;       // typical wavelength, > 0
  double surface_tension = 0.0;  // coefficient Gamma, >= 0
  double g = 9.81;               // gravitational acceleration, > 0
  double rho = 1000.0;           // density, > 0
  double amplitude = 0.0;        // typical wave amplitude, >= 0
  double p0 = 101325.0;          // atmospheric reference pressure

  void validate() const;  // throws ConfigError on violated positivity
};

/// Weber number Gamma / (rho g h0^2).
double weber_number(const DimensionalParameters& params);

/// Linear wave speed c = sqrt( tanh(2 pi delta)/(2 pi delta) *
/// (1 + 4 pi^2 delta^2 We) ). Strictly increasing in We at fixed delta.
/// Throws ConfigError for delta <= 0.
double dispersion_speed(double delta, double weber);

/// Non-dimensional wave/flow parameters. The wave speed c is always the
/// positive dispersion root for (delta, weber); use the factories.
class WaveParameters {
 public:
  static constexpr double k_wavenumber = kTwoPi;

  static WaveParameters make(double delta, double weber, double c0, double epsilon = 0.0);
  /// c0 set equal to the dispersion speed (selects the c0 = c case exactly).
  static WaveParameters make_equal_current(double delta, double weber, double epsilon = 0.0);

  double delta() const { return delta_; }
  double epsilon() const { return epsilon_; }
  double weber() const { return weber_; }
  double c0() const { return c0_; }
  double c() const { return c_; }

  /// True when |c0 - c| <= Tolerances::equal_case.
  bool equal_case() const;

  /// Test hook: scales the oscillatory part of the linear field (not the
  /// uniform current). 1 is the physical value; 0 switches the wave off.
  double wave_scale() const { return wave_scale_; }
  WaveParameters with_wave_scale(double s) const;

 private:
  WaveParameters() = default;
  double delta_ = 0.0;
  double epsilon_ = 0.0;
  double weber_ = 0.0;
  double c0_ = 0.0;
  double c_ = 0.0;
  double wave_scale_ = 1.0;
};

/// The linear solution at one space-time point.
struct FieldSample {
  double u;    // horizontal velocity
  double v;    // vertical velocity
  double p;    // pressure perturbation
  double eta;  // surface elevation
};

/// Evaluate the linear field at (x, z, t). Throws ConfigError for z
/// outside [0, 1], where the linear solution is undefined.
FieldSample field_sample(double x, double z, double t, const WaveParameters& wp);

/// Same formulas without the strip restriction; the particle ODE right
/// side is defined globally even though the model is physical only for
/// z in [0, 1].
FieldSample field_sample_extended(double x, double z, double t, const WaveParameters& wp);

/// Mean curvature (up to the usual factor 1/2) of a graph surface:
/// eta_xx / (1 + eta_x^2)^{3/2}.
double mean_curvature(double eta_x, double eta_xx);

enum class ScaleDirection {
  to_nondimensional,
  to_dimensional,
};

/// A labeled bundle of physical quantities for unit conversion.
struct LabeledState {
  double x = 0.0;
  double z = 0.0;
  double t = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;
  double eta = 0.0;
};

/// Convert a labeled state between dimensional and non-dimensional form.
/// The velocity, pressure and elevation scalings require a positive
/// amplitude (epsilon > 0); otherwise a ConfigError is thrown. The round
/// trip is the identity to ~1e-15 relative.
LabeledState scale_variables(ScaleDirection direction, const LabeledState& state,
                             const DimensionalParameters& params);

/// Central-difference residuals of the linearized interior equations at
/// one point, evaluated at the given step. All four vanish identically
/// for the analytic solution up to O(step^2).
struct InteriorResiduals {
  double momentum_x;     // u_t + p_x
  double momentum_z;     // delta^2 v_t + p_z
  double continuity;     // u_x + v_z
  double irrotational;   // u_z - delta^2 v_x
  double max_abs() const;
};
InteriorResiduals interior_residuals(double x, double z, double t, const WaveParameters& wp,
                                     double step = Tolerances::fd_step);

/// Residuals of the two linearized free-surface conditions at z = 1.
struct SurfaceResiduals {
  double kinematic;  // v - eta_t
  double dynamic;    // p - eta + delta^2 We eta_xx
  double max_abs() const;
};
SurfaceResiduals surface_residuals(double x, double t, const WaveParameters& wp,
                                   double step = Tolerances::fd_step);

}  // namespace capgrav
