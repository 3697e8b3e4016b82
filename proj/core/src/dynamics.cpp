#include "capgrav/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "capgrav/errors.hpp"
#include "capgrav/ode.hpp"

namespace capgrav {
namespace {

// Moving-frame prefactor 4 pi^2 delta c / sinh(2 pi delta), scaled by the
// test hook.
double moving_prefactor(const WaveParameters& wp) {
  const double kd = kTwoPi * wp.delta();
  const double ratio = (std::abs(kd) < Tolerances::sinh_ratio_series)
                           ? (1.0 - kd * kd / 6.0)
                           : kd / std::sinh(kd);
  return kTwoPi * wp.c() * ratio * wp.wave_scale();
}

}  // namespace

Velocity rhs_lab(const ParticleState& state, const WaveParameters& wp) {
  const FieldSample f = field_sample_extended(state.x, state.z, state.t, wp);
  return {f.u, f.v};
}

Velocity rhs_moving(const MovingFrameState& state, const WaveParameters& wp) {
  const double alpha = moving_prefactor(wp);
  const double b = kTwoPi * (wp.c0() - wp.c());
  Velocity v{};
  v.dx_dt = alpha * std::cosh(state.Z) * std::cos(state.X) + b;  // dX/dt
  v.dz_dt = alpha * std::sinh(state.Z) * std::sin(state.X);      // dZ/dt
  return v;
}

MovingFrameState to_moving_frame(const ParticleState& s, const WaveParameters& wp) {
  return {kTwoPi * (s.x - wp.c() * s.t), kTwoPi * wp.delta() * s.z, s.t};
}

ParticleState to_lab_frame(const MovingFrameState& s, const WaveParameters& wp) {
  return {s.X / kTwoPi + wp.c() * s.t, s.Z / (kTwoPi * wp.delta()), s.t};
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0)) {
    throw ConfigError("IntegratorConfig: tolerances and max_step must be positive");
  }
}

const char* to_string(TrajectoryMethod method) {
  switch (method) {
    case TrajectoryMethod::exact_case1: return "exact-case-I";
    case TrajectoryMethod::exact_case2: return "exact-case-II";
    case TrajectoryMethod::numeric: return "numeric";
  }
  return "unknown";
}

Trajectory::Trajectory(Frame frame, TrajectoryMeta meta, std::vector<ParticleState> samples,
                       DenseFn dense)
    : frame_(frame), meta_(std::move(meta)), samples_(std::move(samples)),
      dense_(std::move(dense)) {
  if (samples_.empty()) throw ConfigError("Trajectory: needs at least one sample");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw ConfigError("Trajectory: timestamps must be strictly increasing");
    }
  }
}

ParticleState Trajectory::at(double t) const {
  if (!dense_) throw ConfigError("Trajectory: no dense output attached");
  return dense_(t);
}

Trajectory integrate(const ParticleState& initial, double t_end, const WaveParameters& wp,
                     const IntegratorConfig& cfg, std::span<const double> sample_times) {
  cfg.validate();
  if (!(t_end > initial.t)) {
    throw ConfigError("integrate: t_end must exceed the initial time");
  }

  const auto rhs = [&wp](double t, std::span<const double> y, std::span<double> dydt) {
    const Velocity v = rhs_lab({y[0], y[1], t}, wp);
    dydt[0] = v.dx_dt;
    dydt[1] = v.dz_dt;
  };

  ode::Options opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.max_step = cfg.max_step;

  const double y0[2] = {initial.x, initial.z};
  ode::Result result = ode::integrate(rhs, y0, initial.t, t_end, opts);

  auto dense = std::make_shared<ode::DenseSolution>(std::move(result.dense));

  std::vector<ParticleState> samples;
  bool left_strip = false;
  const auto record = [&](double t) {
    double y[2];
    dense->evaluate(t, y);
    if (y[1] < 0.0 || y[1] > 1.0) left_strip = true;
    samples.push_back({y[0], y[1], t});
  };
  if (!sample_times.empty()) {
    for (double t : sample_times) record(t);
  } else {
    for (double t : result.step_times) record(t);
  }

  TrajectoryMeta meta(wp);
  meta.method = TrajectoryMethod::numeric;
  if (left_strip) {
    meta.warnings.push_back(
        "particle left the physical strip z in [0, 1]; the linear model is "
        "formally defined but not physically meaningful there");
  }

  Trajectory::DenseFn dense_fn;
  if (cfg.dense_output) {
    dense_fn = [dense](double t) -> ParticleState {
      double y[2];
      dense->evaluate(t, y);
      return {y[0], y[1], t};
    };
  }
  return Trajectory(Frame::lab, std::move(meta), std::move(samples), std::move(dense_fn));
}

double mean_current_check(double z, double t, const WaveParameters& wp) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw ConfigError("mean_current_check: z must lie in [0, 1]");
  }
  // The integrand is 1-periodic in x, so the periodic trapezoidal rule
  // is spectrally accurate.
  constexpr int n = 64;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    sum += field_sample(x, z, t, wp).u;
  }
  return sum / n;
}

DriftDiagnostic drift_diagnostic(const Trajectory& traj, double period) {
  const double t0 = traj.t_front();
  const double t1 = t0 + period;
  if (!(period > 0.0) || t1 > traj.t_back() + 1e-12 * std::max(1.0, std::abs(traj.t_back()))) {
    throw std::out_of_range("drift_diagnostic: period exceeds the trajectory span");
  }
  const ParticleState a = traj.at(t0);
  const ParticleState b = traj.at(t1);
  return {b.x - a.x, b.z - a.z};
}

}  // namespace capgrav
