#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "capgrav/constants.hpp"
#include "capgrav/wave.hpp"

namespace capgrav {

/// Lab-frame particle position at a time.
struct ParticleState {
  double x = 0.0;
  double z = 0.0;
  double t = 0.0;
};

/// Wave-following frame: X = 2 pi (x - c t), Z = 2 pi delta z.
struct MovingFrameState {
  double X = 0.0;
  double Z = 0.0;
  double t = 0.0;
};

struct Velocity {
  double dx_dt = 0.0;
  double dz_dt = 0.0;
};

/// Right side of the lab-frame particle system: the linear velocity
/// field evaluated at the particle. Defined for all z (the strip
/// restriction is physical, not mathematical).
Velocity rhs_lab(const ParticleState& state, const WaveParameters& wp);

/// Right side of the moving-frame system, consistent with rhs_lab under
/// dX/dt = 2 pi (dx/dt - c), dZ/dt = 2 pi delta dz/dt.
Velocity rhs_moving(const MovingFrameState& state, const WaveParameters& wp);

MovingFrameState to_moving_frame(const ParticleState& state, const WaveParameters& wp);
ParticleState to_lab_frame(const MovingFrameState& state, const WaveParameters& wp);

struct IntegratorConfig {
  double rel_tol = Tolerances::default_rel_tol;
  double abs_tol = Tolerances::default_abs_tol;
  double max_step = Tolerances::default_max_step;
  bool dense_output = true;

  void validate() const;  // throws ConfigError unless all positive
};

enum class Frame { lab, moving };

enum class TrajectoryMethod { exact_case1, exact_case2, numeric };
const char* to_string(TrajectoryMethod method);

struct TrajectoryMeta {
  WaveParameters wave;
  TrajectoryMethod method = TrajectoryMethod::numeric;
  // Which components were produced by a closed form (Case I can mix a
  // closed-form component with a numerical fallback for the other).
  bool x_closed_form = false;
  bool z_closed_form = false;
  std::vector<std::string> warnings;

  explicit TrajectoryMeta(const WaveParameters& wp) : wave(wp) {}
};

/// A time-ordered particle path with optional dense (continuous-time)
/// evaluation.
class Trajectory {
 public:
  using DenseFn = std::function<ParticleState(double)>;

  Trajectory(Frame frame, TrajectoryMeta meta, std::vector<ParticleState> samples,
             DenseFn dense = nullptr);

  Frame frame() const { return frame_; }
  const TrajectoryMeta& meta() const { return meta_; }
  TrajectoryMeta& meta() { return meta_; }
  const std::vector<ParticleState>& samples() const { return samples_; }
  bool has_dense() const { return static_cast<bool>(dense_); }

  /// Continuous-time evaluation (throws std::out_of_range outside the
  /// covered window, ConfigError if no dense data was attached).
  ParticleState at(double t) const;

  double t_front() const { return samples_.front().t; }
  double t_back() const { return samples_.back().t; }

 private:
  Frame frame_;
  TrajectoryMeta meta_;
  std::vector<ParticleState> samples_;
  DenseFn dense_;
};

/// Integrate the lab-frame particle system from `initial` to t_end with
/// the adaptive embedded 5(4) pair. Samples are taken at `sample_times`
/// when given (each must lie in [initial.t, t_end]), otherwise at the
/// accepted integration steps. The trajectory carries dense output.
/// Leaves of the physical strip z in [0, 1] produce a warning in the
/// metadata, not a failure.
Trajectory integrate(const ParticleState& initial, double t_end, const WaveParameters& wp,
                     const IntegratorConfig& cfg = {},
                     std::span<const double> sample_times = {});

/// Average of the horizontal velocity over a unit x-interval at fixed
/// (z, t); equals the current strength c0 up to rounding.
double mean_current_check(double z, double t, const WaveParameters& wp);

struct DriftDiagnostic {
  double dx = 0.0;
  double dz = 0.0;
};

/// Displacement over one period starting at the trajectory's first
/// sample, evaluated through dense output. Throws std::out_of_range when
/// the trajectory does not cover [t0, t0 + period].
DriftDiagnostic drift_diagnostic(const Trajectory& traj, double period);

}  // namespace capgrav
