#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace capgrav::ode {

/// Right side of y' = f(t, y); writes the derivative into dydt.
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.1;      // upper bound on |h|; 0 disables the bound
  double initial_step = 0.0;  // 0 selects automatically
  long max_steps = 10000000;
};

/// Continuous solution built from the per-step quartic interpolants of
/// the Dormand-Prince 5(4) pair. Valid on [t_begin, t_end] in either
/// time direction.
class DenseSolution {
 public:
  struct Segment {
    double t0;
    double h;
    std::vector<double> coeff;  // 5 * dim interpolation coefficients
  };

  std::size_t dim() const { return dim_; }
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  bool covers(double t) const;

  /// Evaluate the solution at t (throws std::out_of_range outside the
  /// covered interval, with a tiny rounding allowance at the ends).
  void evaluate(double t, std::span<double> out) const;
  std::vector<double> evaluate(double t) const;

  // Populated by the integrator.
  std::vector<Segment> segments;

  void finalize(std::size_t dim, double t0, double t1);

 private:
  std::size_t index_for(double t) const;
  std::size_t dim_ = 0;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
  double direction_ = 1.0;
};

struct Stats {
  long steps = 0;
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

struct Result {
  DenseSolution dense;
  std::vector<double> step_times;  // accepted step endpoints, including t0
  std::vector<double> y_final;
  Stats stats;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = f(t, y) from t0 to
/// t1 (either direction). Local error is kept under
/// abs_tol + rel_tol * |y| per component. Throws NumericalError on step
/// size underflow with a diagnostic message.
Result integrate(const Rhs& f, std::span<const double> y0, double t0, double t1,
                 const Options& opts = {});

}  // namespace capgrav::ode
