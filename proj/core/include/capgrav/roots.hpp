#pragma once

#include <functional>

namespace capgrav {

struct RootOptions {
  double x_tol = 1e-14;
  int max_iter = 200;
};

/// Brent's method on a bracketing interval: f(lo) and f(hi) must have
/// opposite signs (or one of them be zero). Throws NumericalError if the
/// bracket is invalid or the iteration fails to converge.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 RootOptions opts = {});

/// Expands/scans [start, limit] in steps until a sign change of f is
/// found; returns the bracketing pair. Throws NumericalError if no sign
/// change occurs before the limit.
std::pair<double, double> bracket_root(const std::function<double(double)>& f,
                                       double start, double limit, double step);

}  // namespace capgrav
