#include "capgrav/roots.hpp"

#include <cmath>
#include <limits>

#include "capgrav/errors.hpp"

namespace capgrav {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 RootOptions opts) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NumericalError("find_root: interval does not bracket a sign change");
  }

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa; d = b - a; e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                        0.5 * opts.x_tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d; d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw NumericalError("find_root: Brent iteration failed to converge");
}

std::pair<double, double> bracket_root(const std::function<double(double)>& f,
                                       double start, double limit, double step) {
  if (step == 0.0 || (limit - start) * step <= 0.0) {
    throw NumericalError("bracket_root: inconsistent scan direction");
  }
  double x0 = start;
  double f0 = f(x0);
  if (f0 == 0.0) return {x0, x0};
  while ((step > 0.0) ? (x0 < limit) : (x0 > limit)) {
    double x1 = x0 + step;
    if ((step > 0.0) ? (x1 > limit) : (x1 < limit)) x1 = limit;
    const double f1 = f(x1);
    if (f1 == 0.0 || (f0 > 0.0) != (f1 > 0.0)) return {x0, x1};
    x0 = x1;
    f0 = f1;
  }
  throw NumericalError("bracket_root: no sign change before scan limit");
}

}  // namespace capgrav
