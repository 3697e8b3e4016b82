#include "capgrav/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "capgrav/errors.hpp"

namespace capgrav::ode {
namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner, DOPRI5).
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

double scaled_norm(std::span<const double> v, std::span<const double> y0,
                   std::span<const double> y1, const Options& opts) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc = opts.abs_tol +
                      opts.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = v[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

bool DenseSolution::covers(double t) const {
  const double lo = std::min(t_begin_, t_end_);
  const double hi = std::max(t_begin_, t_end_);
  const double slack = 1e-12 * (1.0 + hi - lo);
  return t >= lo - slack && t <= hi + slack;
}

void DenseSolution::finalize(std::size_t dim, double t0, double t1) {
  dim_ = dim;
  t_begin_ = t0;
  t_end_ = t1;
  direction_ = (t1 >= t0) ? 1.0 : -1.0;
}

std::size_t DenseSolution::index_for(double t) const {
  // Segments are ordered in integration direction; binary search on t0.
  std::size_t lo = 0, hi = segments.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (direction_ * (t - segments[mid].t0) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void DenseSolution::evaluate(double t, std::span<double> out) const {
  if (segments.empty() || out.size() != dim_) {
    throw std::out_of_range("DenseSolution: empty solution or wrong output size");
  }
  if (!covers(t)) {
    throw std::out_of_range("DenseSolution: t outside the integrated interval");
  }
  const Segment& s = segments[index_for(t)];
  const double theta = (t - s.t0) / s.h;
  const double theta1 = 1.0 - theta;
  const double* c = s.coeff.data();
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = c[i] +
             theta * (c[dim_ + i] +
                      theta1 * (c[2 * dim_ + i] +
                                theta * (c[3 * dim_ + i] + theta1 * c[4 * dim_ + i])));
  }
}

std::vector<double> DenseSolution::evaluate(double t) const {
  std::vector<double> out(dim_);
  evaluate(t, out);
  return out;
}

Result integrate(const Rhs& f, std::span<const double> y0, double t0, double t1,
                 const Options& opts) {
  const std::size_t n = y0.size();
  if (n == 0) throw ConfigError("ode::integrate: empty state");
  if (t1 == t0) throw ConfigError("ode::integrate: empty time interval");
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
    throw ConfigError("ode::integrate: tolerances must be positive");
  }
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const double span_len = std::abs(t1 - t0);

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> ytmp(n), ynew(n), err(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

  Result res;
  res.step_times.push_back(t0);

  double t = t0;
  f(t, y, k1);
  res.stats.rhs_evaluations++;

  // Automatic initial step (Hairer's hinit, simplified).
  double h;
  if (opts.initial_step > 0.0) {
    h = std::min(opts.initial_step, span_len);
  } else {
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1n = std::sqrt(d1n / n);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span_len);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
    f(t + dir * h0, ytmp, k2);
    res.stats.rhs_evaluations++;
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      const double q = (k2[i] - k1[i]) / sc;
      d2 += q * q;
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                    : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, span_len});
  }
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  bool previous_rejected = false;
  while (dir * (t1 - t) > 0.0) {
    if (res.stats.steps++ > opts.max_steps) {
      throw NumericalError("ode::integrate: exceeded max_steps at t = " + std::to_string(t));
    }
    const double remaining = std::abs(t1 - t);
    if (h > remaining) h = remaining;
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
      throw NumericalError(
          "ode::integrate: step size underflow at t = " + std::to_string(t) +
          " (h = " + std::to_string(h) + ") after " +
          std::to_string(res.stats.steps) + " steps; the problem may be "
          "leaving the resolvable regime");
    }
    const double hs = dir * h;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    f(t + c2 * hs, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * hs, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * hs, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * hs, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                             a65 * k5[i]);
    f(t + hs, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                             a76 * k6[i]);
    f(t + hs, ynew, k7);
    res.stats.rhs_evaluations += 6;

    for (std::size_t i = 0; i < n; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                     e7 * k7[i]);
    const double err_norm = scaled_norm(err, y, ynew, opts);

    if (err_norm <= 1.0) {
      // Accept: store the dense interpolant for this step.
      DenseSolution::Segment seg;
      seg.t0 = t;
      seg.h = hs;
      seg.coeff.resize(5 * n);
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = hs * k1[i] - ydiff;
        seg.coeff[i] = y[i];
        seg.coeff[n + i] = ydiff;
        seg.coeff[2 * n + i] = bspl;
        seg.coeff[3 * n + i] = ydiff - hs * k7[i] - bspl;
        seg.coeff[4 * n + i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                     d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      res.dense.segments.push_back(std::move(seg));

      t += hs;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      res.step_times.push_back(t);
      res.stats.accepted++;

      double factor = kSafety * std::pow(err_norm > 0.0 ? err_norm : 1e-16, -0.2);
      factor = std::clamp(factor, kMinFactor, previous_rejected ? 1.0 : kMaxFactor);
      h *= factor;
      if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
      previous_rejected = false;
    } else {
      res.stats.rejected++;
      const double factor =
          std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2));
      h *= factor;
      previous_rejected = true;
    }
  }

  res.dense.finalize(n, t0, t1);
  res.y_final = std::move(y);
  return res;
}

}  // namespace capgrav::ode
