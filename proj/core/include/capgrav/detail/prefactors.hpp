#pragma once

#include <cmath>

#include "capgrav/constants.hpp"

namespace capgrav::detail {

/// x / sinh(x) with a series below the switch-over so the shallow limit
/// keeps full precision.
inline double x_over_sinh(double x) {
  if (std::abs(x) < Tolerances::sinh_ratio_series) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  return x / std::sinh(x);
}

}  // namespace capgrav::detail
