#pragma once

#include <functional>

namespace capgrav {

using Integrand = std::function<double(double)>;

/// Composite fixed-order Gauss-Legendre rule for smooth integrands.
double integrate_gauss(const Integrand& f, double a, double b, int cells = 32);

/// Adaptive bisection built on the Gauss rule; subdivides until the
/// two-level estimate changes by less than tol (absolute).
double integrate_adaptive(const Integrand& f, double a, double b, double tol = 1e-12);

/// Integral of f over [a, b] where f may behave like 1/sqrt(x - a) and/or
/// 1/sqrt(b - x) at the flagged endpoints. Applies the substitution
/// x = a + (b - a) sin^2(pi s / 2), whose vanishing derivative at both
/// ends cancels inverse-square-root singularities, then integrates the
/// transformed integrand with the composite Gauss rule (no endpoint
/// evaluations).
double integrate_sqrt_endpoints(const Integrand& f, double a, double b, int cells = 64);

}  // namespace capgrav
