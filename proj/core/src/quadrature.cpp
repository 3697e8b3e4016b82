#include "capgrav/quadrature.hpp"

#include <cmath>

#include "capgrav/constants.hpp"

namespace capgrav {
namespace {

// 8-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
constexpr double kNodes[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
constexpr double kWeights[4] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

double gauss_cell(const Integrand& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double dx = half * kNodes[i];
    sum += kWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * sum;
}

double adapt(const Integrand& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_cell(f, a, mid);
  const double right = gauss_cell(f, mid, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= tol) return refined;
  return adapt(f, a, mid, left, 0.5 * tol, depth - 1) +
         adapt(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_gauss(const Integrand& f, double a, double b, int cells) {
  if (a == b) return 0.0;
  if (cells < 1) cells = 1;
  const double h = (b - a) / cells;
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    sum += gauss_cell(f, a + i * h, a + (i + 1) * h);
  }
  return sum;
}

double integrate_adaptive(const Integrand& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return adapt(f, a, b, gauss_cell(f, a, b), tol, 18);
}

double integrate_sqrt_endpoints(const Integrand& f, double a, double b, int cells) {
  if (a == b) return 0.0;
  const double len = b - a;
  const auto transformed = [&](double s) {
    const double sp = std::sin(0.5 * kPi * s);
    const double x = a + len * sp * sp;
    const double dxds = len * 0.5 * kPi * std::sin(kPi * s);
    return f(x) * dxds;
  };
  return integrate_gauss(transformed, 0.0, 1.0, cells);
}

}  // namespace capgrav
