// quadrature.hpp - trapezoid doubling for periodic integrands, Romberg for the rest
#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "xychain/errors.hpp"

namespace xychain {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Uniform trapezoid over one full period [a, b) with interval doubling.
// For smooth periodic integrands convergence is spectral, so the difference
// between successive levels is a tight error estimate.
template <class F>
QuadratureResult periodic_trapezoid(F&& f, double a, double b, double tol,
                                    int start_points = 8, int max_doublings = 22) {
  const double len = b - a;
  long n = start_points;
  double h = len / static_cast<double>(n);
  double sum = 0.0;
  for (long k = 0; k < n; ++k) sum += f(a + h * static_cast<double>(k));
  double integral = sum * h;
  long evals = n;

  for (int level = 0; level < max_doublings; ++level) {
    double mid = 0.0;
    for (long k = 0; k < n; ++k) mid += f(a + h * (static_cast<double>(k) + 0.5));
    evals += n;
    n *= 2;
    h *= 0.5;
    const double refined = 0.5 * integral + mid * h;
    const double diff = std::abs(refined - integral);
    integral = refined;
    if (level >= 1 && diff <= tol) return {integral, diff, evals};
  }
  throw AccuracyFailure("periodic_trapezoid did not reach tolerance", integral,
                        std::abs(integral));
}

// Romberg integration on [a, b]; suited to the smooth non-periodic
// heat-kernel integrands of the Mellin construction.
template <class F>
QuadratureResult romberg(F&& f, double a, double b, double tol, int max_levels = 20) {
  std::vector<double> row;
  double h = b - a;
  double trap = 0.5 * h * (f(a) + f(b));
  row.push_back(trap);
  long n = 1, evals = 2;

  for (int level = 1; level <= max_levels; ++level) {
    double mid = 0.0;
    for (long k = 0; k < n; ++k) mid += f(a + h * (static_cast<double>(k) + 0.5));
    evals += n;
    n *= 2;
    h *= 0.5;
    trap = 0.5 * row[0] + mid * h;

    std::vector<double> next;
    next.push_back(trap);
    double pow4 = 1.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      pow4 *= 4.0;
      next.push_back(next[j] + (next[j] - row[j]) / (pow4 - 1.0));
    }
    const double diff = std::abs(next.back() - row.back());
    row.swap(next);
    if (level >= 3 && diff <= tol) return {row.back(), diff, evals};
  }
  throw AccuracyFailure("romberg did not reach tolerance", row.back(),
                        std::abs(row.back()));
}

}  // namespace xychain
