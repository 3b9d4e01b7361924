// oracles.hpp - test-only reference computations, independent of the
// implementation paths they check.
#pragma once

#include <cmath>
#include <complex>

namespace test_oracles {

using Complex = std::complex<double>;

// Riemann zeta through the alternating (eta) series with the
// Cohen-Rodriguez Villegas-Zagier acceleration; valid off s = 1 and away
// from the zeros of 1 - 2^{1-s}.
inline Complex riemann_zeta_eta(Complex s, int n = 60) {
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d;
  Complex sum{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::exp(-s * std::log(static_cast<double>(k + 1)));
    b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
  }
  const Complex eta = sum / d;
  return eta / (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

// Fixed-step composite Simpson rule (n even), used as the independent
// quadrature for the free-energy check.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int k = 1; k < n; ++k) sum += f(a + k * h) * ((k % 2) ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace test_oracles
