// zeta.hpp - Hurwitz zeta with complex parameters, complex log-gamma,
// Matsubara determinants via analytic continuation, and the single-mode
// heat-kernel (Mellin) regularization.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "xychain/chain.hpp"
#include "xychain/errors.hpp"
#include "xychain/quadrature.hpp"

namespace xychain {

namespace detail {

// B_{2k} / (2k)! for k = 1..9; the k = 9 entry only feeds the error estimate.
inline constexpr double kBernoulliOverFactorial[9] = {
    8.3333333333333333e-02,   // 1/12
    -1.3888888888888889e-03,  // -1/720
    3.3068783068783069e-05,   // 1/30240
    -8.2671957671957672e-07,  // -1/1209600
    2.0876756987868099e-08,   // 1/47900160
    -5.2841901386874932e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
    8.5860620562778446e-15,
};

// B_{2k} / (2k (2k-1)) for the Stirling series of log Gamma, k = 1..8.
inline constexpr double kStirling[8] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    7.0 / 1092.0,
    -3617.0 / 122400.0,
};

inline bool is_nonpositive_integer(Complex a) {
  return a.imag() == 0.0 && a.real() <= 0.0 && a.real() == std::floor(a.real());
}

}  // namespace detail

struct HurwitzResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;  // magnitude of the first dropped correction
};

// Principal-branch log Gamma for complex argument. Arguments are shifted
// until Re z >= 12 and the Stirling series through B_16 is applied; this
// keeps the truncation below 1e-15 relative. Satisfies the Schwarz
// reflection log Gamma(conj z) = conj(log Gamma(z)).
inline Complex log_gamma(Complex z) {
  if (detail::is_nonpositive_integer(z))
    throw std::invalid_argument("log_gamma: pole at non-positive integer");
  Complex shift{0.0, 0.0};
  while (z.real() < 12.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const Complex zinv = 1.0 / z;
  const Complex zinv2 = zinv * zinv;
  Complex series{0.0, 0.0};
  Complex p = zinv;
  for (double coeff : detail::kStirling) {
    series += coeff * p;
    p *= zinv2;
  }
  constexpr double half_log_two_pi = 0.91893853320467274178;
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + series - shift;
}

// Euler-Maclaurin evaluation of zeta(s, a) = sum_{n>=0} (n+a)^{-s}.
// N is the smallest shift with |N + a| >= 10 (1 + |s|) and Re(N + a) >= 1;
// corrections run through B_16 and the first dropped term is reported.
inline HurwitzResult hurwitz_zeta(Complex s, Complex a) {
  if (s == Complex(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");
  if (detail::is_nonpositive_integer(a))
    throw std::invalid_argument("hurwitz_zeta: a must not be a non-positive integer");

  const double radius = 10.0 * (1.0 + std::abs(s));
  int shift = 0;
  while (std::abs(a + static_cast<double>(shift)) < radius ||
         a.real() + static_cast<double>(shift) < 1.0) {
    ++shift;
    if (shift > 2000000)
      throw std::invalid_argument("hurwitz_zeta: parameters too large");
  }

  Complex partial{0.0, 0.0};
  for (int n = 0; n < shift; ++n)
    partial += std::exp(-s * std::log(a + static_cast<double>(n)));

  const Complex w = a + static_cast<double>(shift);
  const Complex logw = std::log(w);
  const Complex w_ns = std::exp(-s * logw);  // w^{-s}
  Complex value = partial + w_ns * w / (s - 1.0) + 0.5 * w_ns;

  // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * w^{-s-2k+1}
  Complex poch = s;
  Complex w_pow = w_ns / w;  // w^{-s-1}
  double first_dropped = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const Complex term = detail::kBernoulliOverFactorial[k - 1] * poch * w_pow;
    if (k == 9) {
      first_dropped = std::abs(term);
      break;
    }
    value += term;
    poch *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    w_pow /= w * w;
  }
  return {value, first_dropped};
}

// d/ds zeta(s, a) at s = 0 through the continuation log Gamma(a) - log sqrt(2 pi).
inline Complex hurwitz_zeta_sprime0(Complex a) {
  if (detail::is_nonpositive_integer(a))
    throw std::invalid_argument("hurwitz_zeta_sprime0: a must not be a non-positive integer");
  constexpr double half_log_two_pi = 0.91893853320467274178;
  return log_gamma(a) - half_log_two_pi;
}

// Regularized log-determinant of the diagonal Matsubara operators:
// builds the sector zeta function from Hurwitz zetas with parameters
// 1/2 +- i beta E / 2 pi (F) or +- i beta E / 2 pi (B), differentiates at
// s = 0 analytically, and returns sum_q log(1 +- e^{c beta E_q}).
// The branch constant c = +-1 reflects the freedom in d/ds (-1)^s; all
// complex logarithms are principal. The value is complex: the B product
// can be negative when a signed energy is negative, and the imaginary
// part then carries the odd multiple of i pi.
inline Complex matsubara_logdet_series(const Eigen::ArrayXd& energies, double beta,
                                       Statistics statistics, int c = -1) {
  if (beta <= 0.0) throw std::invalid_argument("matsubara_logdet_series: beta must be > 0");
  if (c != 1 && c != -1) throw std::invalid_argument("matsubara_logdet_series: c must be +-1");
  constexpr double half_log_two_pi = 0.91893853320467274178;
  const Complex log_prefactor(std::log(beta / (2.0 * kPi)), -0.5 * kPi);  // log(beta/(2 pi i))
  const Complex i_pi_c(0.0, kPi * c);

  Complex total{0.0, 0.0};
  for (Eigen::Index j = 0; j < energies.size(); ++j) {
    const double E = energies[j];
    const double x = beta * E / (2.0 * kPi);
    if (statistics == Statistics::B && x == 0.0)
      throw SingularityError("matsubara_logdet_series: zero mode in parity-weighted trace");

    const Complex ap = (statistics == Statistics::F) ? Complex(0.5, x) : Complex(0.0, x);
    const Complex am = (statistics == Statistics::F) ? Complex(0.5, -x) : Complex(0.0, -x);
    const Complex z0p = 0.5 - ap;  // zeta(0, a) = 1/2 - a
    const Complex z0m = 0.5 - am;
    const Complex dzp = log_gamma(ap) - half_log_two_pi;  // zeta'(0, a)
    const Complex dzm = log_gamma(am) - half_log_two_pi;

    Complex deriv = log_prefactor * (z0p + z0m) + dzp + dzm + i_pi_c * z0m;
    if (statistics == Statistics::B) deriv += std::log(Complex(-E, 0.0));
    total += -deriv;
  }
  return total;
}

struct SingleModeResult {
  double logdet_abs = 0.0;   // regularized log of det^{1/2}(w^2 + lambda^2)
  double phase = 0.0;        // -c beta lambda / 2
  Complex det{0.0, 0.0};     // 1 + e^{c beta lambda}
  double achieved_error = 0.0;
};

namespace detail {

// sum over fermionic frequencies w = pi (2n+1)/beta of exp(-w^2 t).
// Below the crossover t* = beta^2 / (2 pi) the Jacobi dual form converges
// faster and avoids the cancellation of the subtracted heat-kernel tail.
inline double fermi_frequency_sum(double t, double beta) {
  const double crossover = beta * beta / (2.0 * kPi);
  if (t < crossover) {
    double alt = 0.0;
    for (int k = 1; k < 400; ++k) {
      const double term = std::exp(-beta * beta * k * k / (4.0 * t));
      alt += (k % 2 == 0) ? term : -term;
      if (term < 1e-18) break;
    }
    return beta / (2.0 * std::sqrt(kPi * t)) * (1.0 + 2.0 * alt);
  }
  double sum = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double w = kPi * (2 * n + 1) / beta;
    const double term = std::exp(-w * w * t);
    sum += term;
    if (term < 1e-18) break;
  }
  return 2.0 * sum;
}

// rho(t) = S_F(t) e^{-lambda^2 t} - beta / (2 sqrt(pi t)), the subtracted
// small-t kernel. Written through expm1 in the dual region so the leading
// cancellation is exact.
inline double subtracted_kernel(double t, double beta, double lambda2) {
  const double crossover = beta * beta / (2.0 * kPi);
  const double prefactor = beta / (2.0 * std::sqrt(kPi * t));
  if (t < crossover) {
    double alt = 0.0;
    for (int k = 1; k < 400; ++k) {
      const double term = std::exp(-beta * beta * k * k / (4.0 * t));
      alt += (k % 2 == 0) ? term : -term;
      if (term < 1e-18) break;
    }
    return prefactor * (std::expm1(-lambda2 * t) + 2.0 * std::exp(-lambda2 * t) * alt);
  }
  return fermi_frequency_sum(t, beta) * std::exp(-lambda2 * t) - prefactor;
}

}  // namespace detail

// Numerical evaluation of the zeta function of diag{w_F^2 + lambda^2} in the
// Mellin (heat-kernel) form: the t >= 1 integral of the frequency sum, the
// subtracted t <= 1 integral, and the boundary constant beta / (2 sqrt(pi)).
// The total must reproduce log(2 cosh(beta lambda / 2)).
inline SingleModeResult single_mode_mellin(double lambda, double beta, double tol,
                                           int c = -1) {
  if (lambda == 0.0) throw std::invalid_argument("single_mode_mellin: lambda must be nonzero");
  if (beta <= 0.0 || tol <= 0.0)
    throw std::invalid_argument("single_mode_mellin: beta and tol must be > 0");
  if (c != 1 && c != -1) throw std::invalid_argument("single_mode_mellin: c must be +-1");

  const double lambda2 = lambda * lambda;
  const double omega0 = kPi / beta;
  const double rate = omega0 * omega0 + lambda2;

  // Upper integral: truncate where the integrand tail is negligible.
  double t_max = 1.0;
  while (2.0 * std::exp(-rate * t_max) / (rate * t_max) > tol * 1e-3 && t_max < 1e6)
    t_max *= 1.5;
  const auto upper = romberg(
      [&](double t) {
        return detail::fermi_frequency_sum(t, beta) * std::exp(-lambda2 * t) / t;
      },
      1.0, t_max, tol * 0.1);

  // Lower integral with t = u^2: the subtracted kernel over t is an
  // integrable 1/sqrt(t) shape, smooth in u.
  const double limit0 = -beta * lambda2 / std::sqrt(kPi);  // u -> 0 limit of the mapped integrand
  const auto lower = romberg(
      [&](double u) {
        if (u < 1e-12) return limit0;
        return 2.0 * detail::subtracted_kernel(u * u, beta, lambda2) / u;
      },
      0.0, 1.0, tol * 0.1);

  SingleModeResult out;
  out.logdet_abs = -0.5 * upper.value - 0.5 * lower.value + beta / (2.0 * std::sqrt(kPi));
  out.phase = -0.5 * c * beta * lambda;
  out.det = std::exp(Complex(out.logdet_abs - out.phase, 0.0));

  const double closed = std::log(2.0 * std::cosh(0.5 * beta * std::abs(lambda)));
  out.achieved_error = std::abs(out.logdet_abs - closed);
  if (out.achieved_error > tol)
    throw AccuracyFailure("single_mode_mellin: integral missed the closed form",
                          out.logdet_abs, out.achieved_error);
  return out;
}

}  // namespace xychain
