// correlators.hpp - closed-form alpha-derivatives at alpha = 0, moments of
// the counted charge, and spin correlators at finite size and in the
// thermodynamic limit.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "xychain/chain.hpp"
#include "xychain/errors.hpp"
#include "xychain/genfunc.hpp"
#include "xychain/partition.hpp"
#include "xychain/quadrature.hpp"

namespace xychain {

namespace detail {

// tanh(beta E / 2) (F) or coth (B); the coth pole must be screened upstream.
inline double occupation_ratio(double beta_energy, Statistics st) {
  const double t = std::tanh(0.5 * beta_energy);
  if (st == Statistics::F) return t;
  if (t == 0.0) throw SingularityError("coth pole: zero mode in B statistics");
  return 1.0 / t;
}

struct XyTraces {
  double tr_w = 0.0;     // tr[ W (I +- e^{-beta E x s3})^{-1} ],  W = g (Q x s3) g^{-1}
  double tr_p = 0.0;     // same with Q x I in place of Q x s3
  double tr_ww = 0.0;    // tr of the squared weighted kernel
  Complex tr_k{0.0, 0.0};   // tr K'(0) of the M x M kernel
  Complex tr_kk{0.0, 0.0};  // tr[K'(0) K'(0)]
};

// All traces needed by the first two derivatives, in O(M^2) through the
// 2 x 2 block structure; the doubled matrices are never materialized.
inline XyTraces xy_traces(const ChainSpec& spec, Sector sector, Statistics st) {
  const auto band = sector_band(spec, sector);
  const int n = spec.sites;
  const Eigen::MatrixXd Q = projector_kernel(band.grid, spec.m);

  Eigen::ArrayXd up, dn;
  doubled_occupations(band.sd, spec.beta, st, up, dn);

  XyTraces t;
  Eigen::ArrayXcd c(n);
  for (int i = 0; i < n; ++i) {
    const double tau = occupation_ratio(spec.beta * band.sd.energy[i], st);
    c[i] = 1.0 - std::exp(Complex(0.0, band.sd.theta[i])) * tau;
    t.tr_w += Q(i, i) * std::cos(band.sd.theta[i]) * (up[i] - dn[i]);
    t.tr_p += Q(i, i) * (up[i] + dn[i]);
    t.tr_k += 0.5 * Q(i, i) * c[i];
  }
  for (int i = 0; i < n; ++i) {
    const double hi = 0.5 * band.sd.theta[i];
    for (int j = 0; j < n; ++j) {
      const double q2 = Q(i, j) * Q(j, i);
      if (q2 == 0.0) continue;
      const double phi = hi + 0.5 * band.sd.theta[j];
      const double c2 = std::cos(phi) * std::cos(phi);
      const double s2 = 1.0 - c2;
      t.tr_ww += q2 * (up[i] * (c2 * up[j] + s2 * dn[j]) +
                       dn[i] * (s2 * up[j] + c2 * dn[j]));
      t.tr_kk += 0.25 * q2 * c[i] * c[j];
    }
  }
  return t;
}

}  // namespace detail

// First and second alpha-derivatives of the XX log-determinant at alpha = 0.
// order 1: tr[Q (I +- e^{beta eps})^{-1}]; order 2 is the three-term form
// trK + (trK)^2 - tr(K^2), the second derivative of the determinant itself.
inline double dlogdet_alpha0_xx(const ChainSpec& spec, Sector sector,
                                Statistics statistics, int order) {
  spec.validate();
  if (order != 1 && order != 2)
    throw std::invalid_argument("dlogdet_alpha0_xx: order must be 1 or 2");
  const auto band = detail::sector_band(spec, sector);
  const int n = spec.sites;
  const Eigen::MatrixXd Q = projector_kernel(band.grid, spec.m);
  Eigen::ArrayXd w(n);
  for (int i = 0; i < n; ++i) {
    const double x = spec.beta * band.sd.eps[i];
    if (statistics == Statistics::F) {
      w[i] = detail::fermi_factor(x);
    } else {
      if (std::expm1(x) == 0.0)
        throw SingularityError("dlogdet_alpha0_xx: zero band mode in B statistics");
      w[i] = detail::bose_factor(x);
    }
  }
  double tr_k = 0.0, tr_kk = 0.0;
  for (int i = 0; i < n; ++i) tr_k += Q(i, i) * w[i];
  if (order == 1) return tr_k;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr_kk += Q(i, j) * Q(j, i) * w[i] * w[j];
  return tr_k + tr_k * tr_k - tr_kk;
}

// Derivatives of the doubled-route log det^{1/2} at alpha = 0 (no e^{alpha m/2}
// prefactor). order 1: -1/2 tr[g (Q x s3) g^{-1} / (I +- e^{-beta E x s3})];
// order 2 is the corresponding three-term ratio.
inline double dlogdet_alpha0_xy(const ChainSpec& spec, Sector sector,
                                Statistics statistics, int order) {
  spec.validate();
  if (order != 1 && order != 2)
    throw std::invalid_argument("dlogdet_alpha0_xy: order must be 1 or 2");
  const auto t = detail::xy_traces(spec, sector, statistics);
  if (order == 1) return -0.5 * t.tr_w;
  return 0.5 * t.tr_p + 0.25 * t.tr_w * t.tr_w - 0.5 * t.tr_ww;
}

// dG/dalpha at alpha = 0 per sector, via tr K'(0) of the M x M kernel.
inline Complex sector_gprime0(const ChainSpec& spec, Sector sector, Statistics st) {
  spec.validate();
  return detail::xy_traces(spec, sector, st).tr_k;
}

// d^2 G / dalpha^2 at alpha = 0, route a: (tr K')^2 + tr K'' - tr(K' K')
// with tr K'' = tr K' for the exponential-linear kernel.
inline Complex sector_gsecond0_M(const ChainSpec& spec, Sector sector, Statistics st) {
  spec.validate();
  const auto t = detail::xy_traces(spec, sector, st);
  return t.tr_k + t.tr_k * t.tr_k - t.tr_kk;
}

// Route b, from the doubled kernel: (1/4)[m + tr M']^2 + (1/2) tr M'' -
// (1/2) tr(M' M'), with tr M'' = m.
inline Complex sector_gsecond0_2M(const ChainSpec& spec, Sector sector, Statistics st) {
  spec.validate();
  const auto t = detail::xy_traces(spec, sector, st);
  const double mp = -t.tr_w;  // tr M'(0)
  const double m = static_cast<double>(spec.m);
  return Complex(0.25 * (m + mp) * (m + mp) + 0.5 * m - 0.5 * t.tr_ww, 0.0);
}

struct QMoments {
  double q1 = 0.0;  // <Q(m)>
  double q2 = 0.0;  // <Q^2(m)>
};

// Thermal moments of the counted charge, assembled over the four sector
// terms with partition-function weights carried in log form. B-sector
// zero modes propagate as SingularityError.
inline QMoments q_moments(const ChainSpec& spec) {
  spec.validate();
  if (spec.beta <= 0.0) throw std::invalid_argument("q_moments: beta must be > 0");
  if (spec.m == 0) return {0.0, 0.0};

  const std::array<std::pair<Sector, Statistics>, 4> keys{
      std::pair{Sector::Plus, Statistics::F}, std::pair{Sector::Minus, Statistics::F},
      std::pair{Sector::Plus, Statistics::B}, std::pair{Sector::Minus, Statistics::B}};
  const std::array<double, 4> comb{1.0, 1.0, 1.0, -1.0};

  std::vector<SignedLog> terms(4);
  for (int k = 0; k < 4; ++k) {
    terms[k] = sector_log_partition(spec, keys[k].first, keys[k].second);
    if (comb[k] < 0.0) terms[k].sign = -terms[k].sign;
  }
  const SignedLog z2 = signed_log_sum(terms);
  if (z2.sign <= 0) throw InternalInconsistency("q_moments: non-positive Z");

  QMoments out;
  for (int k = 0; k < 4; ++k) {
    // A vanishing parity-weighted Z means a zero mode: the factored
    // weight * derivative assembly cannot represent that sector's finite
    // product contribution.
    if (terms[k].sign == 0)
      throw SingularityError("q_moments: zero mode in a parity-weighted sector");
    const double weight =
        terms[k].sign * z2.sign * std::exp(terms[k].log_abs - z2.log_abs);
    const auto t = detail::xy_traces(spec, keys[k].first, keys[k].second);
    out.q1 += weight * t.tr_k.real();
    out.q2 += weight * (t.tr_k + t.tr_k * t.tr_k - t.tr_kk).real();
  }
  return out;
}

// <sigma^z> at finite size: 1 - 2 (<Q(m)> - <Q(m-1)>); translation
// invariance makes the value independent of the window position.
inline double sigma_z_finite(const ChainSpec& spec) {
  spec.validate();
  if (spec.m < 1) throw std::invalid_argument("sigma_z_finite: m must be >= 1");
  ChainSpec left = spec;
  left.m = spec.m - 1;
  return 1.0 - 2.0 * (q_moments(spec).q1 - q_moments(left).q1);
}

// <sigma^z_{n+1} sigma^z_1> at finite size through the second discrete
// difference of <Q^2>: 2 D2 <Q^2(n)> + 2 <sigma^z> - 1, with Q(0) = 0.
inline double zz_finite(const ChainSpec& spec, int n) {
  spec.validate();
  if (n < 1 || n + 1 > spec.sites)
    throw std::invalid_argument("zz_finite: need 1 <= n <= sites - 1");
  ChainSpec s = spec;
  s.m = n - 1;
  const double qm = q_moments(s).q2;
  s.m = n;
  const double q0 = q_moments(s).q2;
  const double sz = sigma_z_finite(s);
  s.m = n + 1;
  const double qp = q_moments(s).q2;
  return 2.0 * (qp - 2.0 * q0 + qm) + 2.0 * sz - 1.0;
}

// Thermodynamic-limit magnetization,
//   <sigma^z> = (1/2 pi) int cos(theta_q) tanh(beta E_q / 2) dq.
inline double sigma_z_limit(double gamma, double h, double beta, double tol) {
  if (beta <= 0.0 || tol <= 0.0)
    throw std::invalid_argument("sigma_z_limit: beta and tol must be > 0");
  const auto integrand = [=](double q) {
    const double eps = h - std::cos(q);
    const double gap = gamma * std::sin(q);
    const double e = std::hypot(eps, gap);
    if (e == 0.0) return 0.0;
    return (eps / e) * std::tanh(0.5 * beta * e);
  };
  return periodic_trapezoid(integrand, -kPi, kPi, 2.0 * kPi * tol).value / (2.0 * kPi);
}

// Isotropic form: <sigma^z> = 1 - (1/pi) int dq / (1 + e^{beta eps_q}).
inline double sigma_z_limit_xx(double h, double beta, double tol) {
  if (beta <= 0.0 || tol <= 0.0)
    throw std::invalid_argument("sigma_z_limit_xx: beta and tol must be > 0");
  const auto integrand = [=](double q) {
    return detail::fermi_factor(beta * (h - std::cos(q)));
  };
  return 1.0 - periodic_trapezoid(integrand, -kPi, kPi, kPi * tol).value / kPi;
}

// Anisotropic zz correlator in the limit,
//   <s^z_{n+1} s^z_1> = <s^z>^2 + (1/4 pi^2) II cos n(p-q) (S_p S_q - C_p C_q),
// with C_q = 1 - cos(theta) tanh(beta E/2), S_q = sin(theta) tanh(beta E/2).
// The tensor-product trapezoid sum over the periodic grid factorizes exactly
// into the four 1D Fourier sums below; doubling proceeds on the shared grid.
inline double zz_limit(double gamma, double h, double beta, int n, double tol) {
  if (n < 1) throw std::invalid_argument("zz_limit: separation must be >= 1");
  if (beta <= 0.0 || tol <= 0.0)
    throw std::invalid_argument("zz_limit: beta and tol must be > 0");

  const double sz = sigma_z_limit(gamma, h, beta, 0.1 * tol);
  const auto cs_at = [=](double q, double& c, double& s) {
    const double eps = h - std::cos(q);
    const double gap = gamma * std::sin(q);
    const double e = std::hypot(eps, gap);
    const double t = std::tanh(0.5 * beta * e);
    const double ct = (e == 0.0) ? 1.0 : eps / e;
    const double st = (e == 0.0) ? 0.0 : -gap / e;
    c = 1.0 - ct * t;
    s = st * t;
  };

  long grid = std::max<long>(64, 4L * n);
  double previous = 0.0;
  for (int level = 0; level < 22; ++level) {
    const double hstep = 2.0 * kPi / static_cast<double>(grid);
    double sum_cc = 0.0, sum_sc = 0.0, sum_cs = 0.0, sum_ss = 0.0;
    for (long k = 0; k < grid; ++k) {
      const double q = -kPi + hstep * static_cast<double>(k);
      double c, s;
      cs_at(q, c, s);
      const double cn = std::cos(n * q), sn = std::sin(n * q);
      sum_cc += cn * c;
      sum_sc += sn * c;
      sum_cs += cn * s;
      sum_ss += sn * s;
    }
    const double connected =
        (hstep * hstep) *
        ((sum_cs * sum_cs + sum_ss * sum_ss) - (sum_cc * sum_cc + sum_sc * sum_sc)) /
        (4.0 * kPi * kPi);
    if (level >= 1 && std::abs(connected - previous) <= tol)
      return sz * sz + connected;
    previous = connected;
    grid *= 2;
  }
  throw AccuracyFailure("zz_limit did not reach tolerance", sz * sz + previous, tol);
}

// Isotropic zz correlator in the limit,
//   <s^z_{n+1} s^z_1> = <s^z>^2 - (1/pi^2) | int e^{i n q} / (1+e^{beta eps}) dq |^2.
inline double zz_limit_xx(double h, double beta, int n, double tol) {
  if (n < 1) throw std::invalid_argument("zz_limit_xx: separation must be >= 1");
  if (beta <= 0.0 || tol <= 0.0)
    throw std::invalid_argument("zz_limit_xx: beta and tol must be > 0");
  const double sz = sigma_z_limit_xx(h, beta, 0.1 * tol);
  const auto re = periodic_trapezoid(
      [=](double q) {
        return std::cos(n * q) * detail::fermi_factor(beta * (h - std::cos(q)));
      },
      -kPi, kPi, tol);
  const auto im = periodic_trapezoid(
      [=](double q) {
        return std::sin(n * q) * detail::fermi_factor(beta * (h - std::cos(q)));
      },
      -kPi, kPi, tol);
  return sz * sz - (re.value * re.value + im.value * im.value) / (kPi * kPi);
}

struct ThermalCorrelators {
  double sigma_z = 0.0;
  std::map<int, double> zz;
  double q1 = 0.0;
  double q2 = 0.0;
};

inline ThermalCorrelators finite_correlators(const ChainSpec& spec,
                                             const std::vector<int>& separations) {
  ThermalCorrelators out;
  const QMoments qm = q_moments(spec);
  out.q1 = qm.q1;
  out.q2 = qm.q2;
  ChainSpec s = spec;
  if (s.m < 1) s.m = 1;
  out.sigma_z = sigma_z_finite(s);
  for (int n : separations) out.zz[n] = zz_finite(spec, n);
  return out;
}

}  // namespace xychain
