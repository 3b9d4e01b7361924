// partition.hpp - sector partition functions, total partition function,
// free energy, and the zeta-regularized route to the same quantities.
#pragma once

#include <cmath>
#include <vector>

#include "xychain/chain.hpp"
#include "xychain/errors.hpp"
#include "xychain/quadrature.hpp"
#include "xychain/signed_log.hpp"
#include "xychain/zeta.hpp"

namespace xychain {

namespace detail {

// log(2 cosh(x/2)) and log|2 sinh(x/2)| without overflow.
inline double log_two_cosh_half(double x) {
  const double ax = std::abs(x);
  return 0.5 * ax + std::log1p(std::exp(-ax));
}
inline SignedLog log_two_sinh_half(double x) {
  if (x == 0.0) return {};
  const double ax = std::abs(x);
  return {0.5 * ax + std::log1p(-std::exp(-ax)), x > 0.0 ? 1 : -1};
}

}  // namespace detail

// prod_q 2 cosh(beta E_q / 2) (F) or prod_q 2 sinh(beta E_q / 2) (B) over the
// sector grid, as sign + log magnitude. The signed energy at q = 0 keeps the
// Minus-sector B product negative below the critical field.
inline SignedLog sector_log_partition(const ChainSpec& spec, Sector sector,
                                      Statistics statistics) {
  spec.validate();
  const auto grid = build_momentum_grid(spec.sites, sector);
  const auto sd = dispersion(spec, grid);
  SignedLog out = SignedLog::one();
  for (Eigen::Index i = 0; i < sd.energy.size(); ++i) {
    const double x = spec.beta * sd.energy[i];
    if (statistics == Statistics::F) {
      out *= SignedLog{detail::log_two_cosh_half(x), 1};
    } else {
      out *= detail::log_two_sinh_half(x);
    }
  }
  return out;
}

inline double sector_partition(const ChainSpec& spec, Sector sector,
                               Statistics statistics) {
  return sector_log_partition(spec, sector, statistics).value();
}

// -1/2 sum_q E_q over the sector grid (signed energies included).
inline double sector_zero_point_energy(const ChainSpec& spec, Sector sector) {
  spec.validate();
  const auto grid = build_momentum_grid(spec.sites, sector);
  const auto sd = dispersion(spec, grid);
  return -0.5 * sd.energy.sum();
}

// Z = (Z+_F + Z-_F + Z+_B - Z-_B) / 2
inline SignedLog total_log_partition(const ChainSpec& spec) {
  std::vector<SignedLog> terms{
      sector_log_partition(spec, Sector::Plus, Statistics::F),
      sector_log_partition(spec, Sector::Minus, Statistics::F),
      sector_log_partition(spec, Sector::Plus, Statistics::B),
      sector_log_partition(spec, Sector::Minus, Statistics::B)};
  terms[3].sign = -terms[3].sign;
  SignedLog z = signed_log_sum(terms);
  if (z.sign != 0) z.log_abs -= std::log(2.0);
  if (z.sign <= 0)
    throw InternalInconsistency("total_partition: non-positive partition function");
  return z;
}

inline double total_partition(const ChainSpec& spec) {
  return total_log_partition(spec).value();
}

// Thermodynamic-limit free energy per site,
//   F = -(1 / 2 pi beta) int_0^pi log(2 (1 + cosh(beta E_q))) dq,
// by uniform trapezoid with interval doubling; the integrand is the half
// period of a smooth even periodic function.
inline double free_energy_limit(double gamma, double h, double beta, double tol) {
  if (beta <= 0.0) throw std::invalid_argument("free_energy_limit: beta must be > 0");
  if (tol <= 0.0) throw std::invalid_argument("free_energy_limit: tol must be > 0");
  const auto integrand = [=](double q) {
    const double x = beta * std::hypot(h - std::cos(q), gamma * std::sin(q));
    // log(2 (1 + cosh x)) = x + 2 log1p(e^{-x})
    return x + 2.0 * std::log1p(std::exp(-x));
  };
  // Integrate the even integrand over the full period and halve: this is the
  // periodic trapezoid rule, spectrally accurate off criticality. The grid
  // tolerance is calibrated so the returned value carries error <= tol.
  const auto full = periodic_trapezoid(integrand, -kPi, kPi, 4.0 * kPi * beta * tol);
  return -full.value / (4.0 * kPi * beta);
}

// The same sector log-partitions through the generalized zeta functions:
// returns sum_q log(1 + e^{c beta E_q}) (F) or sum_q log(1 - e^{c beta E_q}) (B).
// With c = -1, exp(result - beta E0) recovers the sector partition function,
// where E0 is the sector zero-point energy.
inline Complex regularized_logdet_partition(const ChainSpec& spec, Sector sector,
                                            Statistics statistics, int c = -1) {
  spec.validate();
  if (spec.beta <= 0.0)
    throw std::invalid_argument("regularized_logdet_partition: beta must be > 0");
  const auto grid = build_momentum_grid(spec.sites, sector);
  const auto sd = dispersion(spec, grid);
  return matsubara_logdet_series(sd.energy, spec.beta, statistics, c);
}

}  // namespace xychain
