// oracle.hpp - dense 2^M ground-truth engine: spin Hamiltonian, fermionic
// sector Hamiltonians in the occupation basis, and brute-force thermal traces.
//
// Basis convention: bit k of the index encodes the occupation of site k+1,
// occupied <-> sigma^z = -1, so Q(m) counts set bits below the window edge.
#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <utility>

#include "xychain/chain.hpp"
#include "xychain/errors.hpp"

namespace xychain {

inline constexpr int kOracleMaxSites = 12;

namespace detail {

inline void check_oracle_size(int sites) {
  if (sites < 2) throw std::invalid_argument("oracle: sites must be >= 2");
  if (sites > kOracleMaxSites)
    throw ResourceLimit("oracle: dense engine is capped at 12 sites");
}

inline int popcount_below(unsigned n, int m) {
  return std::popcount(n & ((1u << m) - 1u));
}

// Fermion ladder operators in the occupation basis with the standard
// ordering string (-1)^{number of occupied modes below k}.
struct FermionTerm {
  double sign = 1.0;
  unsigned state = 0;
  bool alive = false;
};

inline FermionTerm apply_annihilate(unsigned state, int k) {
  if (!((state >> k) & 1u)) return {};
  const double s = (std::popcount(state & ((1u << k) - 1u)) % 2 == 0) ? 1.0 : -1.0;
  return {s, state ^ (1u << k), true};
}

inline FermionTerm apply_create(unsigned state, int k) {
  if ((state >> k) & 1u) return {};
  const double s = (std::popcount(state & ((1u << k) - 1u)) % 2 == 0) ? 1.0 : -1.0;
  return {s, state ^ (1u << k), true};
}

}  // namespace detail

// H = H0 + gamma H1 - h S^z on the periodic chain, dense in the spin basis.
inline Eigen::MatrixXd build_spin_hamiltonian(int sites, double gamma, double h) {
  detail::check_oracle_size(sites);
  const unsigned dim = 1u << sites;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (unsigned n = 0; n < dim; ++n) {
    const int occupied = std::popcount(n);
    H(n, n) += -0.5 * h * static_cast<double>(sites - 2 * occupied);
    for (int k = 0; k < sites; ++k) {
      const int k2 = (k + 1) % sites;
      const bool bk = (n >> k) & 1u;
      const bool bk2 = (n >> k2) & 1u;
      const unsigned flipped = n ^ (1u << k) ^ (1u << k2);
      if (bk != bk2) H(flipped, n) += -0.5;           // hopping
      else H(flipped, n) += -0.5 * gamma;             // pair terms
    }
  }
  return H;
}

// H^{+/-} in the fermion occupation basis with boundary c_{M+1} = -+ c_1
// (Plus antiperiodic, Minus periodic), including the -h M / 2 constant.
inline Eigen::MatrixXd build_sector_hamiltonian(int sites, double gamma, double h,
                                                Sector sector) {
  detail::check_oracle_size(sites);
  const unsigned dim = 1u << sites;
  const double boundary = (sector == Sector::Plus) ? -1.0 : 1.0;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);

  const auto add_cdag_c = [&](int i, int j, double coeff) {
    for (unsigned n = 0; n < dim; ++n) {
      const auto a = detail::apply_annihilate(n, j);
      if (!a.alive) continue;
      const auto b = detail::apply_create(a.state, i);
      if (!b.alive) continue;
      H(b.state, n) += coeff * a.sign * b.sign;
    }
  };
  const auto add_c_c = [&](int i, int j, double coeff) {  // c_i c_j
    for (unsigned n = 0; n < dim; ++n) {
      const auto a = detail::apply_annihilate(n, j);
      if (!a.alive) continue;
      const auto b = detail::apply_annihilate(a.state, i);
      if (!b.alive) continue;
      H(b.state, n) += coeff * a.sign * b.sign;
    }
  };
  const auto add_cdag_cdag = [&](int i, int j, double coeff) {  // c^+_i c^+_j
    for (unsigned n = 0; n < dim; ++n) {
      const auto a = detail::apply_create(n, j);
      if (!a.alive) continue;
      const auto b = detail::apply_create(a.state, i);
      if (!b.alive) continue;
      H(b.state, n) += coeff * a.sign * b.sign;
    }
  };

  for (unsigned n = 0; n < dim; ++n)
    H(n, n) += h * std::popcount(n) - 0.5 * h * sites;

  for (int k = 0; k < sites; ++k) {
    const int k2 = (k + 1) % sites;
    const double f = (k == sites - 1) ? boundary : 1.0;
    add_cdag_c(k, k2, -0.5 * f);
    add_cdag_c(k2, k, -0.5 * f);
    add_c_c(k2, k, -0.5 * gamma * f);
    add_cdag_cdag(k, k2, -0.5 * gamma * f);
  }
  return H;
}

struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline DenseSpectrum diagonalize(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

// Tr(weight_diag . e^{-beta H}) / norm with e^{alpha Q} applied as a diagonal
// scaling; the spectrum is shifted by its minimum before exponentiation.
inline Complex thermal_diagonal_average(const DenseSpectrum& es, double beta,
                                        const Eigen::ArrayXcd& diag, bool normalize) {
  const Eigen::Index dim = es.values.size();
  const double ground = es.values.minCoeff();
  Complex numerator{0.0, 0.0};
  double denominator = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double w = std::exp(-beta * (es.values[j] - ground));
    Complex overlap{0.0, 0.0};
    for (Eigen::Index n = 0; n < dim; ++n) {
      const double v = es.vectors(n, j);
      overlap += diag[n] * (v * v);
    }
    numerator += w * overlap;
    denominator += w;
  }
  if (normalize) return numerator / denominator;
  return numerator * std::exp(-beta * ground);
}

}  // namespace detail

// Tr(e^{alpha Q(m)} e^{-beta H}) / Tr(e^{-beta H}) by eigendecomposition,
// with a precomputed spectrum of the spin Hamiltonian.
inline Complex oracle_generating_functional(const ChainSpec& spec,
                                            const DenseSpectrum& es) {
  spec.validate();
  detail::check_oracle_size(spec.sites);
  const unsigned dim = 1u << spec.sites;
  Eigen::ArrayXcd weight(dim);
  for (unsigned n = 0; n < dim; ++n)
    weight[n] = std::exp(spec.alpha *
                         static_cast<double>(detail::popcount_below(n, spec.m)));
  return detail::thermal_diagonal_average(es, spec.beta, weight, true);
}

inline Complex oracle_generating_functional(const ChainSpec& spec) {
  const auto es = diagonalize(build_spin_hamiltonian(spec.sites, spec.gamma, spec.h));
  return oracle_generating_functional(spec, es);
}

// Unnormalized sector trace Tr(e^{alpha Q(m)} [(-1)^N] e^{-beta H^{+/-}}).
inline Complex oracle_sector_gz(const ChainSpec& spec, Sector sector,
                                Statistics statistics) {
  spec.validate();
  detail::check_oracle_size(spec.sites);
  const auto es =
      diagonalize(build_sector_hamiltonian(spec.sites, spec.gamma, spec.h, sector));
  const unsigned dim = 1u << spec.sites;
  Eigen::ArrayXcd weight(dim);
  for (unsigned n = 0; n < dim; ++n) {
    Complex w = std::exp(spec.alpha *
                         static_cast<double>(detail::popcount_below(n, spec.m)));
    if (statistics == Statistics::B && (std::popcount(n) % 2 == 1)) w = -w;
    weight[n] = w;
  }
  return detail::thermal_diagonal_average(es, spec.beta, weight, false);
}

// Plain / parity-weighted sector partition trace.
inline double oracle_sector_trace(const ChainSpec& spec, Sector sector,
                                  Statistics statistics) {
  ChainSpec s = spec;
  s.alpha = Complex(0.0, 0.0);
  return oracle_sector_gz(s, sector, statistics).real();
}

// Thermal <sigma^z_a> and <sigma^z_a sigma^z_b>, 1-based sites.
struct OracleCorrelators {
  double sigma_z = 0.0;
  double zz = 0.0;
};

inline OracleCorrelators oracle_correlators(const ChainSpec& spec, int a, int b) {
  spec.validate();
  detail::check_oracle_size(spec.sites);
  if (a < 1 || a > spec.sites || b < 1 || b > spec.sites)
    throw std::invalid_argument("oracle_correlators: sites out of range");
  const auto es = diagonalize(build_spin_hamiltonian(spec.sites, spec.gamma, spec.h));
  const unsigned dim = 1u << spec.sites;
  Eigen::ArrayXcd za(dim), zab(dim);
  for (unsigned n = 0; n < dim; ++n) {
    const double sa = 1.0 - 2.0 * ((n >> (a - 1)) & 1u);
    const double sb = 1.0 - 2.0 * ((n >> (b - 1)) & 1u);
    za[n] = sa;
    zab[n] = sa * sb;
  }
  OracleCorrelators out;
  out.sigma_z = detail::thermal_diagonal_average(es, spec.beta, za, true).real();
  out.zz = detail::thermal_diagonal_average(es, spec.beta, zab, true).real();
  return out;
}

// Thermal <Q(m)> and <Q^2(m)> from the same decomposition.
inline std::pair<double, double> oracle_q_moments(const ChainSpec& spec) {
  spec.validate();
  detail::check_oracle_size(spec.sites);
  const auto es = diagonalize(build_spin_hamiltonian(spec.sites, spec.gamma, spec.h));
  const unsigned dim = 1u << spec.sites;
  Eigen::ArrayXcd cnt(dim), cnt2(dim);
  for (unsigned n = 0; n < dim; ++n) {
    const double c = detail::popcount_below(n, spec.m);
    cnt[n] = c;
    cnt2[n] = c * c;
  }
  return {detail::thermal_diagonal_average(es, spec.beta, cnt, true).real(),
          detail::thermal_diagonal_average(es, spec.beta, cnt2, true).real()};
}

}  // namespace xychain
