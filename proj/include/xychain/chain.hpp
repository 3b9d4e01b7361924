// chain.hpp - problem instance, momentum grids, dispersion data, projector kernel
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "xychain/errors.hpp"

namespace xychain {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Fermion boundary condition selected by the parity projector:
// Plus <-> antiperiodic (c_{M+1} = -c_1), Minus <-> periodic.
enum class Sector { Plus, Minus };

// F: plain thermal trace; B: trace weighted by the fermion parity (-1)^N.
enum class Statistics { F, B };

// One problem instance of the periodic anisotropic spin-1/2 chain.
struct ChainSpec {
  int sites = 2;            // M, even and >= 2
  int m = 0;                // counted sub-chain length, 0 <= m <= sites
  double gamma = 0.0;       // anisotropy; 0 selects the isotropic XX point
  double h = 0.0;           // magnetic field, h >= 0
  double beta = 1.0;        // inverse temperature
  Complex alpha{0.0, 0.0};  // counting parameter of the generating functional

  void validate() const {
    if (sites < 2 || sites % 2 != 0)
      throw std::invalid_argument("ChainSpec: sites must be even and >= 2");
    if (m < 0 || m > sites)
      throw std::invalid_argument("ChainSpec: m must satisfy 0 <= m <= sites");
    if (h < 0.0 || !std::isfinite(h))
      throw std::invalid_argument("ChainSpec: h must be finite and >= 0");
    if (!std::isfinite(gamma))
      throw std::invalid_argument("ChainSpec: gamma must be finite");
    if (beta < 0.0 || !std::isfinite(beta))
      throw std::invalid_argument("ChainSpec: beta must be finite and >= 0");
  }
};

// Quasi-momenta of one sector, ascending in (-pi, pi]. The Minus grid
// contains 0 and pi exactly; the Plus grid contains neither.
struct MomentumGrid {
  Sector sector = Sector::Plus;
  Eigen::ArrayXd q;
};

// Per-momentum band data. energy is the signed quasiparticle energy:
// +sqrt(eps^2 + gap^2) away from q in {0, pi} and eps itself there,
// where the Bogoliubov angle is fixed to zero.
struct SpectralData {
  Eigen::ArrayXd eps;     // h - cos q
  Eigen::ArrayXd gap;     // gamma sin q
  Eigen::ArrayXd energy;
  Eigen::ArrayXd theta;   // branch: cos(theta) = eps/E, sin(theta) = -gap/E
};

// The projector kernel is an ordinary dense symmetric matrix.
using ProjectorKernel = Eigen::MatrixXd;

inline MomentumGrid build_momentum_grid(int sites, Sector sector) {
  if (sites < 2 || sites % 2 != 0)
    throw std::invalid_argument("build_momentum_grid: sites must be even and >= 2");
  MomentumGrid grid;
  grid.sector = sector;
  grid.q.resize(sites);
  for (int l = 1; l <= sites; ++l) {
    // Integer numerators keep q = 0 and q = pi exact on the Minus grid.
    if (sector == Sector::Plus) {
      grid.q[l - 1] = kPi * static_cast<double>(2 * l - 1 - sites) / sites;
    } else {
      const int num = 2 * l - sites;
      grid.q[l - 1] = (num == sites) ? kPi : kPi * static_cast<double>(num) / sites;
    }
  }
  return grid;
}

inline SpectralData dispersion(const ChainSpec& spec, const MomentumGrid& grid) {
  spec.validate();
  if (grid.q.size() != spec.sites)
    throw std::invalid_argument("dispersion: grid was built for a different chain");
  SpectralData sd;
  const auto& q = grid.q;
  sd.eps = spec.h - q.cos();
  sd.gap = spec.gamma * q.sin();
  sd.energy.resize(q.size());
  sd.theta.resize(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0 || q[i] == kPi) {
      sd.energy[i] = sd.eps[i];
      sd.theta[i] = 0.0;
    } else {
      sd.energy[i] = std::hypot(sd.eps[i], sd.gap[i]);
      sd.theta[i] = std::atan2(-sd.gap[i], sd.eps[i]);
    }
  }
  return sd;
}

inline ProjectorKernel projector_kernel(const MomentumGrid& grid, int m) {
  const int sites = static_cast<int>(grid.q.size());
  if (m < 0 || m > sites)
    throw std::invalid_argument("projector_kernel: m must satisfy 0 <= m <= sites");
  ProjectorKernel Q(sites, sites);
  const double diag = static_cast<double>(m) / sites;
  for (int i = 0; i < sites; ++i) {
    Q(i, i) = diag;
    for (int j = 0; j < i; ++j) {
      const double d = 0.5 * (grid.q[i] - grid.q[j]);
      const double v = std::sin(m * d) / (sites * std::sin(d));
      Q(i, j) = v;
      Q(j, i) = v;
    }
  }
  return Q;
}

// Rotation by theta/2 in the Nambu spinor plane, exp(-i (theta/2) sigma^2).
inline Eigen::Matrix2d bogoliubov_block(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Eigen::Matrix2d g;
  g << c, -s, s, c;
  return g;
}

}  // namespace xychain
