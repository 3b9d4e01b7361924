// genfunc.hpp - determinant representations of the sector generating
// functionals and their assembly into G(alpha, m).
//
// Three routes are provided per sector and statistics:
//   MxM        det_M[I + K(alpha)] with the half-kernel carrying the
//              Bogoliubov phase e^{i theta_q} and tanh/coth occupation,
//   TwoMxTwoM  det^{1/2} of the doubled (momentum x spinor) matrix, square
//              root taken by continuous phase tracking along alpha t,
//   Series     truncated trace-log expansion of the doubled kernel.
// The doubled layout is momentum-major with the spinor index fastest.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "xychain/chain.hpp"
#include "xychain/errors.hpp"
#include "xychain/partition.hpp"

namespace xychain {

struct RepresentationChoice {
  enum class Kind { MxM, TwoMxTwoM, Series };
  Kind kind = Kind::MxM;
  int series_order = 12;  // K >= 1, for Series
  int phase_steps = 8;    // >= 2, for TwoMxTwoM

  void validate() const {
    if (kind == Kind::Series && series_order < 1)
      throw std::invalid_argument("RepresentationChoice: series order must be >= 1");
    if (kind == Kind::TwoMxTwoM && phase_steps < 2)
      throw std::invalid_argument("RepresentationChoice: phase_steps must be >= 2");
  }
};

namespace detail {

// 1 / (1 + e^x) without overflow.
inline double fermi_factor(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// 1 / (1 - e^x); the pole at x = 0 must be screened by the caller.
inline double bose_factor(double x) { return -1.0 / std::expm1(x); }

struct SectorBand {
  MomentumGrid grid;
  SpectralData sd;
};

inline SectorBand sector_band(const ChainSpec& spec, Sector sector) {
  SectorBand band;
  band.grid = build_momentum_grid(spec.sites, sector);
  band.sd = dispersion(spec, band.grid);
  return band;
}

// Occupation denominators of the doubled matrix, per momentum: spin-up
// column 1/(1 +- e^{-beta E}), spin-down column 1/(1 +- e^{+beta E}).
inline void doubled_occupations(const SpectralData& sd, double beta, Statistics st,
                                Eigen::ArrayXd& up, Eigen::ArrayXd& dn) {
  const Eigen::Index n = sd.energy.size();
  up.resize(n);
  dn.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = beta * sd.energy[i];
    if (st == Statistics::F) {
      up[i] = fermi_factor(-x);  // 1/(1+e^{-x})
      dn[i] = fermi_factor(x);
    } else {
      if (x == 0.0)
        throw SingularityError("doubled kernel: zero mode in parity-weighted sector");
      up[i] = bose_factor(-x);
      dn[i] = bose_factor(x);
    }
  }
}

// The doubled kernel M(alpha): blocks g_{theta_i} [Q_ij (e^{-alpha s3} - I)]
// g_{theta_j}^{-1} divided by the occupation diagonal on the right.
inline Eigen::MatrixXcd doubled_kernel(const SectorBand& band, const Eigen::MatrixXd& Q,
                                       double beta, Statistics st, Complex alpha) {
  const int n = static_cast<int>(Q.rows());
  Eigen::ArrayXd up, dn;
  doubled_occupations(band.sd, beta, st, up, dn);
  const Complex em = std::exp(-alpha) - 1.0;
  const Complex ep = std::exp(alpha) - 1.0;

  Eigen::MatrixXcd T(2 * n, 2 * n);
  Eigen::ArrayXd ch = (0.5 * band.sd.theta).cos();
  Eigen::ArrayXd sh = (0.5 * band.sd.theta).sin();
  for (int i = 0; i < n; ++i) {
    const double ci = ch[i], si = sh[i];
    for (int j = 0; j < n; ++j) {
      const double cj = ch[j], sj = sh[j];
      const Complex b00 = ci * cj * em + si * sj * ep;
      const Complex b01 = ci * sj * em - si * cj * ep;
      const Complex b10 = si * cj * em - ci * sj * ep;
      const Complex b11 = si * sj * em + ci * cj * ep;
      const double qij = Q(i, j);
      T(2 * i, 2 * j) = qij * b00 * up[j];
      T(2 * i, 2 * j + 1) = qij * b01 * dn[j];
      T(2 * i + 1, 2 * j) = qij * b10 * up[j];
      T(2 * i + 1, 2 * j + 1) = qij * b11 * dn[j];
    }
  }
  return T;
}

inline Complex determinant_of_identity_plus(const Eigen::MatrixXcd& T) {
  const Eigen::MatrixXcd A =
      Eigen::MatrixXcd::Identity(T.rows(), T.cols()) + T;
  return A.partialPivLu().determinant();
}

}  // namespace detail

// XX determinant det_M[I + (e^alpha - 1) Q (I +- e^{beta eps})^{-1}].
// Uses the band energy eps_q only; spec.gamma is ignored on this route.
inline Complex genfunc_xx_sector(const ChainSpec& spec, Sector sector,
                                 Statistics statistics) {
  spec.validate();
  if (spec.alpha == Complex(0.0, 0.0) || spec.m == 0) return {1.0, 0.0};
  const auto band = detail::sector_band(spec, sector);
  const int n = spec.sites;
  Eigen::ArrayXd w(n);
  for (int i = 0; i < n; ++i) {
    const double x = spec.beta * band.sd.eps[i];
    if (statistics == Statistics::F) {
      w[i] = detail::fermi_factor(x);
    } else {
      if (std::expm1(x) == 0.0)
        throw SingularityError("genfunc_xx_sector: zero band mode in B statistics");
      w[i] = detail::bose_factor(x);
    }
  }
  const Complex u = std::exp(spec.alpha) - 1.0;
  const Eigen::MatrixXd Q = projector_kernel(band.grid, spec.m);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
  A.noalias() += u * (Q * w.matrix().asDiagonal()).cast<Complex>();
  return A.partialPivLu().determinant();
}

// M x M route for the anisotropic chain:
// det_M[I + (e^alpha - 1)(Q/2) diag{1 - e^{i theta_q} tanh(beta E_q / 2)}],
// with tanh -> coth for the parity-weighted statistics.
inline Complex genfunc_xy_sector_M(const ChainSpec& spec, Sector sector,
                                   Statistics statistics) {
  spec.validate();
  if (spec.alpha == Complex(0.0, 0.0) || spec.m == 0) return {1.0, 0.0};
  const auto band = detail::sector_band(spec, sector);
  const int n = spec.sites;
  Eigen::ArrayXcd c(n);
  for (int i = 0; i < n; ++i) {
    const double t = std::tanh(0.5 * spec.beta * band.sd.energy[i]);
    double tau;
    if (statistics == Statistics::F) {
      tau = t;
    } else {
      if (t == 0.0)
        throw SingularityError("genfunc_xy_sector_M: zero mode in B statistics");
      tau = 1.0 / t;
    }
    c[i] = 1.0 - std::exp(Complex(0.0, band.sd.theta[i])) * tau;
  }
  const Complex u = 0.5 * (std::exp(spec.alpha) - 1.0);
  const Eigen::MatrixXd Q = projector_kernel(band.grid, spec.m);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
  A.noalias() += u * (Q.cast<Complex>() * c.matrix().asDiagonal());
  return A.partialPivLu().determinant();
}

// Doubled route: e^{alpha m / 2} det^{1/2}_{2M}[I + M(alpha)]. The square
// root is fixed to +1 at alpha = 0 and continued along the homotopy alpha t,
// t in [0, 1]. Starting from phase_steps uniform segments, every segment is
// bisected until its phase increment is below pi/2 AND its magnitude ratio
// stays inside [1/2, 2]. Fast winding of the determinant needs a small
// eigenvalue of I + M, which cannot enter or leave a segment without moving
// the magnitude, so the pair of bounds resolves the winding number.
inline Complex genfunc_xy_sector_2M(const ChainSpec& spec, Sector sector,
                                    Statistics statistics, int phase_steps = 8) {
  spec.validate();
  if (phase_steps < 2)
    throw std::invalid_argument("genfunc_xy_sector_2M: phase_steps must be >= 2");
  if (spec.alpha == Complex(0.0, 0.0) || spec.m == 0) return {1.0, 0.0};
  const auto band = detail::sector_band(spec, sector);
  const Eigen::MatrixXd Q = projector_kernel(band.grid, spec.m);

  const auto det_at = [&](double t) {
    const auto T =
        detail::doubled_kernel(band, Q, spec.beta, statistics, spec.alpha * t);
    return detail::determinant_of_identity_plus(T);
  };

  constexpr long kBudget = 60000;
  long evaluations = 0;
  const auto turn_ok = [](Complex a, Complex b) {
    const double dphi = std::arg(b / a);
    const double ratio = std::abs(b) / std::abs(a);
    return std::abs(dphi) < 0.5 * kPi && ratio > 0.5 && ratio < 2.0;
  };
  // Accumulated phase over [t0, t1] with endpoint determinants d0, d1.
  // Every segment is validated against its midpoint: the two half
  // increments must obey the turn bounds and stay on the same branch as
  // the whole-segment increment, otherwise a winding could hide inside a
  // segment whose endpoints look tame.
  const auto segment_phase = [&](auto&& self, double t0, Complex d0, double t1,
                                 Complex d1, int depth) -> double {
    if (depth > 48 || ++evaluations > kBudget)
      throw AccuracyFailure("genfunc_xy_sector_2M: phase tracking did not stabilize",
                            0.0, kPi);
    const double tm = 0.5 * (t0 + t1);
    const Complex dm = det_at(tm);
    if (dm == Complex(0.0, 0.0))
      throw SingularityError("genfunc_xy_sector_2M: determinant vanished on the path");
    const double left = std::arg(dm / d0);
    const double right = std::arg(d1 / dm);
    const double whole = std::arg(d1 / d0);
    if (turn_ok(d0, dm) && turn_ok(dm, d1) && std::abs(left + right - whole) < kPi)
      return left + right;
    return self(self, t0, d0, tm, dm, depth + 1) +
           self(self, tm, dm, t1, d1, depth + 1);
  };

  double phase = 0.0;
  Complex prev{1.0, 0.0};
  Complex current{1.0, 0.0};
  for (int k = 1; k <= phase_steps; ++k) {
    const double t0 = static_cast<double>(k - 1) / phase_steps;
    const double t1 = static_cast<double>(k) / phase_steps;
    current = det_at(t1);
    phase += segment_phase(segment_phase, t0, prev, t1, current, 0);
    prev = current;
  }
  const Complex logdet(std::log(std::abs(current)), phase);
  return std::exp(0.5 * spec.alpha * static_cast<double>(spec.m) + 0.5 * logdet);
}

struct SeriesEval {
  Complex value{1.0, 0.0};
  bool diverging = false;
  double tail_ratio = 0.0;  // |term_K| / |term_{K-1}|
};

// Truncated trace-log of the doubled kernel:
// e^{alpha m / 2} exp( (1/2) sum_{k<=K} (-1)^{k-1}/k tr[T^k] ).
// The occupation factors inside T are the closed-form Matsubara sums, so the
// truncation error is O(alpha^{K+1}). A non-decreasing last term flags
// divergence (the caller-side radius check).
inline SeriesEval genfunc_series(const ChainSpec& spec, Sector sector,
                                 Statistics statistics, int K) {
  spec.validate();
  if (K < 1) throw std::invalid_argument("genfunc_series: K must be >= 1");
  if (spec.alpha == Complex(0.0, 0.0) || spec.m == 0) return {};
  const auto band = detail::sector_band(spec, sector);
  const Eigen::MatrixXd Q = projector_kernel(band.grid, spec.m);
  const auto T = detail::doubled_kernel(band, Q, spec.beta, statistics, spec.alpha);

  Eigen::MatrixXcd P = T;
  Complex logsum{0.0, 0.0};
  double prev_mag = 0.0, last_mag = 0.0;
  for (int k = 1; k <= K; ++k) {
    const Complex term = ((k % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(k) * P.trace();
    logsum += 0.5 * term;
    prev_mag = last_mag;
    last_mag = std::abs(term);
    if (k < K) P *= T;
  }
  SeriesEval out;
  out.value = std::exp(0.5 * spec.alpha * static_cast<double>(spec.m) + logsum);
  out.tail_ratio = prev_mag > 0.0 ? last_mag / prev_mag : 0.0;
  out.diverging = K >= 2 && last_mag > 0.0 && last_mag >= prev_mag;
  return out;
}

// The product G * Z as a single M x M determinant,
//   det_M[ diag{d_q} + (e^alpha - 1)(Q/2) diag{d_q - e^{i theta_q} o_q} ],
// with (d, o) = (2 cosh, 2 sinh)(beta E_q / 2) for F and (2 sinh, 2 cosh)
// for B. Finite for every spectrum, including zero modes where Z vanishes.
inline Complex sector_gz_product(const ChainSpec& spec, Sector sector,
                                 Statistics statistics) {
  spec.validate();
  const auto band = detail::sector_band(spec, sector);
  const int n = spec.sites;
  Eigen::ArrayXcd diag(n), scaled(n);
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * spec.beta * band.sd.energy[i];
    const double d = (statistics == Statistics::F) ? 2.0 * std::cosh(x) : 2.0 * std::sinh(x);
    const double o = (statistics == Statistics::F) ? 2.0 * std::sinh(x) : 2.0 * std::cosh(x);
    diag[i] = d;
    scaled[i] = d - std::exp(Complex(0.0, band.sd.theta[i])) * o;
  }
  if (spec.alpha == Complex(0.0, 0.0) || spec.m == 0)
    return diag.prod();
  const Complex u = 0.5 * (std::exp(spec.alpha) - 1.0);
  const Eigen::MatrixXd Q = projector_kernel(band.grid, spec.m);
  Eigen::MatrixXcd A = diag.matrix().asDiagonal();
  A.noalias() += u * (Q.cast<Complex>() * scaled.matrix().asDiagonal());
  return A.partialPivLu().determinant();
}

struct SectorResult {
  Sector sector = Sector::Plus;
  Statistics statistics = Statistics::F;
  Complex G{1.0, 0.0};
  double Z = 0.0;
  Complex GZ{0.0, 0.0};
  bool series_diverging = false;  // only set by the Series representation
};

namespace detail {

inline Complex genfunc_by_representation(const ChainSpec& spec, Sector sector,
                                         Statistics st, const RepresentationChoice& rep,
                                         bool* diverging) {
  switch (rep.kind) {
    case RepresentationChoice::Kind::TwoMxTwoM:
      return genfunc_xy_sector_2M(spec, sector, st, rep.phase_steps);
    case RepresentationChoice::Kind::Series: {
      const SeriesEval eval = genfunc_series(spec, sector, st, rep.series_order);
      if (diverging) *diverging = eval.diverging;
      return eval.value;
    }
    case RepresentationChoice::Kind::MxM:
    default:
      return genfunc_xy_sector_M(spec, sector, st);
  }
}

}  // namespace detail

// Evaluates all four sector terms of the assembly. B sectors whose spectrum
// carries a mode with |E_q| < 1e-10 are evaluated through the joint product
// determinant instead of the factored G * Z (the Z ~ 0 regime).
inline std::array<SectorResult, 4> sector_results(const ChainSpec& spec,
                                                  const RepresentationChoice& rep = {}) {
  spec.validate();
  rep.validate();
  if (spec.beta <= 0.0)
    throw std::invalid_argument("sector_results: beta must be > 0");
  std::array<SectorResult, 4> out;
  int idx = 0;
  for (Sector sector : {Sector::Plus, Sector::Minus}) {
    const auto band = detail::sector_band(spec, sector);
    const double min_energy = band.sd.energy.abs().minCoeff();
    for (Statistics st : {Statistics::F, Statistics::B}) {
      SectorResult r;
      r.sector = sector;
      r.statistics = st;
      r.Z = sector_partition(spec, sector, st);
      if (st == Statistics::B && min_energy < 1e-10) {
        r.GZ = sector_gz_product(spec, sector, st);
        r.G = (r.Z != 0.0) ? r.GZ / r.Z
                           : Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
      } else {
        r.G = detail::genfunc_by_representation(spec, sector, st, rep,
                                                &r.series_diverging);
        r.GZ = r.G * r.Z;
      }
      out[idx++] = r;
    }
  }
  return out;
}

// (G+_F Z+_F + G-_F Z-_F + G+_B Z+_B - G-_B Z-_B) / (2 Z) from precomputed
// sector terms; the array order is (+,F), (+,B), (-,F), (-,B).
inline Complex assemble_from_sectors(const std::array<SectorResult, 4>& rs) {
  const double z2 = rs[0].Z + rs[2].Z + rs[1].Z - rs[3].Z;
  if (z2 <= 0.0)
    throw InternalInconsistency("assemble_generating_functional: non-positive Z");
  return (rs[0].GZ + rs[2].GZ + rs[1].GZ - rs[3].GZ) / z2;
}

inline Complex assemble_generating_functional(const ChainSpec& spec,
                                              const RepresentationChoice& rep = {}) {
  spec.validate();
  if (spec.alpha == Complex(0.0, 0.0)) return {1.0, 0.0};
  return assemble_from_sectors(sector_results(spec, rep));
}

}  // namespace xychain
