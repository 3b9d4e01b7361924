// verify.cpp - the identity suite behind `xychain verify` and the
// acceptance tests. Every check reports its worst residual against a
// tolerance fixed here.

#include "xychain/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <random>

#include "xychain/chain.hpp"
#include "xychain/correlators.hpp"
#include "xychain/genfunc.hpp"
#include "xychain/oracle.hpp"
#include "xychain/partition.hpp"
#include "xychain/zeta.hpp"

namespace xychain {
namespace {

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  }
  int uniform_int(int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
  }
  Complex disk(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    const double phi = uniform(0.0, 2.0 * kPi);
    return {r * std::cos(phi), r * std::sin(phi)};
  }
};

double rel_residual(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}
double rel_residual(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

struct Recorder {
  VerifyReport* report;
  void add(const std::string& name, int criterion, double residual, double tol) {
    report->checks.push_back({name, criterion, residual, tol, residual <= tol});
  }
};

double min_abs_energy(const ChainSpec& spec, Sector sector) {
  const auto grid = build_momentum_grid(spec.sites, sector);
  return dispersion(spec, grid).energy.abs().minCoeff();
}

double min_abs_band(const ChainSpec& spec, Sector sector) {
  const auto grid = build_momentum_grid(spec.sites, sector);
  return dispersion(spec, grid).eps.abs().minCoeff();
}

ChainSpec random_spec(Sampler& s, int sites, double beta_lo = 0.1, double beta_hi = 5.0) {
  ChainSpec spec;
  spec.sites = sites;
  spec.m = s.uniform_int(0, sites);
  spec.gamma = s.uniform(-1.0, 1.0);
  spec.h = s.uniform(0.0, 2.0);
  spec.beta = s.uniform(beta_lo, beta_hi);
  spec.alpha = s.disk(1.0);
  return spec;
}

// Every sector spectrum stays away from zero modes; used where a check
// legitimately needs the parity-weighted route to be regular.
ChainSpec random_regular_spec(Sampler& s, int sites, double floor_energy,
                              double beta_lo = 0.1, double beta_hi = 5.0) {
  for (int tries = 0; tries < 400; ++tries) {
    ChainSpec spec = random_spec(s, sites, beta_lo, beta_hi);
    const double e = std::min(min_abs_energy(spec, Sector::Plus),
                              min_abs_energy(spec, Sector::Minus));
    const double b = std::min(min_abs_band(spec, Sector::Plus),
                              min_abs_band(spec, Sector::Minus));
    if (e >= floor_energy && b >= floor_energy) return spec;
  }
  throw InternalInconsistency("random_regular_spec: sampling failed");
}

// ---------------------------------------------------------------- criterion 1
void check_oracle_genfunc(Recorder& rec, Sampler& s, const VerifyOptions& opt) {
  double worst = 0.0;
  for (int sites = 2; sites <= opt.max_sites; sites += 2) {
    for (int k = 0; k < opt.samples; ++k) {
      ChainSpec spec = random_spec(s, sites);
      const auto es = diagonalize(build_spin_hamiltonian(sites, spec.gamma, spec.h));
      for (const Complex alpha : {spec.alpha, Complex(0.0, kPi)}) {
        spec.alpha = alpha;
        const Complex got = assemble_generating_functional(spec);
        const Complex want = oracle_generating_functional(spec, es);
        worst = std::max(worst, rel_residual(got, want));
      }
    }
  }
  rec.add("oracle: generating functional", 1, worst, opt.tol);
}

// ---------------------------------------------------------------- criterion 2
void check_partition_identities(Recorder& rec, Sampler& s, const VerifyOptions& opt) {
  double worst_sector = 0.0, worst_total = 0.0, worst_infinite_t = 0.0;
  for (int sites = 2; sites <= opt.max_sites; sites += 2) {
    for (int k = 0; k < std::max(4, opt.samples / 5); ++k) {
      const ChainSpec spec = random_spec(s, sites);
      double z2 = 0.0;
      for (Sector sector : {Sector::Plus, Sector::Minus}) {
        const double zf = oracle_sector_trace(spec, sector, Statistics::F);
        for (Statistics st : {Statistics::F, Statistics::B}) {
          const double got = sector_partition(spec, sector, st);
          const double want = oracle_sector_trace(spec, sector, st);
          // The parity-weighted trace is an alternating sum evaluated at
          // the plain-trace scale; the dense side carries that scale in
          // its rounding, so the comparison must as well.
          const double scale = std::max({1.0, std::abs(want), std::abs(zf)});
          worst_sector = std::max(worst_sector, std::abs(got - want) / scale);
          z2 += (sector == Sector::Minus && st == Statistics::B) ? -want : want;
        }
      }
      worst_total = std::max(worst_total,
                             rel_residual(total_partition(spec), 0.5 * z2));
    }
    ChainSpec cold = random_spec(s, sites);
    cold.beta = 0.0;
    worst_infinite_t = std::max(
        worst_infinite_t, rel_residual(total_partition(cold), std::pow(2.0, sites)));
  }
  rec.add("oracle: sector partition traces", 2, worst_sector, opt.tol);
  rec.add("oracle: total partition", 2, worst_total, opt.tol);
  rec.add("partition: infinite-temperature count", 2, worst_infinite_t, 1e-12);
}

// ---------------------------------------------------------------- criterion 3
// Full-window closed product for the plain statistics: pair +-q (their
// factors coincide) and take the explicit square root on the self-paired
// momenta q = 0, pi where the angle vanishes.
Complex closed_product_full_window(const ChainSpec& spec, Sector sector) {
  const auto grid = build_momentum_grid(spec.sites, sector);
  const auto sd = dispersion(spec, grid);
  const Complex a = spec.alpha;
  const Complex ch2 = std::cosh(0.5 * a) * std::cosh(0.5 * a);
  const Complex sh2 = std::sinh(0.5 * a) * std::sinh(0.5 * a);
  const Complex sh = std::sinh(a);
  Complex prod{1.0, 0.0};
  for (Eigen::Index i = 0; i < grid.q.size(); ++i) {
    const double t = std::tanh(0.5 * spec.beta * sd.energy[i]);
    if (grid.q[i] == 0.0 || grid.q[i] == kPi) {
      prod *= std::cosh(0.5 * a) - std::sinh(0.5 * a) * t;
    } else if (grid.q[i] > 0.0) {
      prod *= ch2 - sh * std::cos(sd.theta[i]) * t + sh2 * (t * t);
    }
  }
  return std::exp(0.5 * a * static_cast<double>(spec.sites)) * prod;
}

void check_reductions(Recorder& rec, Sampler& s) {
  // (a) full window at alpha = i pi: G_F = Z_B / Z_F.
  double worst_a = 0.0;
  for (int k = 0; k < 20; ++k) {
    ChainSpec spec = random_regular_spec(s, 4 + 2 * (k % 4), 1e-3);
    spec.m = spec.sites;
    spec.alpha = Complex(0.0, kPi);
    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      const double want = sector_partition(spec, sector, Statistics::B) /
                          sector_partition(spec, sector, Statistics::F);
      const Complex got = genfunc_xy_sector_M(spec, sector, Statistics::F);
      worst_a = std::max(worst_a, rel_residual(got, Complex(want, 0.0)));
    }
  }
  rec.add("reduction: parity ratio at alpha = i pi", 3, worst_a, 1e-12);

  // (b) isotropic point: the anisotropic route collapses to the XX kernel.
  double worst_b = 0.0;
  for (int k = 0; k < 30; ++k) {
    ChainSpec spec = random_regular_spec(s, 4 + 2 * (k % 5), 1e-3);
    spec.gamma = 0.0;
    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      for (Statistics st : {Statistics::F, Statistics::B}) {
        const Complex xy = genfunc_xy_sector_M(spec, sector, st);
        const Complex xx = genfunc_xx_sector(spec, sector, st);
        worst_b = std::max(worst_b, rel_residual(xy, xx));
      }
    }
  }
  rec.add("reduction: isotropic kernel", 3, worst_b, 1e-10);

  // (c) full-window closed product against the M x M determinant.
  double worst_c = 0.0;
  for (int k = 0; k < 30; ++k) {
    ChainSpec spec = random_spec(s, 4 + 2 * (k % 5));
    spec.m = spec.sites;
    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      const Complex got = closed_product_full_window(spec, sector);
      const Complex want = genfunc_xy_sector_M(spec, sector, Statistics::F);
      worst_c = std::max(worst_c, rel_residual(got, want));
    }
  }
  rec.add("reduction: full-window closed product", 3, worst_c, 1e-10);

  // (d) representation cross-agreement, sizes up to 16.
  double worst_d = 0.0, worst_series = 0.0;
  for (int k = 0; k < 24; ++k) {
    const int sites = std::min(16, 4 + 4 * (k % 4));
    ChainSpec spec = random_regular_spec(s, sites, 1e-3, 0.2, 4.0);
    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      for (Statistics st : {Statistics::F, Statistics::B}) {
        const Complex via_m = genfunc_xy_sector_M(spec, sector, st);
        const Complex via_2m = genfunc_xy_sector_2M(spec, sector, st);
        worst_d = std::max(worst_d, rel_residual(via_2m, via_m));
      }
    }
    ChainSpec small = spec;
    small.alpha = spec.alpha * (0.1 / std::max(0.1, std::abs(spec.alpha)));
    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      const Complex via_m = genfunc_xy_sector_M(small, sector, Statistics::F);
      const auto series = genfunc_series(small, sector, Statistics::F, 12);
      worst_series = std::max(worst_series, rel_residual(series.value, via_m));
      // The coth kernel needs beta E >= 0.6 to keep the truncated series
      // tail below the cross-agreement tolerance at order 12.
      const double floor_b = 0.6 / small.beta;
      if (min_abs_energy(small, sector) >= floor_b) {
        const Complex mb = genfunc_xy_sector_M(small, sector, Statistics::B);
        const auto sb = genfunc_series(small, sector, Statistics::B, 12);
        worst_series = std::max(worst_series, rel_residual(sb.value, mb));
      }
    }
  }
  rec.add("representation: doubled determinant", 3, worst_d, 1e-9);
  rec.add("representation: truncated trace-log", 3, worst_series, 1e-9);
}

// ---------------------------------------------------------------- criterion 4
void check_derivatives(Recorder& rec, Sampler& s, const VerifyOptions& opt) {
  // Central differences of the log determinants, step sweep {1e-4, 1e-5},
  // each order scaled by max(1, |closed form|).
  const auto fd_residual = [](double d1, double d2, auto&& eval_log) {
    double best = std::numeric_limits<double>::infinity();
    for (const double step : {1e-4, 1e-5}) {
      const Complex lp = eval_log(step);
      const Complex lm = eval_log(-step);
      const Complex fd1 = (lp - lm) / (2.0 * step);
      const Complex fd2 = (lp + lm) / (step * step) + fd1 * fd1;  // ratio form
      const double r1 = std::abs(d1 - fd1) / std::max(1.0, std::abs(d1));
      const double r2 = std::abs(d2 - fd2) / std::max(1.0, std::abs(d2));
      best = std::min(best, std::max(r1, r2));
    }
    return best;
  };

  double worst_fd = 0.0;
  double worst_routes = 0.0;
  for (int k = 0; k < opt.samples; ++k) {
    const int sites = 4 + 2 * (k % 3);
    // Keep beta * E away from zero: the coth kernel scale enters the
    // third and fourth derivatives that bound the finite-difference
    // truncation error.
    ChainSpec spec;
    do {
      spec = random_regular_spec(s, sites, 1e-3, 0.2, 3.0);
    } while (spec.beta * std::min({min_abs_energy(spec, Sector::Plus),
                                   min_abs_energy(spec, Sector::Minus),
                                   min_abs_band(spec, Sector::Plus),
                                   min_abs_band(spec, Sector::Minus)}) < 0.3);
    if (spec.m == 0) spec.m = 1;

    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      for (Statistics st : {Statistics::F, Statistics::B}) {
        // XX route: derivatives of log det against finite differences.
        worst_fd = std::max(
            worst_fd,
            fd_residual(dlogdet_alpha0_xx(spec, sector, st, 1),
                        dlogdet_alpha0_xx(spec, sector, st, 2), [&](double a) {
                          ChainSpec sp = spec;
                          sp.alpha = Complex(a, 0.0);
                          return std::log(genfunc_xx_sector(sp, sector, st));
                        }));
        // Doubled route: derivatives of log det^{1/2} (prefactor removed).
        worst_fd = std::max(
            worst_fd,
            fd_residual(dlogdet_alpha0_xy(spec, sector, st, 1),
                        dlogdet_alpha0_xy(spec, sector, st, 2), [&](double a) {
                          ChainSpec sp = spec;
                          sp.alpha = Complex(a, 0.0);
                          return std::log(genfunc_xy_sector_M(sp, sector, st)) -
                                 Complex(0.5 * a * sp.m, 0.0);
                        }));
        // The two printed second-derivative routes agree.
        const Complex a = sector_gsecond0_M(spec, sector, st);
        const Complex b = sector_gsecond0_2M(spec, sector, st);
        worst_routes = std::max(worst_routes, rel_residual(a, b));
      }
    }
  }
  rec.add("derivative: finite differences", 4, worst_fd, 1e-5);
  rec.add("derivative: two trace routes", 4, worst_routes, 1e-12);
}

// ---------------------------------------------------------------- criterion 5
void check_correlators(Recorder& rec) {
  const int big = 1024;
  const double quad_tol = 1e-12;
  double worst_limit = 0.0;
  for (const auto& [gamma, h, beta] : std::initializer_list<std::array<double, 3>>{
           {0.5, 1.4, 1.0}, {0.8, 0.6, 2.0}, {0.0, 1.2, 1.0}, {-0.4, 1.7, 0.6}}) {
    ChainSpec spec;
    spec.sites = big;
    spec.m = big / 2;
    spec.gamma = gamma;
    spec.h = h;
    spec.beta = beta;
    const double sz_fin = sigma_z_finite(spec);
    const double sz_lim = sigma_z_limit(gamma, h, beta, quad_tol);
    worst_limit = std::max(worst_limit, std::abs(sz_fin - sz_lim));
    for (int n : {1, 2, 5}) {
      const double zz_fin = zz_finite(spec, n);
      const double zz_lim_v = zz_limit(gamma, h, beta, n, quad_tol);
      worst_limit = std::max(worst_limit, std::abs(zz_fin - zz_lim_v));
    }
  }
  rec.add("correlator: finite size vs limit", 5, worst_limit, 1e-3);

  double worst_xx = 0.0;
  for (const auto& [h, beta] : std::initializer_list<std::array<double, 2>>{
           {1.2, 1.0}, {0.5, 2.0}, {1.7, 0.7}}) {
    worst_xx = std::max(worst_xx, std::abs(sigma_z_limit(0.0, h, beta, quad_tol) -
                                           sigma_z_limit_xx(h, beta, quad_tol)));
    for (int n : {1, 3, 7}) {
      worst_xx = std::max(worst_xx, std::abs(zz_limit(0.0, h, beta, n, quad_tol) -
                                             zz_limit_xx(h, beta, n, quad_tol)));
    }
  }
  rec.add("correlator: isotropic forms", 5, worst_xx, 1e-8);

  // With the field coupled through -h S^z, S^z = (1/2) sum sigma^z, the
  // field derivative of the per-site free energy carries the spin-1/2
  // factor: <sigma^z> = -2 dF/dh.
  double worst_mag = 0.0;
  for (const auto& [gamma, h, beta] : std::initializer_list<std::array<double, 3>>{
           {0.5, 1.4, 1.0}, {0.0, 1.2, 1.0}, {0.9, 0.6, 2.5}}) {
    const double step = 1e-5;
    const double dF = (free_energy_limit(gamma, h + step, beta, 1e-13) -
                       free_energy_limit(gamma, h - step, beta, 1e-13)) /
                      (2.0 * step);
    const double sz = sigma_z_limit(gamma, h, beta, 1e-13);
    worst_mag = std::max(worst_mag, std::abs(sz + 2.0 * dF));
  }
  rec.add("correlator: magnetization vs free energy", 5, worst_mag, 1e-6);
}

// ---------------------------------------------------------------- criterion 6
void check_zeta(Recorder& rec, Sampler& s) {
  double worst_zero = 0.0, worst_prime = 0.0, worst_fd = 0.0, worst_rec = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Complex a(s.uniform(0.1, 4.0), s.uniform(-4.0, 4.0));
    worst_zero = std::max(worst_zero,
                          std::abs(hurwitz_zeta(Complex(0.0, 0.0), a).value -
                                   (0.5 - a)));
    const Complex expected = log_gamma(a) - 0.5 * std::log(2.0 * kPi);
    worst_prime = std::max(worst_prime, std::abs(hurwitz_zeta_sprime0(a) - expected));
    if (k < 25) {
      const double ds = 1e-6;
      const Complex fd = (hurwitz_zeta(Complex(ds, 0.0), a).value -
                          hurwitz_zeta(Complex(-ds, 0.0), a).value) /
                         (2.0 * ds);
      worst_fd = std::max(worst_fd, std::abs(hurwitz_zeta_sprime0(a) - fd));
    }
    const Complex sv(s.uniform(-2.0, 4.0), s.uniform(-3.0, 3.0));
    if (std::abs(sv - Complex(1.0, 0.0)) > 0.1) {
      const Complex lhs =
          hurwitz_zeta(sv, a).value - hurwitz_zeta(sv, a + 1.0).value;
      const Complex rhs = std::exp(-sv * std::log(a));
      worst_rec = std::max(worst_rec, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  rec.add("zeta: value at the origin", 6, worst_zero, 1e-10);
  rec.add("zeta: derivative at the origin", 6, worst_prime, 1e-10);
  rec.add("zeta: derivative vs finite difference", 6, worst_fd, 1e-8);
  rec.add("zeta: shift recurrence", 6, worst_rec, 1e-9);

  double worst_mats = 0.0;
  for (int k = 0; k < 12; ++k) {
    const ChainSpec spec = random_regular_spec(s, 4 + 2 * (k % 3), 1e-2, 0.2, 3.0);
    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      const double e0 = sector_zero_point_energy(spec, sector);
      for (Statistics st : {Statistics::F, Statistics::B}) {
        const Complex logdet = regularized_logdet_partition(spec, sector, st, -1);
        const Complex recovered = std::exp(logdet - spec.beta * e0);
        const double want = sector_partition(spec, sector, st);
        worst_mats = std::max(worst_mats, rel_residual(recovered, Complex(want, 0.0)));
      }
    }
  }
  rec.add("zeta: matsubara partition", 6, worst_mats, 1e-10);

  double worst_mellin = 0.0;
  for (const double lambda : {0.1, 1.0, 5.0}) {
    for (const double beta : {0.5, 1.0, 2.0}) {
      const auto r = single_mode_mellin(lambda, beta, 1e-6);
      worst_mellin = std::max(worst_mellin, r.achieved_error);
      const Complex want(1.0 + std::exp(-beta * lambda), 0.0);
      worst_mellin = std::max(worst_mellin, rel_residual(r.det, want));
    }
  }
  rec.add("zeta: single-mode heat kernel", 6, worst_mellin, 1e-6);
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport report;
  Recorder rec{&report};
  Sampler sampler(options.seed);

  try {
    check_oracle_genfunc(rec, sampler, options);
    report.oracle_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check_partition_identities(rec, sampler, options);
    check_reductions(rec, sampler);
    check_derivatives(rec, sampler, options);
    check_correlators(rec);
    check_zeta(rec, sampler);
  } catch (const AccuracyFailure&) {
    report.accuracy_failure = true;
    throw;
  }

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.checks.push_back({"runtime under five minutes", 7, report.seconds, 300.0,
                           report.seconds < 300.0});
  return report;
}

}  // namespace xychain
