// test_correlators.cpp - derivative formulas, charge moments, spin
// correlators at finite size and in the limit.
#include "doctest.h"

#include <random>

#include "xychain/correlators.hpp"
#include "xychain/oracle.hpp"

using namespace xychain;

namespace {

ChainSpec make_spec(int sites, int m, double gamma, double h, double beta) {
  ChainSpec spec;
  spec.sites = sites;
  spec.m = m;
  spec.gamma = gamma;
  spec.h = h;
  spec.beta = beta;
  return spec;
}

}  // namespace

TEST_CASE("empty band limit of the XX derivative") {
  // h > 2 and beta large: every mode empty, the occupation trace vanishes.
  const ChainSpec spec = make_spec(6, 6, 0.0, 2.5, 50.0);
  CHECK(std::abs(dlogdet_alpha0_xx(spec, Sector::Plus, Statistics::F, 1)) <= 1e-20);
}

TEST_CASE("closed derivatives match finite differences of the determinants") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> ug(-1.0, 1.0), uh(0.0, 2.0), ub(0.3, 2.5);
  for (int k = 0; k < 6; ++k) {
    ChainSpec spec = make_spec(4 + 2 * (k % 2), 0, ug(rng), uh(rng), ub(rng));
    spec.m = 1 + k % spec.sites;
    // keep beta * E away from zero so the coth kernels stay within the
    // finite-difference truncation budget
    const auto min_energy = [&](Sector sector) {
      return dispersion(spec, build_momentum_grid(spec.sites, sector)).energy.abs().minCoeff();
    };
    const auto min_band = [&](Sector sector) {
      return dispersion(spec, build_momentum_grid(spec.sites, sector)).eps.abs().minCoeff();
    };
    if (spec.beta * std::min(min_energy(Sector::Plus), min_energy(Sector::Minus)) < 0.3)
      continue;
    if (spec.beta * std::min(min_band(Sector::Plus), min_band(Sector::Minus)) < 0.3)
      continue;

    for (Sector sector : {Sector::Plus, Sector::Minus}) {
      for (Statistics st : {Statistics::F, Statistics::B}) {
        const double step = 1e-4;
        // XX route.
        {
          const auto value = [&](double a) {
            ChainSpec at = spec;
            at.alpha = Complex(a, 0.0);
            return genfunc_xx_sector(at, sector, st);
          };
          const Complex lp = std::log(value(step)), lm = std::log(value(-step));
          const Complex fd1 = (lp - lm) / (2.0 * step);
          const Complex fd2 = (lp + lm) / (step * step) + fd1 * fd1;
          CHECK(std::abs(dlogdet_alpha0_xx(spec, sector, st, 1) - fd1) <=
                1e-5 * std::max(1.0, std::abs(fd1)));
          CHECK(std::abs(dlogdet_alpha0_xx(spec, sector, st, 2) - fd2) <=
                1e-5 * std::max(1.0, std::abs(fd2)));
        }
        // Doubled route, prefactor removed.
        {
          const auto value = [&](double a) {
            ChainSpec at = spec;
            at.alpha = Complex(a, 0.0);
            return std::log(genfunc_xy_sector_M(at, sector, st)) -
                   Complex(0.5 * a * at.m, 0.0);
          };
          const Complex lp = value(step), lm = value(-step);
          const Complex fd1 = (lp - lm) / (2.0 * step);
          const Complex fd2 = (lp + lm) / (step * step) + fd1 * fd1;
          CHECK(std::abs(dlogdet_alpha0_xy(spec, sector, st, 1) - fd1) <=
                1e-5 * std::max(1.0, std::abs(fd1)));
          CHECK(std::abs(dlogdet_alpha0_xy(spec, sector, st, 2) - fd2) <=
                1e-5 * std::max(1.0, std::abs(fd2)));
        }
        // The two printed trace routes for the second derivative coincide.
        const Complex a2 = sector_gsecond0_M(spec, sector, st);
        const Complex b2 = sector_gsecond0_2M(spec, sector, st);
        CHECK(std::abs(a2 - b2) <= 1e-12 * std::max(1.0, std::abs(a2)));
      }
    }
  }
}

TEST_CASE("the two first-derivative kernel routes agree at general anisotropy") {
  ChainSpec spec = make_spec(8, 3, 0.8, 1.4, 1.2);
  for (Sector sector : {Sector::Plus, Sector::Minus}) {
    for (Statistics st : {Statistics::F, Statistics::B}) {
      const Complex half = sector_gprime0(spec, sector, st);  // half-kernel trace
      const double doubled = 0.5 * spec.m + dlogdet_alpha0_xy(spec, sector, st, 1);
      CHECK(std::abs(half - Complex(doubled, 0.0)) <=
            1e-12 * std::max(1.0, std::abs(doubled)));
    }
  }
}

TEST_CASE("isotropic reduction of the derivative formulas") {
  ChainSpec spec = make_spec(6, 3, 0.0, 1.3, 1.1);
  for (Sector sector : {Sector::Plus, Sector::Minus}) {
    for (Statistics st : {Statistics::F, Statistics::B}) {
      // G-level first derivative: XX trace vs the doubled trace + prefactor.
      const double xx = dlogdet_alpha0_xx(spec, sector, st, 1);
      const double xy = 0.5 * spec.m + dlogdet_alpha0_xy(spec, sector, st, 1);
      CHECK(xx == doctest::Approx(xy).epsilon(1e-12));
      const double xx2 = dlogdet_alpha0_xx(spec, sector, st, 2);
      const Complex xy2 = sector_gsecond0_M(spec, sector, st);
      CHECK(std::abs(xy2 - Complex(xx2, 0.0)) <= 1e-12 * std::max(1.0, std::abs(xx2)));
    }
  }
}

TEST_CASE("charge moments") {
  ChainSpec spec = make_spec(6, 0, 0.6, 1.3, 1.1);
  const auto zero = q_moments(spec);
  CHECK(zero.q1 == 0.0);
  CHECK(zero.q2 == 0.0);

  // Near-infinite temperature: independent fair bits.
  spec = make_spec(6, 3, 0.6, 1.3, 1e-8);
  const auto hot = q_moments(spec);
  CHECK(hot.q1 == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(hot.q2 == doctest::Approx(3.0 / 4 + 9.0 / 4).epsilon(1e-6));

  // Random instances against the dense engine.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ug(-1.0, 1.0), uh(0.0, 2.0), ub(0.3, 2.5);
  for (int k = 0; k < 6; ++k) {
    ChainSpec s = make_spec(6, 1 + k % 6, ug(rng), uh(rng), ub(rng));
    const auto got = q_moments(s);
    const auto want = oracle_q_moments(s);
    CHECK(got.q1 == doctest::Approx(want.first).epsilon(1e-11));
    CHECK(got.q2 == doctest::Approx(want.second).epsilon(1e-11));
  }
}

TEST_CASE("finite-size correlators against the dense engine") {
  const double gamma = 0.5, h = 1.2, beta = 1.0;
  ChainSpec spec = make_spec(8, 4, gamma, h, beta);
  const auto oc = oracle_correlators(spec, 2, 2);
  CHECK(sigma_z_finite(spec) == doctest::Approx(oc.sigma_z).epsilon(1e-10));
  for (int n : {1, 2, 3}) {
    const auto want = oracle_correlators(spec, n + 1, 1);
    CHECK(zz_finite(spec, n) == doctest::Approx(want.zz).epsilon(1e-9));
  }
}

TEST_CASE("window-position independence of sigma_z") {
  ChainSpec spec = make_spec(8, 1, 0.7, 0.8, 1.5);
  const double first = sigma_z_finite(spec);
  for (int m : {2, 4, 7}) {
    spec.m = m;
    CHECK(sigma_z_finite(spec) == doctest::Approx(first).epsilon(1e-11));
  }
}

TEST_CASE("reflection symmetry of the periodic-chain correlator") {
  ChainSpec spec = make_spec(8, 1, 0.6, 1.3, 1.2);
  for (int n : {1, 2, 3}) {
    CHECK(zz_finite(spec, n) ==
          doctest::Approx(zz_finite(spec, spec.sites - n)).epsilon(1e-12));
  }
}

TEST_CASE("sum rule ties the correlators to the total charge variance") {
  ChainSpec spec = make_spec(8, 8, 0.5, 1.2, 1.0);
  const auto qm = q_moments(spec);
  const double var_total = qm.q2 - qm.q1 * qm.q1;

  ChainSpec site = spec;
  site.m = 1;
  const double sz = sigma_z_finite(site);
  double sum = 1.0 - sz * sz;  // single-site variance of sigma^z
  for (int n = 1; n <= spec.sites - 1; ++n)
    sum += zz_finite(spec, n) - sz * sz;
  CHECK(sum == doctest::Approx(4.0 * var_total / spec.sites).epsilon(1e-9));
}

TEST_CASE("limit magnetization") {
  // Strong field: polarization approaches 1 with an O((gamma/h)^2) deficit.
  CHECK(std::abs(sigma_z_limit(0.5, 50.0, 2.0, 1e-12) - 1.0) <= 1e-4);
  CHECK(std::abs(sigma_z_limit(0.5, 5000.0, 2.0, 1e-12) - 1.0) <= 1e-8);

  // Isotropic limit form agrees with the general form.
  for (double h : {0.5, 1.2}) {
    CHECK(sigma_z_limit(0.0, h, 1.3, 1e-12) ==
          doctest::Approx(sigma_z_limit_xx(h, 1.3, 1e-12)).epsilon(1e-10));
  }

  // Against the 1024-site chain.
  ChainSpec spec = make_spec(1024, 512, 0.5, 1.4, 1.0);
  CHECK(std::abs(sigma_z_finite(spec) - sigma_z_limit(0.5, 1.4, 1.0, 1e-12)) <= 1e-3);
}

TEST_CASE("limit zz correlator") {
  // Isotropic cross-check of the two quadrature routes.
  for (int n : {1, 4}) {
    CHECK(std::abs(zz_limit(0.0, 1.2, 1.0, n, 1e-10) -
                   zz_limit_xx(1.2, 1.0, n, 1e-10)) <= 1e-8);
  }

  // Fourier decay of the connected part away from criticality.
  const double far = zz_limit(0.3, 1.5, 1.0, 200, 1e-10);
  const double sz = sigma_z_limit(0.3, 1.5, 1.0, 1e-12);
  CHECK(std::abs(far - sz * sz) <= 1e-6);

  // Against the 1024-site chain.
  ChainSpec spec = make_spec(1024, 1, 0.8, 0.6, 2.0);
  for (int n : {1, 3}) {
    CHECK(std::abs(zz_finite(spec, n) - zz_limit(0.8, 0.6, 2.0, n, 1e-12)) <= 1e-3);
  }
}

TEST_CASE("aggregate helper") {
  ChainSpec spec = make_spec(6, 3, 0.4, 1.1, 1.2);
  const auto tc = finite_correlators(spec, {1, 2});
  CHECK(tc.q1 == doctest::Approx(q_moments(spec).q1));
  CHECK(tc.zz.size() == 2);
  CHECK(tc.zz.at(1) == doctest::Approx(zz_finite(spec, 1)));
  CHECK(tc.sigma_z >= -1.0);
  CHECK(tc.sigma_z <= 1.0);
  CHECK(tc.q1 >= 0.0);
  CHECK(tc.q1 <= spec.m);
  CHECK(tc.q2 >= tc.q1 * tc.q1 - 1e-12);
}

TEST_CASE("argument guards") {
  ChainSpec spec = make_spec(6, 0, 0.4, 1.1, 1.2);
  CHECK_THROWS_AS(sigma_z_finite(spec), std::invalid_argument);
  spec.m = 3;
  CHECK_THROWS_AS(zz_finite(spec, 0), std::invalid_argument);
  CHECK_THROWS_AS(zz_finite(spec, 6), std::invalid_argument);
  CHECK_THROWS_AS(dlogdet_alpha0_xx(spec, Sector::Plus, Statistics::F, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(sigma_z_limit(0.5, 1.0, -1.0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(zz_limit(0.5, 1.0, 1.0, 0, 1e-8), std::invalid_argument);

  // Zero mode at h = 1 propagates from the parity-weighted sector.
  ChainSpec critical = make_spec(4, 2, 0.5, 1.0, 1.0);
  CHECK_THROWS_AS(q_moments(critical), SingularityError);
}
