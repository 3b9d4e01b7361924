// test_oracle.cpp - the dense reference engine itself: spectra, symmetries,
// sector reassembly.
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <vector>

#include "xychain/oracle.hpp"
#include "xychain/partition.hpp"

using namespace xychain;

TEST_CASE("two-site isotropic spectrum") {
  const Eigen::MatrixXd H = build_spin_hamiltonian(2, 0.0, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  // Periodic closure doubles the single bond.
  CHECK(es.eigenvalues()[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.eigenvalues()[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(es.eigenvalues()[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(es.eigenvalues()[3] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spin hamiltonian symmetries") {
  const int sites = 6;
  const unsigned dim = 1u << sites;

  // [H, S^z] = 0 at the isotropic point.
  {
    const Eigen::MatrixXd H = build_spin_hamiltonian(sites, 0.0, 0.8);
    Eigen::VectorXd sz(dim);
    for (unsigned n = 0; n < dim; ++n)
      sz[n] = 0.5 * (sites - 2 * __builtin_popcount(n));
    const Eigen::MatrixXd commutator =
        H * sz.asDiagonal() - Eigen::MatrixXd(sz.asDiagonal()) * H;
    CHECK(commutator.cwiseAbs().maxCoeff() <= 1e-13);
  }

  // [H, (-1)^N] = 0 for any anisotropy: no matrix element changes parity.
  {
    const Eigen::MatrixXd H = build_spin_hamiltonian(sites, 0.8, 0.5);
    double off = 0.0;
    for (unsigned a = 0; a < dim; ++a)
      for (unsigned b = 0; b < dim; ++b)
        if ((__builtin_popcount(a) + __builtin_popcount(b)) % 2 == 1)
          off = std::max(off, std::abs(H(a, b)));
    CHECK(off <= 1e-13);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("sector hamiltonians reproduce the parity blocks of the spin chain") {
  const int sites = 6;
  const double gamma = 0.7, h = 0.9;
  const unsigned dim = 1u << sites;

  const Eigen::MatrixXd Hspin = build_spin_hamiltonian(sites, gamma, h);
  const Eigen::MatrixXd Hp = build_sector_hamiltonian(sites, gamma, h, Sector::Plus);
  const Eigen::MatrixXd Hm = build_sector_hamiltonian(sites, gamma, h, Sector::Minus);

  const auto parity_block_eigs = [&](const Eigen::MatrixXd& H, int parity) {
    std::vector<unsigned> idx;
    for (unsigned n = 0; n < dim; ++n)
      if (__builtin_popcount(n) % 2 == parity) idx.push_back(n);
    Eigen::MatrixXd block(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) block(a, b) = H(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    return Eigen::VectorXd(es.eigenvalues());
  };

  // Even parity is governed by the antiperiodic sector, odd by the periodic.
  const Eigen::VectorXd spin_even = parity_block_eigs(Hspin, 0);
  const Eigen::VectorXd plus_even = parity_block_eigs(Hp, 0);
  CHECK((spin_even - plus_even).cwiseAbs().maxCoeff() <= 1e-12);

  const Eigen::VectorXd spin_odd = parity_block_eigs(Hspin, 1);
  const Eigen::VectorXd minus_odd = parity_block_eigs(Hm, 1);
  CHECK((spin_odd - minus_odd).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sector traces against the product formulas") {
  ChainSpec spec;
  spec.sites = 6;
  spec.gamma = 0.7;
  spec.h = 0.6;
  spec.beta = 2.0;
  for (Sector sector : {Sector::Plus, Sector::Minus}) {
    CHECK(oracle_sector_trace(spec, sector, Statistics::F) ==
          doctest::Approx(sector_partition(spec, sector, Statistics::F))
              .epsilon(1e-11));
    CHECK(oracle_sector_trace(spec, sector, Statistics::B) ==
          doctest::Approx(sector_partition(spec, sector, Statistics::B))
              .epsilon(1e-11));
  }
}

TEST_CASE("generating functional basics") {
  ChainSpec spec;
  spec.sites = 6;
  spec.m = 3;
  spec.gamma = 0.5;
  spec.h = 1.2;
  spec.beta = 1.4;

  spec.alpha = Complex(0.0, 0.0);
  CHECK(std::abs(oracle_generating_functional(spec) - Complex(1.0, 0.0)) <= 1e-13);

  spec.alpha = Complex(0.45, 0.0);
  spec.beta = 0.0;
  const double want = std::pow(0.5 * (1.0 + std::exp(0.45)), 3);
  CHECK(std::abs(oracle_generating_functional(spec) - Complex(want, 0.0)) <=
        1e-12 * want);

  // Full window at alpha = i pi: the parity-weighted trace ratio.
  spec.beta = 1.4;
  spec.m = 6;
  spec.alpha = Complex(0.0, kPi);
  const Complex got = oracle_generating_functional(spec);
  double num = 0.0, den = 0.0;
  {
    ChainSpec at = spec;
    at.alpha = Complex(0.0, 0.0);
    // (2.9)-style reassembly of the parity trace from the sector engines.
    num = 0.5 * (oracle_sector_trace(at, Sector::Plus, Statistics::B) +
                 oracle_sector_trace(at, Sector::Minus, Statistics::B) +
                 oracle_sector_trace(at, Sector::Plus, Statistics::F) -
                 oracle_sector_trace(at, Sector::Minus, Statistics::F));
    den = total_partition(at);
  }
  CHECK(std::abs(got - Complex(num / den, 0.0)) <= 1e-11);
}

TEST_CASE("sector reassembly of the weighted trace") {
  ChainSpec spec;
  spec.sites = 6;
  spec.m = 2;
  spec.gamma = -0.4;
  spec.h = 0.9;
  spec.beta = 1.1;
  spec.alpha = Complex(0.35, 0.2);

  const Complex spin_numerator =
      oracle_generating_functional(spec) * total_partition(spec);
  const Complex reassembled = 0.5 * (oracle_sector_gz(spec, Sector::Plus, Statistics::F) +
                                     oracle_sector_gz(spec, Sector::Minus, Statistics::F) +
                                     oracle_sector_gz(spec, Sector::Plus, Statistics::B) -
                                     oracle_sector_gz(spec, Sector::Minus, Statistics::B));
  CHECK(std::abs(spin_numerator - reassembled) <=
        1e-11 * std::max(1.0, std::abs(spin_numerator)));
}

TEST_CASE("correlator symmetries") {
  ChainSpec spec;
  spec.sites = 6;
  spec.gamma = 0.0;
  spec.h = 0.0;
  spec.beta = 1.3;
  CHECK(std::abs(oracle_correlators(spec, 2, 5).sigma_z) <= 1e-12);  // particle-hole

  spec.beta = 0.0;
  spec.gamma = 0.6;
  spec.h = 0.7;
  CHECK(oracle_correlators(spec, 3, 3).zz == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(oracle_correlators(spec, 3, 5).zz) <= 1e-13);

  spec.beta = 1.5;
  const auto a = oracle_correlators(spec, 1, 3);
  const auto b = oracle_correlators(spec, 4, 6);
  CHECK(a.sigma_z == doctest::Approx(b.sigma_z).epsilon(1e-12));
  CHECK(a.zz == doctest::Approx(b.zz).epsilon(1e-12));
}

TEST_CASE("eigendecomposition residuals") {
  const Eigen::MatrixXd H = build_spin_hamiltonian(6, 0.8, 1.1);
  const auto es = diagonalize(H);
  const double scale = H.cwiseAbs().maxCoeff();
  for (int j = 0; j < H.rows(); j += 7) {
    const Eigen::VectorXd r = H * es.vectors.col(j) - es.values[j] * es.vectors.col(j);
    CHECK(r.norm() <= 1e-11 * scale);
  }
}

TEST_CASE("resource guard") {
  CHECK_THROWS_AS(build_spin_hamiltonian(14, 0.0, 0.0), ResourceLimit);
  ChainSpec spec;
  spec.sites = 14;
  CHECK_THROWS_AS(oracle_generating_functional(spec), ResourceLimit);
}
