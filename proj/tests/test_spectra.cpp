#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weylcert/spectra.hpp"

using namespace weylcert;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2cd random_u2(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = std::complex<double>(normal(rng), normal(rng));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) q.col(j) *= std::conj(r(j, j)) / std::abs(r(j, j));
  return q;
}

Eigen::Matrix2cd rot2(double phi) {
  Eigen::Matrix2cd m;
  m << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return m;
}

Eigen::Matrix2cd d_theta2(double theta) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, theta);
  m(1, 1) = std::polar(1.0, -theta);
  return m;
}

Eigen::Matrix2cd u_theta2(double theta) {
  Eigen::Matrix2cd m;
  m << std::polar(1.0, theta), -1.0, 1.0, std::polar(1.0, -theta);
  return m / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("legendre recurrence against explicit coefficients") {
  CHECK(spectra::legendre(0, 0.77) == 1.0);
  CHECK(spectra::legendre(1, 0.25) == 0.25);
  // P10 by its explicit coefficient formula
  const double x = 0.5;
  const double p10 = (46189 * std::pow(x, 10) - 109395 * std::pow(x, 8) +
                      90090 * std::pow(x, 6) - 30030 * std::pow(x, 4) + 3465 * x * x - 63) /
                     256.0;
  CHECK(spectra::legendre(10, 0.5) == doctest::Approx(p10).epsilon(1e-14));
}

TEST_CASE("theta_delta eigenvalues") {
  const auto ones = spectra::theta_delta_eigs(1.0, 12);
  const auto alt = spectra::theta_delta_eigs(-1.0, 12);
  const auto zero = spectra::theta_delta_eigs(0.0, 12);
  for (int n = 0; n <= 12; ++n) {
    CHECK(ones[n] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(alt[n] == doctest::Approx(n % 2 ? -1.0 : 1.0).epsilon(1e-14));
    if (n % 2) CHECK(zero[n] == 0.0);
  }
}

TEST_CASE("theta_gap_norm values and the square-root bound") {
  CHECK(spectra::theta_gap_norm(0.0, 256) == 0.0);
  // sup at delta = 1 is attained at n = 2: |P_2(1) - P_2(0)| = 3/2
  CHECK(spectra::theta_gap_norm(1.0, 256) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(spectra::theta_gap_norm(0.25, 256) ==
        doctest::Approx(0.46729396656155586).epsilon(1e-12));
  for (int i = 0; i < 64; ++i) {
    const double delta = std::pow(10.0, -3.0 * (1.0 - i / 63.0));
    CHECK(spectra::theta_gap_norm(delta, 256) <= 4.0 * std::sqrt(delta));
  }
}

TEST_CASE("epsilon formula and interpolation consistency") {
  CHECK(spectra::epsilon({2.0}, 0.04) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(spectra::epsilon({3.7}, 0.0) == 0.0);
  CHECK(spectra::epsilon({4.0}, 1.0) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(spectra::epsilon({2.0}, 1.5), std::domain_error);

  // epsilon is the q -> infinity limit of the interpolated bound
  for (double p : {2.0, 3.0, 5.5}) {
    for (double delta : {0.01, 0.2, 0.9}) {
      const double limit = std::pow(4.0 * std::sqrt(delta), 2.0 / p) *
                           std::pow(2.0, 1.0 - 2.0 / p);
      CHECK(spectra::epsilon({p}, delta) == doctest::Approx(limit).epsilon(1e-12));
    }
  }

  // monotone nondecreasing in |delta|
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = spectra::epsilon({2.5}, i / 100.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("interp_bound") {
  CHECK(spectra::interp_bound(0.7, 0.7, 3.0, 9.0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(spectra::interp_bound(1.0, 2.0, 3.0, 6.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(spectra::interp_bound(1, 1, 1.5, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(spectra::interp_bound(1, 1, 5.0, 4.0), std::invalid_argument);
}

TEST_CASE("wigner_d small matrices and identities") {
  CHECK(spectra::wigner_d(0, 0.7)(0, 0) == doctest::Approx(1.0));

  // spin 1/2
  const double b = 0.9;
  const auto d1 = spectra::wigner_d(1, b);
  CHECK(d1(0, 0) == doctest::Approx(std::cos(b / 2)).epsilon(1e-14));
  CHECK(d1(0, 1) == doctest::Approx(-std::sin(b / 2)).epsilon(1e-14));
  CHECK(d1(1, 0) == doctest::Approx(std::sin(b / 2)).epsilon(1e-14));

  // spin 1 in the weight basis (m = 1, 0, -1)
  const auto d2 = spectra::wigner_d(2, b);
  CHECK(d2(0, 0) == doctest::Approx((1 + std::cos(b)) / 2).epsilon(1e-13));
  CHECK(d2(1, 0) == doctest::Approx(std::sin(b) / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(d2(0, 1) == doctest::Approx(-std::sin(b) / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(d2(1, 1) == doctest::Approx(std::cos(b)).epsilon(1e-13));
  CHECK(d2(2, 0) == doctest::Approx((1 - std::cos(b)) / 2).epsilon(1e-13));

  // d^l_{00}(theta) = P_l(cos theta)
  for (int l : {1, 2, 5, 10}) {
    const auto d = spectra::wigner_d(2 * l, 0.7);
    CHECK(d(l, l) == doctest::Approx(spectra::legendre(l, std::cos(0.7))).epsilon(1e-12));
  }

  // unitarity
  for (int two_l : {3, 8, 16}) {
    const auto d = spectra::wigner_d(two_l, 1.3);
    CHECK((d.transpose() * d - Eigen::MatrixXd::Identity(two_l + 1, two_l + 1))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  const auto big = spectra::wigner_d(128, kPi / 2.0);
  CHECK((big.transpose() * big - Eigen::MatrixXd::Identity(129, 129)).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("wigner_d agrees with the symmetric power of the rotation") {
  for (int m : {1, 2, 3, 5, 8, 12}) {
    const double b = 1.1;
    Eigen::Matrix2cd u = rot2(b / 2.0);
    const auto via_sym = spectra::sym_power_u2(u, m);
    const auto via_rec = spectra::wigner_d(m, b);
    CHECK((via_sym.real() - via_rec).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(via_sym.imag().cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("sym_power_u2 is a unitary homomorphism") {
  std::mt19937_64 rng(77);
  for (int m : {1, 2, 5, 8}) {
    const auto u1 = random_u2(rng);
    const auto u2 = random_u2(rng);
    const auto lhs = spectra::sym_power_u2(u1 * u2, m);
    const auto rhs = spectra::sym_power_u2(u1, m) * spectra::sym_power_u2(u2, m);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    const auto g = spectra::sym_power_u2(u1, m);
    CHECK((g.adjoint() * g - Eigen::MatrixXcd::Identity(m + 1, m + 1)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("t_theta_block values against group quadrature") {
  // trivial irrep
  CHECK(spectra::t_theta_block({0, 0}, 0.9).block(0, 0).real() == doctest::Approx(1.0));
  // theta = 0 gives the projection itself: norm 1 when invariants exist
  CHECK(spectra::t_theta_block({0, 2}, 0.0).spectral_norm() == doctest::Approx(1.0));
  CHECK(spectra::t_theta_block({0, 3}, 0.0).block.rows() == 0);   // odd m: no invariants

  // quadrature oracle: P pi(d_theta) P via 512-point circle averages
  for (int m : {2, 4, 6, 8}) {
    for (double theta : {kPi / 4.0, 0.6, 1.9}) {
      const int n = 512;
      Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(m + 1, m + 1);
      for (int i = 0; i < n; ++i) {
        proj += spectra::sym_power_u2(rot2(2.0 * kPi * i / n), m);
      }
      proj /= n;
      const Eigen::MatrixXcd full =
          proj * spectra::sym_power_u2(d_theta2(theta), m) * proj;
      const auto block = spectra::t_theta_block({0, m}, theta);
      // the compressed block is 1x1; compare against norm and trace
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(full);
      CHECK(block.spectral_norm() == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
      CHECK(std::abs(full.trace() - block.block(0, 0)) < 1e-10);
    }
  }

  // frozen small values
  CHECK(std::abs(spectra::t_theta_block({0, 2}, kPi / 4.0).block(0, 0)) < 1e-14);
  CHECK(spectra::t_theta_block({0, 4}, kPi / 4.0).block(0, 0).real() ==
        doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("s_theta_block values against conjugation-average quadrature") {
  CHECK(spectra::s_theta_block({0, 0}, 1.1).block(0, 0).real() == doctest::Approx(1.0));

  // m = 1: the block is diag(e^{i theta}, e^{-i theta}) / sqrt 2
  const auto b1 = spectra::s_theta_block({0, 1}, 0.8).block;
  CHECK(std::abs(b1(0, 0) - std::polar(1.0 / std::sqrt(2.0), 0.8)) < 1e-13);
  CHECK(std::abs(b1(1, 1) - std::polar(1.0 / std::sqrt(2.0), -0.8)) < 1e-13);
  CHECK(std::abs(b1(0, 1)) == 0.0);

  for (int m : {2, 3, 5, 8}) {
    for (double theta : {0.35, 1.4}) {
      const int n = 2048;
      Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(m + 1, m + 1);
      const auto u = spectra::sym_power_u2(u_theta2(theta), m);
      for (int i = 0; i < n; ++i) {
        const auto d = spectra::sym_power_u2(d_theta2(2.0 * kPi * i / n), m);
        avg += d * u * d.adjoint();
      }
      avg /= n;
      const auto block = spectra::s_theta_block({0, m}, theta).block;
      CHECK((avg - block).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("averaging blocks never exceed norm one") {
  for (int m = 0; m <= 32; ++m) {
    for (double theta : {0.1, 0.9, 2.3}) {
      CHECK(spectra::t_theta_block({0, m}, theta).spectral_norm() <= 1.0 + 1e-12);
      CHECK(spectra::s_theta_block({0, m}, theta).spectral_norm() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("op_norm_l2 basics") {
  CHECK(spectra::op_norm_l2(spectra::theta_delta_op(1.0), 64).value == doctest::Approx(1.0));
  const auto same =
      spectra::difference(spectra::t_theta_op(kPi / 4.0), kPi / 4.0);
  CHECK(spectra::op_norm_l2(same, 64).value == 0.0);

  // monotone in cutoff
  const auto kind = spectra::difference(spectra::s_theta_op(0.3), 0.35);
  double prev = -1.0;
  for (int cutoff : {8, 16, 32, 64, 128}) {
    const double v = spectra::op_norm_l2(kind, cutoff).value;
    CHECK(v >= prev);
    prev = v;
  }
  // frozen values with the documented < 5% cutoff drift
  CHECK(spectra::op_norm_l2(kind, 64).value == doctest::Approx(0.42109698779).epsilon(1e-9));
  CHECK(spectra::op_norm_l2(kind, 128).value == doctest::Approx(0.43369365792).epsilon(1e-9));
}

TEST_CASE("fit_exponent recovers planted slopes") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 10; ++i) {
    const double h = std::pow(10.0, -3.0 + 0.3 * i);
    pts.emplace_back(h, 2.7 * std::sqrt(h));
  }
  CHECK(spectra::fit_exponent(pts) == doctest::Approx(0.5).epsilon(1e-10));

  std::vector<std::pair<double, double>> few(pts.begin(), pts.begin() + 5);
  CHECK_THROWS_AS(spectra::fit_exponent(few), std::invalid_argument);
  std::vector<std::pair<double, double>> degenerate(10, {0.5, 1.0});
  CHECK_THROWS_AS(spectra::fit_exponent(degenerate), std::invalid_argument);
}

TEST_CASE("decay exponents of the two operator families") {
  std::vector<double> t_gaps, s_gaps;
  for (int i = 0; i < 12; ++i) {
    t_gaps.push_back(0.05 * std::pow((kPi / 12.0) / 0.05, i / 11.0));
    s_gaps.push_back(0.05 * std::pow(0.8 / 0.05, i / 11.0));
  }
  const double t_exp = spectra::fit_exponent(spectra::t_theta_gap_sweep(t_gaps, 64));
  const double s_exp = spectra::fit_exponent(spectra::s_theta_gap_sweep(s_gaps, 64, 0.9));
  CHECK(t_exp > 0.4);
  CHECK(t_exp < 0.6);
  CHECK(s_exp > 0.15);
  CHECK(s_exp < 0.35);
}

TEST_CASE("quad_apply_theta scales harmonics by Legendre values") {
  spectra::SphCoeffs f(6);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (auto& c : f.coeffs) c = {normal(rng), normal(rng)};

  SUBCASE("constant function is unchanged") {
    spectra::SphCoeffs g(4);
    g.at(0, 0) = 1.0;
    for (double delta : {-0.6, 0.0, 0.5, 1.0}) {
      const auto out = spectra::quad_apply_theta(g, delta, 64);
      CHECK(std::abs(out.at(0, 0) - 1.0) < 1e-12);
      for (int l = 1; l <= 4; ++l) CHECK(std::abs(out.at(l, 0)) < 1e-12);
    }
  }

  SUBCASE("diagonal action across the band") {
    for (double delta : {-1.0, -0.3, 0.2, 0.85}) {
      const auto eigs = spectra::theta_delta_eigs(delta, 6);
      const auto out = spectra::quad_apply_theta(f, delta, 64);
      for (int l = 0; l <= 6; ++l) {
        for (int m = -l; m <= l; ++m) {
          CHECK(std::abs(out.at(l, m) - eigs[l] * f.at(l, m)) < 1e-8);
        }
      }
    }
  }

  SUBCASE("delta = -1 is the parity flip") {
    const auto out = spectra::quad_apply_theta(f, -1.0, 64);
    for (int l = 0; l <= 6; ++l) {
      const double sign = (l % 2) ? -1.0 : 1.0;
      for (int m = -l; m <= l; ++m) {
        CHECK(std::abs(out.at(l, m) - sign * f.at(l, m)) < 1e-10);
      }
    }
  }

  SUBCASE("preconditions") {
    spectra::SphCoeffs wide(17);
    CHECK_THROWS_AS(spectra::quad_apply_theta(wide, 0.5, 64), std::invalid_argument);
    CHECK_THROWS_AS(spectra::quad_apply_theta(f, 0.5, 32), std::invalid_argument);
  }
}
