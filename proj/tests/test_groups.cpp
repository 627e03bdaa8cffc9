#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "weylcert/groups.hpp"

using namespace weylcert;
using groups::GroupTag;

namespace {
constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("k_delta named values") {
  CHECK(max_abs(groups::k_delta(1.0).mat - Eigen::Matrix3d::Identity()) == 0.0);

  Eigen::Matrix3d quarter;  // rotation by pi/2 in the (1,2)-plane
  quarter << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK(max_abs(groups::k_delta(0.0).mat - quarter) < 1e-15);

  Eigen::Matrix3d k06;
  k06 << 0.6, -0.8, 0, 0.8, 0.6, 0, 0, 0, 1;
  CHECK(max_abs(groups::k_delta(0.6).mat - k06) < 1e-15);

  CHECK_THROWS_AS(groups::k_delta(1.0 + 1e-9), std::domain_error);
  CHECK_THROWS_AS(groups::k_delta(-2.0), std::domain_error);
}

TEST_CASE("u_circle fixes e1") {
  CHECK(max_abs(groups::u_circle(0.0).mat - Eigen::Matrix3d::Identity()) == 0.0);
  const Eigen::Matrix3d at_pi = groups::u_circle(kPi).mat;
  CHECK(max_abs(at_pi - Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix()) < 1e-15);
  const Eigen::Matrix3d half = groups::u_circle(kPi / 2.0).mat;
  CHECK((half * Eigen::Vector3d::UnitY() - Eigen::Vector3d::UnitZ()).norm() < 1e-15);
  CHECK((half * Eigen::Vector3d::UnitZ() + Eigen::Vector3d::UnitY()).norm() < 1e-15);
  CHECK((half * Eigen::Vector3d::UnitX() - Eigen::Vector3d::UnitX()).norm() == 0.0);
}

TEST_CASE("diagonal families") {
  CHECK(max_abs(groups::d_rst(0, 0, 0).mat - Eigen::Matrix3d::Identity()) == 0.0);
  const auto d = groups::d_rst(1.0, 0.5, -1.5).mat;
  CHECK(d(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(d(1, 1) == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
  CHECK(d(2, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-15));
  CHECK(max_abs(groups::d_rst(2, -1, -1).mat - groups::d_a_sl3(2.0).mat) == 0.0);
  CHECK_THROWS_AS(groups::d_rst(1, 0, 0), std::invalid_argument);

  CHECK(max_abs(groups::d_a_sl3(0.0).mat - Eigen::Matrix3d::Identity()) == 0.0);
  // commutation with the circle subgroup
  for (double theta : {0.3, 1.2, 2.9}) {
    const auto u = groups::u_circle(theta).mat;
    const auto da = groups::d_a_sl3(1.7).mat;
    CHECK(max_abs(da * u - u * da) < 1e-14);
  }
}

TEST_CASE("embed_u2 block pattern and homomorphism") {
  CHECK(max_abs(groups::embed_u2(Eigen::Matrix2cd::Identity()).mat -
                Eigen::Matrix4d::Identity()) == 0.0);

  // A = 0, B = I: blocks (0, -I / I, 0)
  Eigen::Matrix2cd iI = std::complex<double>(0, 1) * Eigen::Matrix2cd::Identity();
  Eigen::Matrix4d want = Eigen::Matrix4d::Zero();
  want.block<2, 2>(0, 2) = -Eigen::Matrix2d::Identity();
  want.block<2, 2>(2, 0) = Eigen::Matrix2d::Identity();
  CHECK(max_abs(groups::embed_u2(iI).mat - want) == 0.0);

  Eigen::Matrix2cd not_unitary = Eigen::Matrix2cd::Identity() * 1.5;
  CHECK_THROWS_AS(groups::embed_u2(not_unitary), std::invalid_argument);

  groups::HaarSampler haar(1234);
  for (int i = 0; i < 50; ++i) {
    const auto g1 = haar.u2();
    const auto g2 = haar.u2();
    // recover the unitaries from the embedding and re-embed the product
    auto unembed = [](const Eigen::Matrix4d& m) {
      return Eigen::Matrix2cd(m.block<2, 2>(0, 0).cast<std::complex<double>>() +
                              std::complex<double>(0, 1) *
                                  m.block<2, 2>(2, 0).cast<std::complex<double>>());
    };
    const auto prod = groups::embed_u2(unembed(g1.mat) * unembed(g2.mat));
    CHECK(max_abs(prod.mat - g1.mat * g2.mat) < 1e-12);
  }
}

TEST_CASE("u2 named elements") {
  CHECK(max_abs(groups::d_theta(0.0).mat - Eigen::Matrix4d::Identity()) == 0.0);

  Eigen::Matrix2cd u0;
  u0 << 1, -1, 1, 1;
  u0 /= std::sqrt(2.0);
  CHECK(max_abs(groups::u_theta(0.0).mat - groups::embed_u2(u0).mat) < 1e-15);

  // v^2 = embed(diag(i, i))
  const auto v = groups::v_elem().mat;
  Eigen::Matrix2cd ii = std::complex<double>(0, 1) * Eigen::Matrix2cd::Identity();
  CHECK(max_abs(v * v - groups::embed_u2(ii).mat) < 1e-15);

  for (double theta : {0.0, 0.4, 2.2}) {
    CHECK(groups::membership_error(GroupTag::U2emb, groups::d_theta(theta).mat) < 1e-12);
    CHECK(groups::membership_error(GroupTag::U2emb, groups::u_theta(theta).mat) < 1e-12);
  }
}

TEST_CASE("symplectic diagonal families") {
  CHECK(max_abs(groups::d_beta_gamma(0, 0).mat - Eigen::Matrix4d::Identity()) == 0.0);
  const auto dp = groups::d_a_prime(1.0).mat;
  CHECK(dp(0, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(dp(1, 1) == doctest::Approx(std::exp(1.0)));
  CHECK(dp(2, 2) == doctest::Approx(std::exp(-1.0)));
  CHECK(dp(3, 3) == doctest::Approx(std::exp(-1.0)));

  const Eigen::Matrix4d& J = groups::symplectic_form();
  for (const auto& g : {groups::d_beta_gamma(2.0, 0.7), groups::d_a_sp2(1.3),
                        groups::d_a_prime(0.9)}) {
    CHECK(max_abs(g.mat.transpose() * J * g.mat - J) < 1e-13);
  }
}

TEST_CASE("membership tolerances for raw input") {
  Eigen::Matrix3d close_to_sl3 = Eigen::Matrix3d::Identity();
  close_to_sl3(0, 0) += 1e-8;  // det off by 1e-8
  CHECK_THROWS_AS(groups::make_element(GroupTag::SL3, close_to_sl3), std::invalid_argument);
  CHECK_NOTHROW(groups::make_element(GroupTag::SL3, close_to_sl3, 1e-7));
}

TEST_CASE("haar samples are members") {
  groups::HaarSampler haar(99);
  for (int i = 0; i < 200; ++i) {
    CHECK(groups::membership_error(GroupTag::SO3, haar.so3().mat) < 1e-12);
    CHECK(groups::membership_error(GroupTag::U2emb, haar.u2().mat) < 1e-12);
  }
  // identical seed, identical stream
  groups::HaarSampler a(7), b(7);
  for (int i = 0; i < 5; ++i) CHECK(max_abs(a.so3().mat - b.so3().mat) == 0.0);
}

TEST_CASE("haar mean of a nontrivial character vanishes") {
  // Schur orthogonality: the standard characters integrate to zero with
  // unit second moment, so the sample mean sits inside 3/sqrt(n).
  const int n = 100000;
  groups::HaarSampler haar(2024);
  double so3_sum = 0.0;
  std::complex<double> u2_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    so3_sum += haar.so3().mat.trace();
    const auto m = haar.u2().mat;
    const Eigen::Matrix2cd u = m.block<2, 2>(0, 0).cast<std::complex<double>>() +
                               std::complex<double>(0, 1) *
                                   m.block<2, 2>(2, 0).cast<std::complex<double>>();
    u2_sum += u.trace();
  }
  const double three_sigma = 3.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(so3_sum / n) < three_sigma);
  CHECK(std::abs(u2_sum / static_cast<double>(n)) < three_sigma);
}

TEST_CASE("haar distribution is invariant under a fixed left translation") {
  // two-sample Kolmogorov-Smirnov on the (0,0) entry at alpha = 0.01
  const int n = 4000;
  groups::HaarSampler h1(5), h2(6);
  const Eigen::Matrix3d k0 = groups::u_circle(1.1).mat * groups::k_delta(0.4).mat;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = h1.so3().mat(0, 0);
    b[i] = (k0 * h2.so3().mat)(0, 0);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d_stat = 0.0;
  size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib])
      ++ia;
    else
      ++ib;
    d_stat = std::max(d_stat, std::abs(static_cast<double>(ia) / n -
                                       static_cast<double>(ib) / n));
  }
  const double crit = 1.628 * std::sqrt(2.0 / n);  // alpha = 0.01
  CHECK(d_stat < crit);
}

TEST_CASE("operator norm") {
  CHECK(groups::operator_norm(groups::d_rst(0, 0, 0)) == doctest::Approx(1.0));
  CHECK(groups::operator_norm(groups::d_rst(2, -1, -1)) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(groups::operator_norm(groups::k_delta(0.3)) == doctest::Approx(1.0).epsilon(1e-12));

  // invariance under compact factors, both groups
  groups::HaarSampler haar(17);
  for (int i = 0; i < 30; ++i) {
    const auto g = groups::d_rst(1.9, -0.4, -1.5);
    const groups::GroupElement conj{GroupTag::SL3,
                                    haar.so3().mat * g.mat * haar.so3().mat};
    CHECK(groups::operator_norm(conj) ==
          doctest::Approx(groups::operator_norm(g)).epsilon(1e-12));
    const auto h = groups::d_beta_gamma(2.1, 0.3);
    const groups::GroupElement hc{GroupTag::Sp2, haar.u2().mat * h.mat * haar.u2().mat};
    CHECK(groups::operator_norm(hc) ==
          doctest::Approx(groups::operator_norm(h)).epsilon(1e-12));
  }
}

TEST_CASE("symplectic inverse identity") {
  // g^{-1} = J^{-1} g^t J for symplectic g
  const Eigen::Matrix4d& J = groups::symplectic_form();
  groups::HaarSampler haar(31);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Matrix4d g =
        haar.u2().mat * groups::d_beta_gamma(1.7, 0.6).mat * haar.u2().mat;
    CHECK(max_abs(g.inverse() - J.inverse() * g.transpose() * J) < 1e-12);
  }
}
