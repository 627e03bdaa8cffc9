#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weylcert/kak.hpp"
#include "weylcert/sinhsys.hpp"

using namespace weylcert;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("solve_s and solve_t basic values") {
  CHECK(sinhsys::solve_s(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(sinhsys::solve_t(0, 0) == doctest::Approx(0.0).epsilon(1e-14));

  // (2x, x) plants the root x in both equations
  for (double x : {0.5, 1.0, 2.0, 4.0}) {
    CHECK(sinhsys::solve_s(2 * x, x) == doctest::Approx(x).epsilon(1e-13));
    CHECK(sinhsys::solve_t(2 * x, x) == doctest::Approx(x).epsilon(1e-13));
  }

  // frozen from a 40-digit root find
  CHECK(sinhsys::solve_s(3, 1) == doctest::Approx(1.4922572134582809).epsilon(1e-13));
  CHECK(sinhsys::solve_t(3, 1) == doctest::Approx(1.3109465061683796).epsilon(1e-13));
  CHECK(sinhsys::solve_s(3, 1) >= 3.0 / 4.0);

  CHECK_THROWS_AS(sinhsys::solve_s(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(sinhsys::solve_t(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("residuals and lower bounds across the chamber") {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double beta = 10.0 * unif(rng);
    const double gamma = beta * unif(rng);
    const auto sol = sinhsys::solve_system(beta, gamma);
    CHECK(sol.s_residual <= 1e-12);
    CHECK(sol.t_residual <= 1e-12);
    CHECK(sol.s >= beta / 4.0 - 1e-12);
    CHECK(sol.t >= gamma / 2.0 - 1e-12);
  }
}

TEST_CASE("solve_beta_gamma closed form") {
  for (double x : {0.0, 0.7, 1.5, 3.0}) {
    const auto bg = sinhsys::solve_beta_gamma(x, x);
    CHECK(bg.beta == doctest::Approx(2 * x).epsilon(1e-12));
    CHECK(bg.gamma == doctest::Approx(x).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sinhsys::solve_beta_gamma(1.0, 2.0), std::invalid_argument);

  // inverse pair: solve_beta_gamma after (solve_s, solve_t) is the identity
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double beta = 8.0 * unif(rng);
    const double gamma = beta * unif(rng);
    const double s = sinhsys::solve_s(beta, gamma);
    const double t = sinhsys::solve_t(beta, gamma);
    if (!(s >= t)) continue;  // the ray pair can invert near beta = gamma
    const auto bg = sinhsys::solve_beta_gamma(s, t);
    CHECK(std::abs(bg.beta - beta) < 1e-10 * (1.0 + beta));
    CHECK(std::abs(bg.gamma - gamma) < 1e-10 * (1.0 + beta));
  }
}

TEST_CASE("near-ray region bounds of the inverse system") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = 1.0 + 5.0 * unif(rng);
    const double s = t * (1.0 + 0.5 * unif(rng));
    const auto bg = sinhsys::solve_beta_gamma(s, t);
    CHECK(std::abs(bg.beta - 2.0 * s) <= 1.0);
    CHECK(std::abs(bg.gamma + 2.0 * s - 3.0 * t) <= 1.0);
    // quantity used by the ray-segment constant
    CHECK(std::min(bg.gamma, bg.beta - bg.gamma) >= s / 2.0 - 1.0);
  }
}

TEST_CASE("monotonicity of the defining left-hand sides") {
  double prev_a = -1.0, prev_b = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 12.0 * i / 200.0;
    const double a = std::sinh(2 * x) * std::sinh(2 * x) + std::sinh(x) * std::sinh(x);
    const double b = std::sinh(2 * x) * std::sinh(x);
    CHECK(a > prev_a);
    CHECK(b > prev_b);
    prev_a = a;
    prev_b = b;
  }
}

TEST_CASE("theta_of_r maps the lemma domain into [pi/6, pi/4]") {
  for (int i = 0; i <= 50; ++i) {
    const double r = 0.5 * i / 50.0;
    const double theta = sinhsys::theta_of_r(r);
    CHECK(theta >= kPi / 6.0 - 1e-12);
    CHECK(theta <= kPi / 4.0 + 1e-12);
  }
  CHECK(sinhsys::theta_of_r(0.0) == doctest::Approx(kPi / 4.0));
}

TEST_CASE("solve_wall_T recovers planted points and honors the r bound") {
  // plant (a, r), read the chamber off the wall matrix, solve back
  for (auto [a, r] : {std::pair{5.0, 1e-3}, {6.5, 1e-4}, {4.5, 5e-4}}) {
    const Eigen::Matrix4d m = sinhsys::wall_T_matrix(a, r);
    const auto ch = kak::beta_gamma_sp2({groups::GroupTag::Sp2, m});
    if (!(ch.beta - ch.gamma >= 8.0)) continue;
    const auto sol = sinhsys::solve_wall_T(ch.beta, ch.gamma);
    CHECK(std::abs(sol.a - a) < 1e-7 * (1.0 + a));
    CHECK(std::abs(sol.r - r) < 1e-6);
    CHECK(sol.residual <= 1e-8);
  }

  const auto sol = sinhsys::solve_wall_T(12.0, 2.0);
  CHECK(sol.residual <= 1e-8);
  CHECK(sol.r <= 2.0 * std::exp(-2.5) * (1.0 + 1e-6));
  // closed-form shared-a invariant: sinh^2(2a) = sinh^2(beta) + sinh^2(gamma)
  const double a_closed =
      0.5 * std::asinh(std::sqrt(std::sinh(12.0) * std::sinh(12.0) +
                                 std::sinh(2.0) * std::sinh(2.0)));
  CHECK(sol.a == doctest::Approx(a_closed).epsilon(1e-7));

  CHECK_THROWS_AS(sinhsys::solve_wall_T(9.0, 2.0), std::invalid_argument);  // gap < 8
}

TEST_CASE("solve_wall_S recovers planted points") {
  for (auto [a, theta] : {std::pair{3.0, 1.2}, {4.0, 1.5}, {5.5, 1.45}}) {
    const Eigen::Matrix4d m = sinhsys::wall_S_matrix(a, theta);
    const auto ch = kak::beta_gamma_sp2({groups::GroupTag::Sp2, m});
    if (!(ch.gamma >= 2.0)) continue;
    const auto sol = sinhsys::solve_wall_S(ch.beta, ch.gamma);
    CHECK(std::abs(sol.a - a) < 1e-7 * (1.0 + a));
    CHECK(std::abs(sol.theta - theta) < 1e-6);
    CHECK(sol.residual <= 1e-8);
  }
  CHECK_THROWS_AS(sinhsys::solve_wall_S(3.0, 1.0), std::invalid_argument);  // gamma < 2
}

TEST_CASE("paired wall solves share a and obey the theta gap bound") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const double gamma = 2.0 + 4.0 * unif(rng);
    const double beta = gamma + 5.0 * unif(rng);
    const auto s1 = sinhsys::solve_wall_S(beta, gamma);
    const double t = sinhsys::solve_t(beta, gamma);
    const auto s2 = sinhsys::solve_wall_S(2.0 * t, t);
    CHECK(std::abs(s1.a - s2.a) < 1e-6 * (1.0 + s1.a));
    CHECK(std::abs(s1.theta - s2.theta) <= std::exp(-gamma / 2.0) * (1.0 + 1e-6));
  }
}
