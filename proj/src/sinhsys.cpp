#include "weylcert/sinhsys.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

namespace weylcert::sinhsys {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sq(double x) { return x * x; }

void require_chamber_sp2(double beta, double gamma, const char* who) {
  if (!(beta >= gamma && gamma >= 0.0)) {
    throw std::invalid_argument(std::string(who) + ": requires beta >= gamma >= 0");
  }
}

// Bisection for a strictly increasing f on [0, hi], target value T.
double increasing_root(const std::function<double(double)>& f, double hi, double target) {
  double lo = 0.0;
  while (f(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

kak::ChamberPointSp2 chamber_of(const Eigen::Matrix4d& m) {
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
  const Eigen::Vector4d s = svd.singularValues();
  return {0.5 * (std::log(s(0)) - std::log(s(3))), 0.5 * (std::log(s(1)) - std::log(s(2)))};
}

struct Wall2D {
  // matrix(a, inner) for the family; inner ranges over [inner_lo, inner_hi]
  std::function<Eigen::Matrix4d(double, double)> matrix;
  double inner_lo, inner_hi;
};

// gamma(a, inner) is increasing in the inner parameter for both families;
// returns the inner value matching gamma_t, or nullopt if out of reach.
std::optional<double> inner_solve(const Wall2D& w, double a, double gamma_t) {
  auto gamma_at = [&](double x) { return chamber_of(w.matrix(a, x)).gamma; };
  double lo = w.inner_lo, hi = w.inner_hi;
  if (gamma_at(hi) < gamma_t - 1e-12) return std::nullopt;
  if (gamma_at(lo) > gamma_t + 1e-12) return std::nullopt;
  for (int it = 0; it < 120 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_at(mid) < gamma_t)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct Solve2DResult {
  double a, inner, residual;
};

// Outer bisection on a (beta increasing in a once the inner parameter is
// matched to gamma), nested inner bisection, then a damped Newton polish if
// the bisection result misses the 1e-8 target.
Solve2DResult solve_wall_2d(const Wall2D& w, double beta_t, double gamma_t, double a_hi,
                            const char* who) {
  auto eval = [&](double a, double inner) { return chamber_of(w.matrix(a, inner)); };

  auto outer_sign = [&](double a) -> double {
    auto inner = inner_solve(w, a, gamma_t);
    if (!inner) return -1.0;  // gamma unreachable: a too small
    return eval(a, *inner).beta - beta_t;
  };

  double lo = 1e-8, hi = a_hi;
  int grow = 0;
  while (outer_sign(hi) < 0.0 && grow++ < 20) hi *= 2.0;
  for (int it = 0; it < 500 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (outer_sign(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double a = 0.5 * (lo + hi);
  double inner = inner_solve(w, a, gamma_t).value_or(w.inner_hi);

  auto residual_of = [&](double aa, double xx) {
    const auto c = eval(aa, xx);
    return std::max(std::abs(c.beta - beta_t), std::abs(c.gamma - gamma_t));
  };
  double res = residual_of(a, inner);

  // damped Newton fallback with finite-difference Jacobian
  for (int it = 0; it < 60 && res > 1e-9; ++it) {
    const double ha = 1e-7 * (1.0 + std::abs(a));
    const double hx = std::max(1e-12, 1e-7 * std::abs(inner));
    const auto c0 = eval(a, inner);
    const auto ca = eval(a + ha, inner);
    const auto cx = eval(a, std::min(inner + hx, w.inner_hi));
    Eigen::Matrix2d Jm;
    Jm << (ca.beta - c0.beta) / ha, (cx.beta - c0.beta) / hx,
          (ca.gamma - c0.gamma) / ha, (cx.gamma - c0.gamma) / hx;
    Eigen::Vector2d F(c0.beta - beta_t, c0.gamma - gamma_t);
    if (std::abs(Jm.determinant()) < 1e-300) break;
    Eigen::Vector2d step = Jm.partialPivLu().solve(F);
    double damp = 1.0;
    bool accepted = false;
    for (int k = 0; k < 20; ++k, damp *= 0.5) {
      const double an = a - damp * step(0);
      const double xn = std::clamp(inner - damp * step(1), w.inner_lo, w.inner_hi);
      if (!(an > 0.0)) continue;
      if (residual_of(an, xn) < res) {
        a = an;
        inner = xn;
        res = residual_of(a, inner);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  if (res > 1e-8) {
    throw std::runtime_error(std::string(who) + ": 2-D wall solve did not converge");
  }
  return {a, inner, res};
}

}  // namespace

double solve_s(double beta, double gamma) {
  require_chamber_sp2(beta, gamma, "solve_s");
  const double target = sq(std::sinh(beta)) + sq(std::sinh(gamma));
  auto f = [](double s) { return sq(std::sinh(2.0 * s)) + sq(std::sinh(s)); };
  return increasing_root(f, std::max(beta, 1.0), target);
}

double solve_t(double beta, double gamma) {
  require_chamber_sp2(beta, gamma, "solve_t");
  const double target = std::sinh(beta) * std::sinh(gamma);
  auto f = [](double t) { return std::sinh(2.0 * t) * std::sinh(t); };
  return increasing_root(f, std::max(beta, 1.0), target);
}

SinhSolution solve_system(double beta, double gamma) {
  const double s = solve_s(beta, gamma);
  const double t = solve_t(beta, gamma);
  const double ts = sq(std::sinh(beta)) + sq(std::sinh(gamma));
  const double tt = std::sinh(beta) * std::sinh(gamma);
  const double rs = std::abs(sq(std::sinh(2 * s)) + sq(std::sinh(s)) - ts) / std::max(1.0, ts);
  const double rt = std::abs(std::sinh(2 * t) * std::sinh(t) - tt) / std::max(1.0, tt);
  return SinhSolution{beta, gamma, s, t, rs, rt};
}

BetaGamma solve_beta_gamma(double s, double t) {
  if (!(s >= t && t >= 0.0)) {
    throw std::invalid_argument("solve_beta_gamma: requires s >= t >= 0");
  }
  const double A = sq(std::sinh(2.0 * s)) + sq(std::sinh(s));
  const double B = std::sinh(2.0 * t) * std::sinh(t);
  double disc = A * A - 4.0 * B * B;
  if (disc < 0.0) {
    if (disc < -1e-12 * A * A) {
      throw std::invalid_argument("solve_beta_gamma: negative discriminant");
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double z_plus = 0.5 * (A + root);
  const double z_minus = (z_plus > 0.0) ? (B * B) / z_plus : 0.0;
  return BetaGamma{std::asinh(std::sqrt(z_plus)), std::asinh(std::sqrt(z_minus))};
}

double theta_of_r(double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw std::domain_error("theta_of_r: r outside [-1,1]");
  return std::atan(std::sqrt((1.0 - r) / (1.0 + r)));
}

Eigen::Matrix4d wall_T_matrix(double a, double r) {
  const Eigen::Matrix4d w = groups::d_theta(theta_of_r(r)).mat * groups::v_elem().mat;
  return groups::d_a_prime(a).mat * w * groups::d_a_prime(a).mat;
}

Eigen::Matrix4d wall_S_matrix(double a, double theta) {
  return groups::d_a_sp2(a).mat * groups::u_theta(theta).mat * groups::d_a_sp2(a).mat;
}

WallTSolution solve_wall_T(double beta, double gamma) {
  require_chamber_sp2(beta, gamma, "solve_wall_T");
  if (!(beta - gamma >= 8.0)) {
    throw std::invalid_argument("solve_wall_T: requires beta - gamma >= 8");
  }
  Wall2D w{[](double a, double r) { return wall_T_matrix(a, r); }, 0.0, 1.0 - 1e-12};
  const auto sol = solve_wall_2d(w, beta, gamma, std::max(beta, 1.0), "solve_wall_T");
  const double r_cap = 2.0 * std::exp((gamma - beta) / 4.0) * (1.0 + 1e-6);
  if (sol.inner > r_cap) {
    throw std::runtime_error("solve_wall_T: solution violates the r <= 2 e^{(gamma-beta)/4} bound");
  }
  return WallTSolution{sol.a, sol.inner, sol.residual};
}

WallSSolution solve_wall_S(double beta, double gamma) {
  require_chamber_sp2(beta, gamma, "solve_wall_S");
  if (!(gamma >= 2.0)) {
    throw std::invalid_argument("solve_wall_S: requires gamma >= 2");
  }
  Wall2D w{[](double a, double th) { return wall_S_matrix(a, th); }, 0.0, kPi / 2.0};
  const auto sol = solve_wall_2d(w, beta, gamma, beta + 1.0, "solve_wall_S");
  return WallSSolution{sol.a, sol.inner, sol.residual};
}

}  // namespace weylcert::sinhsys
