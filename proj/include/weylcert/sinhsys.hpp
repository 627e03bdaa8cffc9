#pragma once

#include "weylcert/kak.hpp"

// The hyperbolic systems tying (beta, gamma) to the ray points (2s,s) and
// (2t,t), and the wall-location solvers for the two U(2) operator families.
// 1-D residuals below are relative to max(1, |target|).

namespace weylcert::sinhsys {

// Unique nonnegative root of sinh^2(2s) + sinh^2(s) = sinh^2(beta) + sinh^2(gamma).
// Requires beta >= gamma >= 0. Satisfies s >= beta/4.
double solve_s(double beta, double gamma);

// Unique nonnegative root of sinh(2t) sinh(t) = sinh(beta) sinh(gamma).
// Requires beta >= gamma >= 0. Satisfies t >= gamma/2.
double solve_t(double beta, double gamma);

struct SinhSolution {
  double beta, gamma;  // inputs
  double s, t;         // outputs
  double s_residual, t_residual;
};
SinhSolution solve_system(double beta, double gamma);

struct BetaGamma {
  double beta, gamma;
};

// Inverse direction, closed form through z^2 - Az + B^2 = 0 with
// A = sinh^2(2s) + sinh^2(s), B = sinh(2t) sinh(t). Requires s >= t >= 0.
BetaGamma solve_beta_gamma(double s, double t);

// theta(r) = arctan sqrt((1-r)/(1+r)); maps [0,1/2] into [pi/6, pi/4].
double theta_of_r(double r);

// D_a' embed(d_{theta(r)} v) D_a'  and  D_a embed(u_theta) D_a
Eigen::Matrix4d wall_T_matrix(double a, double r);
Eigen::Matrix4d wall_S_matrix(double a, double theta);

struct WallTSolution {
  double a;         // > 0
  double r;         // in [0, 1/2] on the lemma's domain
  double residual;  // max chamber-coordinate mismatch of the reconstruction
};

// Locates (a, r) with chamber(wall_T_matrix(a,r)) = (beta, gamma).
// Requires beta >= gamma >= 0 with beta - gamma >= 8. The returned r also
// satisfies r <= 2 e^{(gamma-beta)/4} (1 + 1e-6).
WallTSolution solve_wall_T(double beta, double gamma);

struct WallSSolution {
  double a;
  double theta;
  double residual;
};

// Locates (a, theta) with chamber(wall_S_matrix(a,theta)) = (beta, gamma).
// Requires beta >= gamma >= 2.
WallSSolution solve_wall_S(double beta, double gamma);

}  // namespace weylcert::sinhsys
