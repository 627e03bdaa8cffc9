#pragma once

#include "weylcert/groups.hpp"

// Cartan (KAK) coordinates and factorizations for SL(3,R) and Sp(2,R),
// plus the wall solver locating delta on the D_{-t} k_delta D_{-t} family.

namespace weylcert::kak {

struct ChamberPointSL3 {
  double r, s, t;  // r >= s >= t, r+s+t = 0
};

struct ChamberPointSp2 {
  double beta, gamma;  // beta >= gamma >= 0
};

struct KakSL3 {
  groups::GroupElement k;  // SO3
  ChamberPointSL3 chamber;
  groups::GroupElement k2;  // SO3
};

struct KakSp2 {
  groups::GroupElement k;  // U2emb
  ChamberPointSp2 chamber;
  groups::GroupElement k2;  // U2emb
};

// Sorted half-log eigenvalues of g^t g, sum renormalized to 0.
ChamberPointSL3 gamma_sl3(const groups::GroupElement& g);

// Full factorization g = k D(r,s,t) k2 with k, k2 in SO(3).
KakSL3 kak_sl3(const groups::GroupElement& g);

// (beta, gamma) with singular values (e^b, e^g, e^-b, e^-g). Throws if the
// singular values fail the reciprocal-pair pattern (non-symplectic input).
ChamberPointSp2 beta_gamma_sp2(const groups::GroupElement& g);

// Full factorization g = k D(beta,gamma) k2 with k, k2 in Sp2 ∩ O(4).
KakSp2 kak_sp2(const groups::GroupElement& g);

// D_{-t} k_delta D_{-t} as a matrix (a = -t > 0 handled by caller).
Eigen::Matrix3d wall_matrix_sl3(double a, double delta);

// Solves gamma_1(D_{-t} k_delta D_{-t}) = r for delta in [0,1] by monotone
// bisection. Requires (r, -r-t, t) in the chamber with t < 0 and
// -t/2 <= r <= -2t; throws std::domain_error otherwise.
double solve_delta_sl3(double r, double t);

double reconstruction_residual(const KakSL3& f, const groups::GroupElement& g);
double reconstruction_residual(const KakSp2& f, const groups::GroupElement& g);

}  // namespace weylcert::kak
