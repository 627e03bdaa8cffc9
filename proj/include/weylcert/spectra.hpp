#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

// Spectral realization of the averaging operators: Theta_delta on the sphere
// (Legendre multipliers), T_theta and S_theta on U(2) (per-irrep blocks),
// exact L2 operator norms, and the interpolation function epsilon.

namespace weylcert::spectra {

// Legendre polynomial P_n(x) by the three-term recurrence.
double legendre(int n, double x);

// Eigenvalues [P_n(delta)]_{n<=n_max} of the circle-averaging operator on
// degree-n spherical harmonics.
std::vector<double> theta_delta_eigs(double delta, int n_max);

// sup_{0<=n<=n_max} |P_n(delta) - P_n(0)|; bounded by 4 sqrt|delta|.
double theta_gap_norm(double delta, int n_max);

struct EpsilonParams {
  double p;  // > 1
};

// epsilon(delta) = 2^{1+2/p} |delta|^{1/p}.
double epsilon(const EpsilonParams& params, double delta);

// norm2^{1-theta} * normq^{theta} with 1/p = (1-theta)/2 + theta/q.
// Requires 2 <= p <= q.
double interp_bound(double norm2, double normq, double p, double q);

// Wigner rotation matrix d^l(angle) in the weight basis, l = two_l / 2.
// Row/column index j corresponds to weight l - j. Computed by a stable
// upward recurrence in l for each matrix element.
Eigen::MatrixXd wigner_d(int two_l, double angle);

// Symmetric power Sym^m of a 2x2 matrix in the orthonormal monomial basis.
// Direct binomial expansion; accurate for small m (test oracle engine).
Eigen::MatrixXcd sym_power_u2(const Eigen::Matrix2cd& g, int m);

// U(2) irreducible representation det^k (x) Sym^m, dimension m+1.
struct U2Irrep {
  int det_power;   // k
  int sym_degree;  // m >= 0
};

struct SpectralBlock {
  U2Irrep irrep;
  Eigen::MatrixXcd block;
  double spectral_norm() const;
};

// Block of T_theta: P pi(d_theta) P compressed to the SO(2)-invariant
// subspace (dimension 1 for even m, 0 for odd m). The det-power acts
// trivially here since det d_theta = det r = 1.
SpectralBlock t_theta_block(const U2Irrep& irrep, double theta);

// Block of S_theta: the weight-diagonal part of pi(u_theta).
SpectralBlock s_theta_block(const U2Irrep& irrep, double theta);

enum class OperatorFamily { ThetaDelta, TTheta, STheta };

// One averaging operator, or a difference of two from the same family.
struct SpectralOperatorKind {
  OperatorFamily family;
  double param;
  std::optional<double> minus_param;
};

SpectralOperatorKind theta_delta_op(double delta);
SpectralOperatorKind t_theta_op(double theta);
SpectralOperatorKind s_theta_op(double theta);
SpectralOperatorKind difference(SpectralOperatorKind kind, double minus_param);

struct NormEstimate {
  double value;
  int cutoff;
  int attained_irrep;  // harmonic degree n or Sym-degree m realizing the sup
};

// Exact L2 operator norm: sup of per-irrep block norms up to the cutoff.
NormEstimate op_norm_l2(const SpectralOperatorKind& kind, int cutoff);

// Least-squares slope of log(norm) against log(gap). Requires >= 8 points
// with positive entries.
double fit_exponent(const std::vector<std::pair<double, double>>& gap_norm_points);

// (gap, norm) sweeps for the two U(2) families.
std::vector<std::pair<double, double>> t_theta_gap_sweep(const std::vector<double>& gaps,
                                                         int cutoff);
std::vector<std::pair<double, double>> s_theta_gap_sweep(const std::vector<double>& gaps,
                                                         int cutoff, double base_theta);

// L2 Hoelder constants fitted from the spectral sweeps (max-ratio fit over
// the pinned grids); c1 multiplies |theta - pi/4|^{1/2}, c2 multiplies
// |theta1 - theta2|^{1/4}.
struct FittedConstants {
  double c1_l2;
  double c2_l2;
  int cutoff;
};
FittedConstants fit_u2_constants(int cutoff);

// Transport an L2 Hoelder constant to L_p by Riesz-Thorin against the
// trivial bound 2: c_p = 2^{1-2/p} c_2^{2/p}.
double scale_constant_to_p(double c_l2, double p);

// Band-limited sphere function as complex spherical-harmonic coefficients,
// orthonormal convention, index l*l + l + m.
struct SphCoeffs {
  int lmax;
  std::vector<std::complex<double>> coeffs;

  explicit SphCoeffs(int lmax_) : lmax(lmax_), coeffs((lmax_ + 1) * (lmax_ + 1)) {}
  std::complex<double>& at(int l, int m) { return coeffs[l * l + l + m]; }
  const std::complex<double>& at(int l, int m) const { return coeffs[l * l + l + m]; }
};

// Circle average at inner-product level delta, evaluated by an
// circle_points-point quadrature and re-projected onto harmonics.
// Requires lmax <= 16 and circle_points >= 64.
SphCoeffs quad_apply_theta(const SphCoeffs& f, double delta, int circle_points);

}  // namespace weylcert::spectra
