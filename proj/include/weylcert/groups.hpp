#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

// Construction and validation of elements of SL(3,R), Sp(2,R) and their
// maximal compact subgroups, plus Haar sampling for quadrature.

namespace weylcert::groups {

enum class GroupTag { SL3, Sp2, SO3, U2emb };

// Tolerance accepted when validating matrices handed in by a caller.
inline constexpr double kRawInputTol = 1e-9;
// Tolerance asserted for elements the library constructs itself.
inline constexpr double kInternalTol = 1e-12;

struct GroupElement {
  GroupTag tag;
  Eigen::MatrixXd mat;
};

const char* tag_name(GroupTag tag);
int tag_dim(GroupTag tag);

// The standard symplectic form on R^4 (2x2 block structure [[0,I],[-I,0]]).
const Eigen::Matrix4d& symplectic_form();

// Max-entry deviation of `m` from the membership conditions of `tag`.
double membership_error(GroupTag tag, const Eigen::MatrixXd& m);
bool is_member(GroupTag tag, const Eigen::MatrixXd& m, double tol = kRawInputTol);

// Validating constructor for raw matrices; throws std::invalid_argument.
GroupElement make_element(GroupTag tag, Eigen::MatrixXd m, double tol = kRawInputTol);

// --- named families, SL(3,R) side ---

// Planar rotation-like compact element with first column (delta, sqrt(1-d^2), 0).
// Domain error if |delta| > 1.
GroupElement k_delta(double delta);

// Rotation in the (2,3)-plane fixing e1.
GroupElement u_circle(double theta);

// diag(e^r, e^s, e^t); requires r+s+t = 0 up to tolerance.
GroupElement d_rst(double r, double s, double t);

// diag(e^a, e^{-a/2}, e^{-a/2}); commutes with every u_circle(theta).
GroupElement d_a_sl3(double a);

// --- named families, Sp(2,R) side ---

// Image of a unitary U = A + iB under the block embedding [[A,-B],[B,A]].
// Throws if A + iB is not unitary within tol.
GroupElement embed_u2(const Eigen::Matrix2cd& u, double tol = kRawInputTol);
GroupElement embed_u2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b,
                      double tol = kRawInputTol);

GroupElement d_theta(double theta);  // embed of diag(e^{i theta}, e^{-i theta})
GroupElement u_theta(double theta);  // embed of (1/sqrt2) [[e^{i th}, -1],[1, e^{-i th}]]
GroupElement v_elem();               // embed of ((1+i)/sqrt2) I

GroupElement d_beta_gamma(double beta, double gamma);  // diag(e^b, e^g, e^-b, e^-g)
GroupElement d_a_sp2(double a);                        // diag(e^a, 1, e^-a, 1)
GroupElement d_a_prime(double a);                      // diag(e^a, e^a, e^-a, e^-a)

// --- Haar sampling ---

// Stream of Haar samples; one stream per seed, no shared generator state.
class HaarSampler {
 public:
  explicit HaarSampler(std::uint64_t seed) : rng_(seed) {}
  GroupElement so3();
  GroupElement u2();  // returned as the embedded 4x4 element

 private:
  std::mt19937_64 rng_;
};

// Single-draw convenience forms (first sample of the given stream).
GroupElement haar_so3(std::uint64_t seed);
GroupElement haar_u2(std::uint64_t seed);

// Largest singular value.
double operator_norm(const GroupElement& g);

}  // namespace weylcert::groups
