#include "weylcert/groups.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace weylcert::groups {

namespace {

Eigen::Matrix4d make_J() {
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 2) = 1.0;
  J(1, 3) = 1.0;
  J(2, 0) = -1.0;
  J(3, 1) = -1.0;
  return J;
}

}  // namespace

const Eigen::Matrix4d& symplectic_form() {
  static const Eigen::Matrix4d J = make_J();
  return J;
}

const char* tag_name(GroupTag tag) {
  switch (tag) {
    case GroupTag::SL3: return "SL3";
    case GroupTag::Sp2: return "Sp2";
    case GroupTag::SO3: return "SO3";
    case GroupTag::U2emb: return "U2emb";
  }
  return "?";
}

int tag_dim(GroupTag tag) {
  return (tag == GroupTag::SL3 || tag == GroupTag::SO3) ? 3 : 4;
}

double membership_error(GroupTag tag, const Eigen::MatrixXd& m) {
  const int n = tag_dim(tag);
  if (m.rows() != n || m.cols() != n) return std::numeric_limits<double>::infinity();
  switch (tag) {
    case GroupTag::SL3:
      return std::abs(m.determinant() - 1.0);
    case GroupTag::SO3: {
      if (m.determinant() <= 0.0) return std::numeric_limits<double>::infinity();
      return (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    }
    case GroupTag::Sp2: {
      const Eigen::Matrix4d& J = symplectic_form();
      return (m.transpose() * J * m - J).cwiseAbs().maxCoeff();
    }
    case GroupTag::U2emb: {
      // Sp2 and O(4) plus the [[A,-B],[B,A]] block pattern.
      const Eigen::Matrix4d& J = symplectic_form();
      double e = (m.transpose() * J * m - J).cwiseAbs().maxCoeff();
      e = std::max(e, (m.transpose() * m - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff());
      e = std::max(e, (m.block<2, 2>(0, 0) - m.block<2, 2>(2, 2)).cwiseAbs().maxCoeff());
      e = std::max(e, (m.block<2, 2>(0, 2) + m.block<2, 2>(2, 0)).cwiseAbs().maxCoeff());
      return e;
    }
  }
  return std::numeric_limits<double>::infinity();
}

bool is_member(GroupTag tag, const Eigen::MatrixXd& m, double tol) {
  return membership_error(tag, m) <= tol;
}

GroupElement make_element(GroupTag tag, Eigen::MatrixXd m, double tol) {
  const double err = membership_error(tag, m);
  if (!(err <= tol)) {
    throw std::invalid_argument(std::string("matrix fails ") + tag_name(tag) +
                                " membership check, error " + std::to_string(err));
  }
  return GroupElement{tag, std::move(m)};
}

GroupElement k_delta(double delta) {
  if (!(std::abs(delta) <= 1.0)) {
    throw std::domain_error("k_delta: |delta| must be <= 1");
  }
  const double c = std::sqrt(1.0 - delta * delta);
  Eigen::Matrix3d m;
  m << delta, -c, 0.0,
       c, delta, 0.0,
       0.0, 0.0, 1.0;
  return GroupElement{GroupTag::SO3, m};
}

GroupElement u_circle(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d m;
  m << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return GroupElement{GroupTag::SO3, m};
}

GroupElement d_rst(double r, double s, double t) {
  if (!(std::abs(r + s + t) <= kRawInputTol)) {
    throw std::invalid_argument("d_rst: r+s+t must vanish");
  }
  Eigen::Matrix3d m = Eigen::Vector3d(std::exp(r), std::exp(s), std::exp(t)).asDiagonal();
  return GroupElement{GroupTag::SL3, m};
}

GroupElement d_a_sl3(double a) {
  Eigen::Matrix3d m =
      Eigen::Vector3d(std::exp(a), std::exp(-a / 2.0), std::exp(-a / 2.0)).asDiagonal();
  return GroupElement{GroupTag::SL3, m};
}

GroupElement embed_u2(const Eigen::Matrix2cd& u, double tol) {
  const double err = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (!(err <= tol)) {
    throw std::invalid_argument("embed_u2: input is not unitary, error " + std::to_string(err));
  }
  Eigen::Matrix4d m;
  m.block<2, 2>(0, 0) = u.real();
  m.block<2, 2>(0, 2) = -u.imag();
  m.block<2, 2>(2, 0) = u.imag();
  m.block<2, 2>(2, 2) = u.real();
  return GroupElement{GroupTag::U2emb, m};
}

GroupElement embed_u2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b, double tol) {
  Eigen::Matrix2cd u = a.cast<std::complex<double>>() +
                       std::complex<double>(0.0, 1.0) * b.cast<std::complex<double>>();
  return embed_u2(u, tol);
}

GroupElement d_theta(double theta) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
  u(0, 0) = std::polar(1.0, theta);
  u(1, 1) = std::polar(1.0, -theta);
  GroupElement g = embed_u2(u);
  g.tag = GroupTag::U2emb;
  return g;
}

GroupElement u_theta(double theta) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  u(0, 0) = std::polar(inv_sqrt2, theta);
  u(0, 1) = std::complex<double>(-inv_sqrt2, 0.0);
  u(1, 0) = std::complex<double>(inv_sqrt2, 0.0);
  u(1, 1) = std::polar(inv_sqrt2, -theta);
  return embed_u2(u);
}

GroupElement v_elem() {
  const std::complex<double> z(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
  u(0, 0) = z;
  u(1, 1) = z;
  return embed_u2(u);
}

GroupElement d_beta_gamma(double beta, double gamma) {
  Eigen::Matrix4d m = Eigen::Vector4d(std::exp(beta), std::exp(gamma),
                                      std::exp(-beta), std::exp(-gamma))
                          .asDiagonal();
  return GroupElement{GroupTag::Sp2, m};
}

GroupElement d_a_sp2(double a) {
  Eigen::Matrix4d m = Eigen::Vector4d(std::exp(a), 1.0, std::exp(-a), 1.0).asDiagonal();
  return GroupElement{GroupTag::Sp2, m};
}

GroupElement d_a_prime(double a) {
  Eigen::Matrix4d m =
      Eigen::Vector4d(std::exp(a), std::exp(a), std::exp(-a), std::exp(-a)).asDiagonal();
  return GroupElement{GroupTag::Sp2, m};
}

GroupElement HaarSampler::so3() {
  std::normal_distribution<double> normal;
  Eigen::Matrix3d z;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) z(i, j) = normal(rng_);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(z);
  Eigen::Matrix3d q = qr.householderQ();
  Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Sign-fix the QR so q is Haar on O(3), then translate the det=-1 coset.
  for (int j = 0; j < 3; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  if (q.determinant() < 0.0) q.col(2) *= -1.0;
  return GroupElement{GroupTag::SO3, q};
}

GroupElement HaarSampler::u2() {
  std::normal_distribution<double> normal;
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = std::complex<double>(normal(rng_), normal(rng_));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const std::complex<double> d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= std::conj(d) / std::abs(d);
  }
  return embed_u2(q, kInternalTol * 10.0);
}

GroupElement haar_so3(std::uint64_t seed) { return HaarSampler(seed).so3(); }
GroupElement haar_u2(std::uint64_t seed) { return HaarSampler(seed).u2(); }

double operator_norm(const GroupElement& g) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g.mat);
  return svd.singularValues()(0);
}

}  // namespace weylcert::groups
