#include "weylcert/kak.hpp"

#include <cmath>
#include <stdexcept>

namespace weylcert::kak {

using groups::GroupElement;
using groups::GroupTag;

namespace {

void require_tag(const GroupElement& g, GroupTag tag, const char* who) {
  if (g.tag != tag) {
    throw std::invalid_argument(std::string(who) + ": wrong group tag " +
                                groups::tag_name(g.tag));
  }
  if (!groups::is_member(tag, g.mat, groups::kRawInputTol)) {
    throw std::invalid_argument(std::string(who) + ": element fails membership check");
  }
}

}  // namespace

ChamberPointSL3 gamma_sl3(const groups::GroupElement& g) {
  require_tag(g, GroupTag::SL3, "gamma_sl3");
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(g.mat);
  Eigen::Vector3d lg = svd.singularValues().array().log();
  const double mean = lg.mean();  // kills ~1e-15 det drift
  lg.array() -= mean;
  return ChamberPointSL3{lg(0), lg(1), lg(2)};
}

KakSL3 kak_sl3(const groups::GroupElement& g) {
  require_tag(g, GroupTag::SL3, "kak_sl3");
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(g.mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  // SVD factors live in O(3); det(u)det(v) = sign(det g) = +1, so a single
  // paired column flip repairs both determinants without moving u S v^t.
  if (u.determinant() < 0.0) {
    u.col(2) *= -1.0;
    v.col(2) *= -1.0;
  }
  Eigen::Vector3d lg = svd.singularValues().array().log();
  lg.array() -= lg.mean();
  ChamberPointSL3 ch{lg(0), lg(1), lg(2)};
  return KakSL3{GroupElement{GroupTag::SO3, u}, ch,
                GroupElement{GroupTag::SO3, v.transpose()}};
}

ChamberPointSp2 beta_gamma_sp2(const groups::GroupElement& g) {
  require_tag(g, GroupTag::Sp2, "beta_gamma_sp2");
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(g.mat);
  const Eigen::Vector4d s = svd.singularValues();  // descending
  if (std::abs(s(0) * s(3) - 1.0) > 1e-6 * s(0) || std::abs(s(1) * s(2) - 1.0) > 1e-6 * s(1)) {
    throw std::invalid_argument(
        "beta_gamma_sp2: singular values fail the reciprocal-pair pattern");
  }
  const double beta = 0.5 * (std::log(s(0)) - std::log(s(3)));
  const double gamma = 0.5 * (std::log(s(1)) - std::log(s(2)));
  return ChamberPointSp2{beta, gamma};
}

KakSp2 kak_sp2(const groups::GroupElement& g) {
  require_tag(g, GroupTag::Sp2, "kak_sp2");
  const Eigen::Matrix4d& J = groups::symplectic_form();
  const ChamberPointSp2 ch = beta_gamma_sp2(g);

  const Eigen::Matrix4d M = g.mat.transpose() * g.mat;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(M);
  // descending eigenpairs
  Eigen::Vector4d ev;
  Eigen::Matrix4d V;
  for (int i = 0; i < 4; ++i) {
    ev(i) = es.eigenvalues()(3 - i);
    V.col(i) = es.eigenvectors().col(3 - i);
  }

  // Conjugation by J inverts a symplectic positive matrix, so J maps the
  // e^{2beta}-eigenspace of M onto the e^{-2beta} one. Choosing the last two
  // basis vectors as -J of the first two makes the frame commute with J,
  // which is exactly membership in Sp2 ∩ O(4).
  const Eigen::Vector4d v1 = V.col(0);
  const Eigen::Vector4d jv1 = J * v1;

  // v2: top eigenvector of M restricted to the J-invariant complement of
  // span{v1, Jv1}. Going through the restriction keeps the construction
  // well defined when beta = gamma or the chamber degenerates to 0.
  Eigen::Matrix4d P = Eigen::Matrix4d::Identity() - v1 * v1.transpose() - jv1 * jv1.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> pes(P);
  Eigen::Matrix<double, 4, 2> W;
  W.col(0) = pes.eigenvectors().col(3);
  W.col(1) = pes.eigenvectors().col(2);
  const Eigen::Matrix2d C = W.transpose() * M * W;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ces(C);
  const Eigen::Vector4d v2 = W * ces.eigenvectors().col(1);  // larger eigenvalue

  Eigen::Matrix4d Q;
  Q.col(0) = v1;
  Q.col(1) = v2;
  Q.col(2) = -J * v1;
  Q.col(3) = -J * v2;

  const Eigen::Vector4d d(std::exp(ch.beta), std::exp(ch.gamma), std::exp(-ch.beta),
                          std::exp(-ch.gamma));
  Eigen::Matrix4d k1 = g.mat * Q * d.cwiseInverse().asDiagonal();
  return KakSp2{GroupElement{GroupTag::U2emb, k1}, ch,
                GroupElement{GroupTag::U2emb, Q.transpose()}};
}

Eigen::Matrix3d wall_matrix_sl3(double a, double delta) {
  return groups::d_a_sl3(a).mat * groups::k_delta(delta).mat * groups::d_a_sl3(a).mat;
}

double solve_delta_sl3(double r, double t) {
  if (!(t < 0.0)) throw std::domain_error("solve_delta_sl3: requires t < 0");
  const double s = -r - t;
  if (!(r >= s - 1e-12 && s >= t - 1e-12)) {
    throw std::domain_error("solve_delta_sl3: (r,-r-t,t) is not a chamber point");
  }
  const double lo_r = -t / 2.0, hi_r = -2.0 * t;
  if (!(r >= lo_r - 1e-12 && r <= hi_r + 1e-12)) {
    throw std::domain_error("solve_delta_sl3: r outside [-t/2, -2t] bracket");
  }
  const double a = -t;
  auto gamma1 = [&](double delta) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(wall_matrix_sl3(a, delta));
    return std::log(svd.singularValues()(0));
  };
  double lo = 0.0, hi = 1.0;
  double mid = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    if (hi - lo < 1e-14) break;
    const double val = gamma1(mid);
    if (std::abs(val - r) <= 1e-10 && hi - lo < 1e-8) break;
    if (val < r)
      lo = mid;
    else
      hi = mid;
  }
  mid = 0.5 * (lo + hi);
  if (std::abs(gamma1(mid) - r) > 1e-10) {
    throw std::runtime_error("solve_delta_sl3: bisection failed to meet residual target");
  }
  return mid;
}

double reconstruction_residual(const KakSL3& f, const groups::GroupElement& g) {
  const Eigen::Matrix3d D =
      Eigen::Vector3d(std::exp(f.chamber.r), std::exp(f.chamber.s), std::exp(f.chamber.t))
          .asDiagonal();
  return (f.k.mat * D * f.k2.mat - g.mat).cwiseAbs().maxCoeff();
}

double reconstruction_residual(const KakSp2& f, const groups::GroupElement& g) {
  const Eigen::Matrix4d D = Eigen::Vector4d(std::exp(f.chamber.beta), std::exp(f.chamber.gamma),
                                            std::exp(-f.chamber.beta), std::exp(-f.chamber.gamma))
                                .asDiagonal();
  return (f.k.mat * D * f.k2.mat - g.mat).cwiseAbs().maxCoeff();
}

}  // namespace weylcert::kak
