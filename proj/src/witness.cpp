#include "weylcert/witness.hpp"

#include <cmath>
#include <stdexcept>

#include "weylcert/spectra.hpp"

namespace weylcert::witness {

using groups::GroupElement;
using groups::GroupTag;

double gaussian_phi(const groups::GroupElement& g) {
  switch (g.tag) {
    case GroupTag::SO3:
    case GroupTag::U2emb:
      return 1.0;
    case GroupTag::SL3: {
      const auto ch = kak::gamma_sl3(g);
      return 1.0 / std::sqrt(std::cosh(ch.r) * std::cosh(ch.s) * std::cosh(ch.t));
    }
    case GroupTag::Sp2: {
      const auto ch = kak::beta_gamma_sp2(g);
      return 1.0 / (std::cosh(ch.beta) * std::cosh(ch.gamma));
    }
  }
  throw std::invalid_argument("gaussian_phi: unknown tag");
}

TestMultiplier TestMultiplier::constant(double c) {
  return TestMultiplier(Kind::Constant, c, std::abs(c),
                        "constant multiplier; bound |c|");
}

TestMultiplier TestMultiplier::gaussian_coefficient() {
  return TestMultiplier(Kind::GaussianCoefficient, 0.0, 1.0,
                        "coefficient of a unit Gaussian vector under the isometric "
                        "translation action on L2; norm-one for every p");
}

TestMultiplier TestMultiplier::compact_bump(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("compact_bump: radius must be positive");
  return TestMultiplier(Kind::CompactBump, radius, std::nullopt,
                        "C0 radial bump in the operator norm; value-only");
}

double TestMultiplier::eval(const groups::GroupElement& g) const {
  switch (kind_) {
    case Kind::Constant:
      return param_;
    case Kind::GaussianCoefficient:
      return gaussian_phi(g);
    case Kind::CompactBump: {
      const double norm = groups::operator_norm(g);
      return std::max(0.0, 1.0 - norm / param_);
    }
  }
  throw std::logic_error("TestMultiplier: unknown kind");
}

PairingResult phi_tilde(const TestMultiplier& phi, const groups::GroupElement& g) {
  // every built-in multiplier is bi-K-invariant, so the double average
  // collapses to the value at the diagonal representative
  return PairingResult{phi.eval(g), 0.0};
}

PairingResult phi_tilde(const std::function<double(const Eigen::MatrixXd&)>& phi,
                        const groups::GroupElement& g, int n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("phi_tilde: need at least 2 samples");
  groups::HaarSampler sampler(seed);
  const bool sp = (g.tag == GroupTag::Sp2 || g.tag == GroupTag::U2emb);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const GroupElement k = sp ? sampler.u2() : sampler.so3();
    const GroupElement kp = sp ? sampler.u2() : sampler.so3();
    const double v = phi(k.mat * g.mat * kp.mat);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n_samples;
  const double var = std::max(0.0, sumsq / n_samples - mean * mean);
  return PairingResult{mean, std::sqrt(var / n_samples)};
}

PairingResult m_pairing(const groups::GroupElement& g, const TestMultiplier& phi) {
  return phi_tilde(phi, g);
}

DrstCheck check_lemma_drst(const kak::ChamberPointSL3& P, double p) {
  if (!(P.t < 0.0)) throw std::invalid_argument("check_lemma_drst: requires t < 0");
  if (!(P.r >= P.s && P.s >= P.t && std::abs(P.r + P.s + P.t) <= 1e-9)) {
    throw std::invalid_argument("check_lemma_drst: P must lie in the chamber");
  }
  const double lhs_a = 1.0 / std::sqrt(std::cosh(P.r) * std::cosh(P.s) * std::cosh(P.t));
  // chamber(D_{-t} k_0 D_{-t}) = (-t/2, -t/2, t)
  const double ch = std::cosh(P.t / 2.0);
  const double lhs_b = 1.0 / std::sqrt(ch * ch * std::cosh(P.t));
  DrstCheck out;
  out.lhs = std::abs(lhs_a - lhs_b);
  out.bound = spectra::epsilon(spectra::EpsilonParams{p}, std::exp(P.r + 2.0 * P.t));
  out.ok = out.lhs <= out.bound + 1e-12;
  return out;
}

DemoReport obstruction_demo(groups::GroupTag group, int n_terms, double bump_radius, double p,
                            const certify::ConstantsTable* sp2_table) {
  if (group != GroupTag::SL3 && group != GroupTag::Sp2) {
    throw std::invalid_argument("obstruction_demo: group must be SL3 or Sp2");
  }
  if (n_terms < 2) throw std::invalid_argument("obstruction_demo: need at least 2 terms");

  const TestMultiplier one = TestMultiplier::constant(1.0);
  const TestMultiplier bump = TestMultiplier::compact_bump(bump_radius);
  const TestMultiplier gauss = TestMultiplier::gaussian_coefficient();

  auto element = [&](int n) {
    return group == GroupTag::SL3
               ? groups::d_rst(2.0 * n, -1.0 * n, -1.0 * n)
               : groups::d_beta_gamma(2.0 * n, 1.0 * n);
  };

  certify::ConstantsTable table;
  if (group == GroupTag::Sp2) {
    table = sp2_table ? *sp2_table : certify::default_constants_sp2(p);
  }

  DemoReport report;
  report.group = group;
  report.p = p;
  report.bump_radius = bump_radius;
  for (int n = 1; n <= n_terms; ++n) {
    const GroupElement g = element(n);
    DemoRow row;
    row.n = n;
    row.group_norm = groups::operator_norm(g);
    row.const_pairing = m_pairing(g, one).value;
    row.bump_pairing = m_pairing(g, bump).value;
    row.gaussian_pairing = m_pairing(g, gauss).value;
    if (n < n_terms) {
      const GroupElement gn = element(n + 1);
      row.pair_bound_next =
          certify::pair_bound(g, gn, p, group == GroupTag::Sp2 ? &table : nullptr);
      row.gap_within_bound =
          std::abs(m_pairing(gn, gauss).value - row.gaussian_pairing) <=
          row.pair_bound_next + 1e-12;
    }
    report.all_ok = report.all_ok && row.gap_within_bound;
    report.rows.push_back(row);
  }
  return report;
}

PairingResult m_tilde_pairing(const groups::GroupElement& g, const TestMultiplier& phi,
                              int n_samples, std::uint64_t seed) {
  if (g.tag != GroupTag::SL3) {
    throw std::invalid_argument("m_tilde_pairing: implemented for SL3 elements");
  }
  if (n_samples < 2) throw std::invalid_argument("m_tilde_pairing: need at least 2 samples");

  // Haar on the ball |h| < 2 in KAK coordinates: chamber part by rejection
  // from the polar density, left compact factor dropped (phi_tilde absorbs
  // it exactly), right compact factor sampled.
  const double L = std::log(2.0);
  const double max_density = std::pow(std::sinh(3.0 * L), 3);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  groups::HaarSampler compact(seed ^ 0x9e3779b97f4a7c15ULL);

  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double r, s, t;
    for (;;) {
      // uniform proposal on the enclosing rectangle, clipped to the chamber
      r = L * unif(rng);
      s = -L / 2.0 + 1.5 * L * unif(rng);
      if (s > r || s < -r / 2.0) continue;
      t = -r - s;
      const double density = std::sinh(r - s) * std::sinh(s - t) * std::sinh(r - t);
      if (unif(rng) * max_density <= density) break;
    }
    const GroupElement kp = compact.so3();
    const Eigen::Matrix3d x = groups::d_rst(r, s, t).mat * kp.mat * g.mat;
    const double v = phi.eval(GroupElement{GroupTag::SL3, x});
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n_samples;
  const double var = std::max(0.0, sumsq / n_samples - mean * mean);
  return PairingResult{mean, std::sqrt(var / n_samples)};
}

}  // namespace weylcert::witness
