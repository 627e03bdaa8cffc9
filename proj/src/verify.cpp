#include "weylcert/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "weylcert/certify.hpp"
#include "weylcert/groups.hpp"
#include "weylcert/kak.hpp"
#include "weylcert/sinhsys.hpp"
#include "weylcert/spectra.hpp"
#include "weylcert/witness.hpp"

namespace weylcert::verify {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

kak::ChamberPointSL3 random_sl3_chamber(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  double a = unif(rng), b = unif(rng), c = unif(rng);
  const double mean = (a + b + c) / 3.0;
  a -= mean;
  b -= mean;
  c -= mean;
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  return {a, b, c};
}

kak::ChamberPointSp2 random_sp2_chamber(std::mt19937_64& rng, double beta_max) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double beta = beta_max * unif(rng);
  return {beta, beta * unif(rng)};
}

}  // namespace

CriterionResult legendre_operator_bound() {
  Timer timer;
  CriterionResult res{1, "Legendre/operator bound sup|P_n(d)-P_n(0)| <= 4 sqrt(d)", false, "", 0};
  int violations = 0;
  double worst_margin = 1e9;
  for (int i = 0; i < 64; ++i) {
    const double delta = std::pow(10.0, -3.0 * (1.0 - i / 63.0));
    const double sup = spectra::theta_gap_norm(delta, 256);
    const double bound = 4.0 * std::sqrt(delta);
    worst_margin = std::min(worst_margin, bound - sup);
    if (sup > bound) ++violations;
  }
  res.seconds = timer.seconds();
  res.pass = violations == 0 && res.seconds < 5.0;
  res.detail = "violations " + std::to_string(violations) + ", smallest margin " +
               fmt(worst_margin) + ", " + fmt(res.seconds) + " s (< 5 s)";
  return res;
}

CriterionResult geometric_spectral_agreement(std::uint64_t seed) {
  Timer timer;
  CriterionResult res{2, "Quadrature Theta_delta matches the Legendre diagonal (l <= 8)", false,
                      "", 0};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  spectra::SphCoeffs f(8);
  for (auto& c : f.coeffs) c = {normal(rng), normal(rng)};

  double max_err = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double delta = -1.0 + 2.0 * i / 15.0;
    const auto eigs = spectra::theta_delta_eigs(delta, 8);
    const auto out = spectra::quad_apply_theta(f, delta, 64);
    for (int l = 0; l <= 8; ++l) {
      for (int m = -l; m <= l; ++m) {
        const auto want = eigs[l] * f.at(l, m);
        max_err = std::max(max_err, std::abs(out.at(l, m) - want));
      }
    }
  }
  res.seconds = timer.seconds();
  res.pass = max_err < 1e-8;
  res.detail = "16 delta values, max coefficient error " + fmt(max_err) + " (< 1e-8)";
  return res;
}

CriterionResult kak_round_trips(std::uint64_t seed) {
  Timer timer;
  CriterionResult res{3, "KAK round trips, bi-invariance, Sp2 reconstruction", false, "", 0};
  std::mt19937_64 rng(seed);
  groups::HaarSampler haar(seed ^ 0xabcdef12345ULL);

  double worst_sl3 = 0.0, worst_sl3_binv = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto ch = random_sl3_chamber(rng, 2.5);
    const auto k = haar.so3();
    const auto kp = haar.so3();
    const Eigen::Matrix3d m = k.mat * groups::d_rst(ch.r, ch.s, ch.t).mat * kp.mat;
    const groups::GroupElement g{groups::GroupTag::SL3, m};
    const auto rec = kak::gamma_sl3(g);
    worst_sl3 = std::max({worst_sl3, std::abs(rec.r - ch.r), std::abs(rec.s - ch.s),
                          std::abs(rec.t - ch.t)});
    const auto k0 = haar.so3();
    const auto k1 = haar.so3();
    const groups::GroupElement g2{groups::GroupTag::SL3, k0.mat * m * k1.mat};
    const auto rec2 = kak::gamma_sl3(g2);
    worst_sl3_binv = std::max({worst_sl3_binv, std::abs(rec2.r - rec.r),
                               std::abs(rec2.s - rec.s), std::abs(rec2.t - rec.t)});
  }

  double worst_sp2 = 0.0, worst_sp2_binv = 0.0, worst_res = 0.0, worst_mem = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto ch = random_sp2_chamber(rng, 3.0);
    const auto k = haar.u2();
    const auto kp = haar.u2();
    const Eigen::Matrix4d m = k.mat * groups::d_beta_gamma(ch.beta, ch.gamma).mat * kp.mat;
    const groups::GroupElement g{groups::GroupTag::Sp2, m};
    const auto fac = kak::kak_sp2(g);
    worst_sp2 = std::max({worst_sp2, std::abs(fac.chamber.beta - ch.beta),
                          std::abs(fac.chamber.gamma - ch.gamma)});
    worst_res = std::max(worst_res, kak::reconstruction_residual(fac, g));
    worst_mem = std::max({worst_mem,
                          groups::membership_error(groups::GroupTag::U2emb, fac.k.mat),
                          groups::membership_error(groups::GroupTag::U2emb, fac.k2.mat)});
    const auto k0 = haar.u2();
    const auto k1 = haar.u2();
    const groups::GroupElement g2{groups::GroupTag::Sp2, k0.mat * m * k1.mat};
    const auto rec2 = kak::beta_gamma_sp2(g2);
    worst_sp2_binv = std::max({worst_sp2_binv, std::abs(rec2.beta - fac.chamber.beta),
                               std::abs(rec2.gamma - fac.chamber.gamma)});
  }

  res.seconds = timer.seconds();
  res.pass = worst_sl3 < 1e-9 && worst_sl3_binv < 1e-9 && worst_sp2 < 1e-9 &&
             worst_sp2_binv < 1e-9 && worst_res <= 1e-9 && worst_mem <= 1e-9;
  res.detail = "10^4 trips/group: chamber err sl3 " + fmt(worst_sl3) + ", sp2 " + fmt(worst_sp2) +
               "; bi-inv " + fmt(std::max(worst_sl3_binv, worst_sp2_binv)) + "; sp2 residual " +
               fmt(worst_res) + "; compact membership " + fmt(worst_mem) + " (all < 1e-9)";
  return res;
}

CriterionResult wall_identities(std::uint64_t seed) {
  Timer timer;
  CriterionResult res{4, "SL3 wall identities and bisection root bounds", false, "", 0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double worst_gamma3 = 0.0;
  for (int ia = 0; ia < 25; ++ia) {
    const double a = 0.1 + (5.0 - 0.1) * ia / 24.0;
    for (int id = 0; id <= 20; ++id) {
      const double delta = -1.0 + 2.0 * id / 20.0;
      const groups::GroupElement g{groups::GroupTag::SL3, kak::wall_matrix_sl3(a, delta)};
      worst_gamma3 = std::max(worst_gamma3, std::abs(kak::gamma_sl3(g).t + a));
    }
  }

  double worst_endpoint = 0.0;
  for (int it = 0; it < 20; ++it) {
    const double t = -5.0 + 4.8 * it / 19.0;
    const double a = -t;
    const groups::GroupElement g1{groups::GroupTag::SL3, kak::wall_matrix_sl3(a, 1.0)};
    const groups::GroupElement g0{groups::GroupTag::SL3, kak::wall_matrix_sl3(a, 0.0)};
    worst_endpoint = std::max({worst_endpoint, std::abs(kak::gamma_sl3(g1).r + 2.0 * t),
                               std::abs(kak::gamma_sl3(g0).r + t / 2.0)});
  }

  double worst_residual = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = -5.0 + 4.8 * unif(rng);
    const double r = (-t / 2.0) + (-2.0 * t - (-t / 2.0)) * unif(rng);
    const double delta = kak::solve_delta_sl3(r, t);
    const groups::GroupElement g{groups::GroupTag::SL3, kak::wall_matrix_sl3(-t, delta)};
    worst_residual = std::max(worst_residual, std::abs(kak::gamma_sl3(g).r - r));
    worst_ratio = std::max(worst_ratio, delta / (std::exp(r + 2.0 * t) * (1.0 + 1e-9)));
  }

  res.seconds = timer.seconds();
  res.pass = worst_gamma3 <= 1e-9 && worst_endpoint <= 1e-9 && worst_residual <= 1e-10 &&
             worst_ratio <= 1.0;
  res.detail = "gamma3 grid err " + fmt(worst_gamma3) + ", endpoint err " + fmt(worst_endpoint) +
               " (<= 1e-9); 10^3 roots: residual " + fmt(worst_residual) +
               " (<= 1e-10), delta/e^{r+2t} max " + fmt(worst_ratio) + " (<= 1)";
  return res;
}

CriterionResult sinh_systems(std::uint64_t seed) {
  Timer timer;
  CriterionResult res{5, "sinh systems, inverse bounds, wall-solver bounds", false, "", 0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double worst_res = 0.0;
  bool order_ok = true;
  for (int i = 0; i < 1000; ++i) {
    const double beta = 10.0 * unif(rng);
    const double gamma = beta * unif(rng);
    const auto sol = sinhsys::solve_system(beta, gamma);
    worst_res = std::max({worst_res, sol.s_residual, sol.t_residual});
    order_ok = order_ok && sol.s >= beta / 4.0 - 1e-12 && sol.t >= gamma / 2.0 - 1e-12;
  }

  double worst_b = 0.0, worst_g = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 1.0 + 5.0 * unif(rng);
    const double s = t * (1.0 + 0.5 * unif(rng));
    const auto bg = sinhsys::solve_beta_gamma(s, t);
    worst_b = std::max(worst_b, std::abs(bg.beta - 2.0 * s));
    worst_g = std::max(worst_g, std::abs(bg.gamma + 2.0 * s - 3.0 * t));
  }

  double worst_r_ratio = 0.0, worst_wall_res = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = 4.0 * unif(rng);
    const double beta = gamma + 8.0 + 6.0 * unif(rng);
    const auto sol = sinhsys::solve_wall_T(beta, gamma);
    worst_wall_res = std::max(worst_wall_res, sol.residual);
    worst_r_ratio =
        std::max(worst_r_ratio, sol.r / (2.0 * std::exp((gamma - beta) / 4.0) * (1.0 + 1e-6)));
  }

  double worst_theta_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = 2.0 + 4.0 * unif(rng);
    const double beta = gamma + 6.0 * unif(rng);
    const auto sol1 = sinhsys::solve_wall_S(beta, gamma);
    worst_wall_res = std::max(worst_wall_res, sol1.residual);
    const double t = sinhsys::solve_t(beta, gamma);
    const auto sol2 = sinhsys::solve_wall_S(2.0 * t, t);
    worst_theta_ratio = std::max(worst_theta_ratio,
                                 std::abs(sol1.theta - sol2.theta) /
                                     (std::exp(-gamma / 2.0) * (1.0 + 1e-6)));
  }

  res.seconds = timer.seconds();
  res.pass = worst_res <= 1e-12 && order_ok && worst_b <= 1.0 && worst_g <= 1.0 &&
             worst_r_ratio <= 1.0 && worst_theta_ratio <= 1.0 && worst_wall_res <= 1e-8 &&
             res.seconds < 60.0;
  res.detail = "residuals " + fmt(worst_res) + " (<= 1e-12); |beta-2s| " + fmt(worst_b) +
               ", |gamma+2s-3t| " + fmt(worst_g) + " (<= 1); r-bound ratio " +
               fmt(worst_r_ratio) + ", theta-bound ratio " + fmt(worst_theta_ratio) +
               " (<= 1); " + fmt(res.seconds) + " s (< 60 s)";
  return res;
}

CriterionResult gaussian_witness_suite(std::uint64_t seed) {
  Timer timer;
  CriterionResult res{6, "Gaussian-witness inequalities (wall lemma + SL3 envelope)", false, "",
                      0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  int drst_failures = 0;
  for (double p : {2.0, 3.0, 4.0}) {
    for (int i = 0; i < 1000; ++i) {
      const double t = -6.0 + 5.9 * unif(rng);
      const double r = (-t / 2.0) + (-2.0 * t + t / 2.0) * unif(rng);
      const auto check = witness::check_lemma_drst({r, -r - t, t}, p);
      if (!check.ok) ++drst_failures;
    }
  }

  int envelope_failures = 0;
  double worst_slack = 0.0;
  for (double p : {2.0, 3.0, 4.0}) {
    for (int i = 0; i < 1000; ++i) {
      const auto c1 = random_sl3_chamber(rng, 8.0);
      const auto c2 = random_sl3_chamber(rng, 8.0);
      const auto g1 = groups::d_rst(c1.r, c1.s, c1.t);
      const auto g2 = groups::d_rst(c2.r, c2.s, c2.t);
      const double lhs =
          std::abs(witness::gaussian_phi(g1) - witness::gaussian_phi(g2));
      const double bound = certify::pair_bound(g1, g2, p);
      if (lhs > bound + 1e-12) ++envelope_failures;
      worst_slack = std::max(worst_slack, lhs - bound);
    }
  }

  res.seconds = timer.seconds();
  res.pass = drst_failures == 0 && envelope_failures == 0;
  res.detail = "10^3-point grid x p in {2,3,4}: " + std::to_string(drst_failures) +
               " wall-lemma violations; 10^3 pairs x p: " + std::to_string(envelope_failures) +
               " envelope violations (tolerance 1e-12)";
  return res;
}

CriterionResult certificate_soundness(std::uint64_t seed) {
  Timer timer;
  CriterionResult res{7, "Certificate soundness: planner accepted, tamperings rejected", false,
                      "", 0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double ps[] = {2.0, 3.0, 4.0, 7.0};

  int accept_failures = 0, tamper_escapes = 0, checked = 0, tampered = 0;
  std::vector<certify::Certificate> pool;

  for (int i = 0; i < 1000; ++i) {
    const double p = ps[i % 4];
    auto a = random_sl3_chamber(rng, 6.0);
    auto b = random_sl3_chamber(rng, 6.0);
    if (b.t > a.t) std::swap(a, b);
    auto cert = certify::plan_path_sl3(a, b, p);
    if (!certify::check_certificate(cert).ok) ++accept_failures;
    ++checked;
    if (!cert.steps.empty()) pool.push_back(std::move(cert));
  }
  const auto table2 = certify::default_constants_sp2(2.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = ps[i % 4];
    auto a = random_sp2_chamber(rng, 12.0);
    auto b = random_sp2_chamber(rng, 12.0);
    if (a.beta > b.beta) std::swap(a, b);
    const auto table = (p == 2.0) ? table2 : certify::default_constants_sp2(p);
    auto cert = certify::plan_path_sp2(a, b, p, table);
    if (!certify::check_certificate(cert).ok) ++accept_failures;
    ++checked;
    if (!cert.steps.empty()) pool.push_back(std::move(cert));
  }

  for (int i = 0; i < 1000 && !pool.empty(); ++i) {
    certify::Certificate cert = pool[i % pool.size()];
    const size_t si = static_cast<size_t>(unif(rng) * cert.steps.size()) % cert.steps.size();
    if (i % 2 == 0) {
      cert.steps[si].bound *= 0.5;  // also desynchronizes the recorded total
    } else {
      const size_t ci = static_cast<size_t>(unif(rng) * cert.steps[si].to.size()) %
                        cert.steps[si].to.size();
      cert.steps[si].to[ci] += 0.1;
    }
    ++tampered;
    if (certify::check_certificate(cert).ok) ++tamper_escapes;
  }

  res.seconds = timer.seconds();
  res.pass = accept_failures == 0 && tamper_escapes == 0;
  res.detail = std::to_string(checked) + " planner outputs accepted (" +
               std::to_string(accept_failures) + " failures); " + std::to_string(tampered) +
               " tamperings, " + std::to_string(tamper_escapes) + " escaped";
  return res;
}

CriterionResult u2_spectral_properties(std::uint64_t seed) {
  Timer timer;
  CriterionResult res{8, "U(2) spectral decay exponents and fitted-constant witness checks",
                      false, "", 0};

  std::vector<double> t_gaps, s_gaps;
  for (int i = 0; i < 12; ++i) {
    t_gaps.push_back(0.05 * std::pow((kPi / 12.0) / 0.05, i / 11.0));
    s_gaps.push_back(0.05 * std::pow(0.8 / 0.05, i / 11.0));
  }
  const auto t64 = spectra::t_theta_gap_sweep(t_gaps, 64);
  const auto t128 = spectra::t_theta_gap_sweep(t_gaps, 128);
  const auto s64 = spectra::s_theta_gap_sweep(s_gaps, 64, 0.9);
  const auto s128 = spectra::s_theta_gap_sweep(s_gaps, 128, 0.9);

  const double t_exp = spectra::fit_exponent(t64);
  const double s_exp = spectra::fit_exponent(s64);
  double worst_drift = 0.0;
  for (size_t i = 0; i < t64.size(); ++i) {
    worst_drift = std::max(worst_drift,
                           std::abs(t128[i].second - t64[i].second) / t64[i].second);
    worst_drift = std::max(worst_drift,
                           std::abs(s128[i].second - s64[i].second) / s64[i].second);
  }

  // fitted constants (x2 safety) must carry the Sp2 witness inequality
  std::mt19937_64 rng(seed);
  int witness_failures = 0;
  for (double p : {2.0, 3.0}) {
    const auto table = certify::default_constants_sp2(p);
    for (int i = 0; i < 200; ++i) {
      const auto c1 = random_sp2_chamber(rng, 10.0);
      const auto c2 = random_sp2_chamber(rng, 10.0);
      const auto g1 = groups::d_beta_gamma(c1.beta, c1.gamma);
      const auto g2 = groups::d_beta_gamma(c2.beta, c2.gamma);
      const double lhs = std::abs(witness::gaussian_phi(g1) - witness::gaussian_phi(g2));
      if (lhs > certify::pair_bound(g1, g2, p, &table) + 1e-12) ++witness_failures;
    }
  }

  res.seconds = timer.seconds();
  const bool t_ok = t_exp >= 0.4 && t_exp <= 0.6;
  const bool s_ok = s_exp >= 0.15 && s_exp <= 0.35;
  res.pass = t_ok && s_ok && worst_drift <= 0.05 && witness_failures == 0;
  res.detail = "T exponent " + fmt(t_exp) + " (in [0.4,0.6]), S exponent " + fmt(s_exp) +
               " (in [0.15,0.35]); cutoff-doubling drift " + fmt(100.0 * worst_drift) +
               "% (<= 5%); Sp2 witness failures " + std::to_string(witness_failures);
  return res;
}

CriterionResult obstruction_demo_run() {
  Timer timer;
  CriterionResult res{9, "Obstruction demo rays: columns, gaps, Cauchy tail", false, "", 0};
  const double p = 2.0;

  bool ok = true;
  std::string note;
  for (auto group : {groups::GroupTag::SL3, groups::GroupTag::Sp2}) {
    const double radius = 10.0;
    const auto report = witness::obstruction_demo(group, 20, radius, p);
    // the envelope itself decays by this factor per unit step along the ray
    const double ratio_limit = (group == groups::GroupTag::SL3)
                                   ? std::exp(-1.0 / p)
                                   : std::exp(-1.0 / (16.0 * p));
    for (size_t i = 0; i < report.rows.size(); ++i) {
      const auto& row = report.rows[i];
      if (row.const_pairing != 1.0) ok = false;
      if (row.group_norm > radius && row.bump_pairing != 0.0) ok = false;
      if (!row.gap_within_bound) ok = false;
      if (i + 2 < report.rows.size()) {
        const double ratio = report.rows[i + 1].pair_bound_next / row.pair_bound_next;
        if (ratio > ratio_limit * (1.0 + 1e-6)) {
          ok = false;
          note += " ratio violation at n=" + std::to_string(row.n);
        }
      }
    }
  }

  res.seconds = timer.seconds();
  res.pass = ok && res.seconds < 30.0;
  res.detail = "20-term rays, constant column 1, bump column 0 beyond radius, gaps within "
               "bounds, per-step bound ratios <= e^{-1/p} (SL3) / e^{-1/(16p)} (Sp2);" +
               (note.empty() ? std::string(" all hold; ") : note + "; ") + fmt(res.seconds) +
               " s (< 30 s)";
  return res;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(legendre_operator_bound());
  out.push_back(geometric_spectral_agreement(seed));
  out.push_back(kak_round_trips(seed));
  out.push_back(wall_identities(seed));
  out.push_back(sinh_systems(seed));
  out.push_back(gaussian_witness_suite(seed));
  out.push_back(certificate_soundness(seed));
  out.push_back(u2_spectral_properties(seed));
  out.push_back(obstruction_demo_run());
  return out;
}

}  // namespace weylcert::verify
