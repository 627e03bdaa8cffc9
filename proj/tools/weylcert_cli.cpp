// Command-line front end: every verification as a reproducible batch run
// with machine-readable output. Exit 0 on success, 1 on a failed check,
// 2 on a configuration error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "weylcert/certify.hpp"
#include "weylcert/groups.hpp"
#include "weylcert/kak.hpp"
#include "weylcert/sinhsys.hpp"
#include "weylcert/spectra.hpp"
#include "weylcert/verify.hpp"
#include "weylcert/witness.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

using weylcert::certify::format_sci17;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file " + out_path);
  os << text;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

int run_kak(const std::string& group, int samples, std::uint64_t seed, const std::string& out) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  weylcert::groups::HaarSampler haar(seed ^ 0x51ed2701ULL);
  double worst_chamber = 0.0, worst_residual = 0.0, worst_membership = 0.0;
  if (group == "sl3") {
    for (int i = 0; i < samples; ++i) {
      double a = 5.0 * unif(rng) - 2.5, b = 5.0 * unif(rng) - 2.5;
      double c = -(a + b) / 1.0;
      double v[3] = {a, b, c};
      std::sort(v, v + 3, std::greater<double>());
      const double mean = (v[0] + v[1] + v[2]) / 3.0;
      const auto d = weylcert::groups::d_rst(v[0] - mean, v[1] - mean, v[2] - mean);
      const Eigen::Matrix3d m = haar.so3().mat * d.mat * haar.so3().mat;
      const weylcert::groups::GroupElement g{weylcert::groups::GroupTag::SL3, m};
      const auto fac = weylcert::kak::kak_sl3(g);
      worst_chamber = std::max({worst_chamber, std::abs(fac.chamber.r - (v[0] - mean)),
                                std::abs(fac.chamber.t - (v[2] - mean))});
      worst_residual = std::max(worst_residual, weylcert::kak::reconstruction_residual(fac, g));
      worst_membership = std::max({worst_membership,
                                   weylcert::groups::membership_error(
                                       weylcert::groups::GroupTag::SO3, fac.k.mat),
                                   weylcert::groups::membership_error(
                                       weylcert::groups::GroupTag::SO3, fac.k2.mat)});
    }
  } else {
    for (int i = 0; i < samples; ++i) {
      const double beta = 3.0 * unif(rng);
      const double gamma = beta * unif(rng);
      const auto d = weylcert::groups::d_beta_gamma(beta, gamma);
      const Eigen::Matrix4d m = haar.u2().mat * d.mat * haar.u2().mat;
      const weylcert::groups::GroupElement g{weylcert::groups::GroupTag::Sp2, m};
      const auto fac = weylcert::kak::kak_sp2(g);
      worst_chamber = std::max({worst_chamber, std::abs(fac.chamber.beta - beta),
                                std::abs(fac.chamber.gamma - gamma)});
      worst_residual = std::max(worst_residual, weylcert::kak::reconstruction_residual(fac, g));
      worst_membership = std::max({worst_membership,
                                   weylcert::groups::membership_error(
                                       weylcert::groups::GroupTag::U2emb, fac.k.mat),
                                   weylcert::groups::membership_error(
                                       weylcert::groups::GroupTag::U2emb, fac.k2.mat)});
    }
  }
  const bool pass = worst_chamber < 1e-9 && worst_residual <= 1e-9 && worst_membership <= 1e-9;
  std::ostringstream os;
  os << "{\"command\":\"kak\",\"group\":\"" << group << "\",\"samples\":" << samples
     << ",\"seed\":" << seed << ",\"worst_chamber_error\":" << format_sci17(worst_chamber)
     << ",\"worst_residual\":" << format_sci17(worst_residual)
     << ",\"worst_compact_membership\":" << format_sci17(worst_membership)
     << ",\"pass\":" << (pass ? "true" : "false") << "}\n";
  emit(os.str(), out);
  return pass ? 0 : 1;
}

int run_spectra(const std::string& op, int grid, int cutoff, const std::string& out,
                const std::string& format) {
  std::ostringstream os;
  bool pass = true;
  os << "# weylcert spectra op=" << op << " grid=" << grid << " cutoff=" << cutoff << "\n";
  os << "parameter,bound,computed_norm,cutoff\n";
  if (op == "theta") {
    for (int i = 0; i < grid; ++i) {
      const double delta = std::pow(10.0, -3.0 * (1.0 - (grid == 1 ? 1.0 : i / (grid - 1.0))));
      const double bound = 4.0 * std::sqrt(delta);
      const double norm = weylcert::spectra::theta_gap_norm(delta, cutoff);
      pass = pass && norm <= bound;
      os << format_sci17(delta) << ',' << format_sci17(bound) << ',' << format_sci17(norm) << ','
         << cutoff << "\n";
    }
  } else if (op == "ttheta" || op == "stheta") {
    const auto fitted = weylcert::spectra::fit_u2_constants(cutoff);
    for (int i = 0; i < grid; ++i) {
      const double frac = grid == 1 ? 1.0 : i / (grid - 1.0);
      if (op == "ttheta") {
        const double h = 0.05 * std::pow((kPi / 12.0) / 0.05, frac);
        const auto kind = weylcert::spectra::difference(
            weylcert::spectra::t_theta_op(kPi / 4.0 + h), kPi / 4.0);
        const double norm = weylcert::spectra::op_norm_l2(kind, cutoff).value;
        const double bound = 2.0 * fitted.c1_l2 * std::sqrt(h);
        pass = pass && norm <= bound;
        os << format_sci17(h) << ',' << format_sci17(bound) << ',' << format_sci17(norm) << ','
           << cutoff << "\n";
      } else {
        const double h = 0.05 * std::pow(0.8 / 0.05, frac);
        const auto kind = weylcert::spectra::difference(
            weylcert::spectra::s_theta_op(0.9 + h), 0.9);
        const double norm = weylcert::spectra::op_norm_l2(kind, cutoff).value;
        const double bound = 2.0 * fitted.c2_l2 * std::pow(h, 0.25);
        pass = pass && norm <= bound;
        os << format_sci17(h) << ',' << format_sci17(bound) << ',' << format_sci17(norm) << ','
           << cutoff << "\n";
      }
    }
  } else {
    throw CLI::ValidationError("--op must be theta, ttheta or stheta");
  }
  (void)format;
  emit(os.str(), out);
  return pass ? 0 : 1;
}

int run_sinh(int samples, std::uint64_t seed, const std::string& out) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_res = 0.0, worst_b = 0.0, worst_g = 0.0, worst_r = 0.0, worst_th = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double beta = 10.0 * unif(rng), gamma = beta * unif(rng);
    const auto sol = weylcert::sinhsys::solve_system(beta, gamma);
    worst_res = std::max({worst_res, sol.s_residual, sol.t_residual});
    const double t = 1.0 + 5.0 * unif(rng);
    const double s = t * (1.0 + 0.5 * unif(rng));
    const auto bg = weylcert::sinhsys::solve_beta_gamma(s, t);
    worst_b = std::max(worst_b, std::abs(bg.beta - 2.0 * s));
    worst_g = std::max(worst_g, std::abs(bg.gamma + 2.0 * s - 3.0 * t));
  }
  const int wall_samples = std::max(4, samples / 25);
  for (int i = 0; i < wall_samples; ++i) {
    const double gamma = 4.0 * unif(rng), beta = gamma + 8.0 + 6.0 * unif(rng);
    const auto sol = weylcert::sinhsys::solve_wall_T(beta, gamma);
    worst_r = std::max(worst_r, sol.r / (2.0 * std::exp((gamma - beta) / 4.0)));
    const double g2 = 2.0 + 4.0 * unif(rng), b2 = g2 + 6.0 * unif(rng);
    const auto s1 = weylcert::sinhsys::solve_wall_S(b2, g2);
    const auto s2 = weylcert::sinhsys::solve_wall_S(2.0 * weylcert::sinhsys::solve_t(b2, g2),
                                                    weylcert::sinhsys::solve_t(b2, g2));
    worst_th = std::max(worst_th, std::abs(s1.theta - s2.theta) / std::exp(-g2 / 2.0));
  }
  const bool pass = worst_res <= 1e-12 && worst_b <= 1.0 && worst_g <= 1.0 &&
                    worst_r <= 1.0 + 1e-6 && worst_th <= 1.0 + 1e-6;
  std::ostringstream os;
  os << "{\"command\":\"sinh\",\"samples\":" << samples << ",\"seed\":" << seed
     << ",\"worst_relative_residual\":" << format_sci17(worst_res)
     << ",\"worst_beta_minus_2s\":" << format_sci17(worst_b)
     << ",\"worst_gamma_plus_2s_minus_3t\":" << format_sci17(worst_g)
     << ",\"worst_r_bound_ratio\":" << format_sci17(worst_r)
     << ",\"worst_theta_bound_ratio\":" << format_sci17(worst_th)
     << ",\"pass\":" << (pass ? "true" : "false") << "}\n";
  emit(os.str(), out);
  return pass ? 0 : 1;
}

int run_certify(const std::string& group, const std::string& from, const std::string& to,
                double p, double c1_sp2, double c2_sp2, const std::string& out) {
  const auto a = parse_point(from);
  const auto b = parse_point(to);
  weylcert::certify::Certificate cert;
  if (group == "sl3") {
    if (a.size() != 3 || b.size() != 3) {
      throw CLI::ValidationError("sl3 chamber points need 3 comma-separated reals");
    }
    cert = weylcert::certify::plan_path_sl3({a[0], a[1], a[2]}, {b[0], b[1], b[2]}, p);
  } else {
    if (a.size() != 2 || b.size() != 2) {
      throw CLI::ValidationError("sp2 chamber points need 2 comma-separated reals");
    }
    const auto table = (c1_sp2 > 0.0 && c2_sp2 > 0.0)
                           ? weylcert::certify::constants_sp2(p, c1_sp2, c2_sp2)
                           : weylcert::certify::default_constants_sp2(p);
    cert = weylcert::certify::plan_path_sp2({a[0], a[1]}, {b[0], b[1]}, p, table);
  }
  const auto report = weylcert::certify::check_certificate(cert);
  emit(weylcert::certify::to_json(cert) + "\n", out);
  if (!report.ok) {
    std::cerr << "certificate failed self-check: " << report.message << "\n";
    return 1;
  }
  return 0;
}

int run_demo(const std::string& group, double p, int terms, const std::string& out,
             const std::string& format) {
  const double radius = 10.0;
  const auto tag = group == "sl3" ? weylcert::groups::GroupTag::SL3
                                  : weylcert::groups::GroupTag::Sp2;
  const auto report = weylcert::witness::obstruction_demo(tag, terms, radius, p);
  std::ostringstream os;
  if (format == "csv") {
    os << "# weylcert demo group=" << group << " p=" << format_sci17(p)
       << " terms=" << terms << " bump_radius=" << format_sci17(radius) << "\n";
    os << "n,group_norm,const_pairing,bump_pairing,gaussian_pairing,pair_bound_next,"
          "gap_within_bound\n";
    for (const auto& row : report.rows) {
      os << row.n << ',' << format_sci17(row.group_norm) << ','
         << format_sci17(row.const_pairing) << ',' << format_sci17(row.bump_pairing) << ','
         << format_sci17(row.gaussian_pairing) << ',' << format_sci17(row.pair_bound_next)
         << ',' << (row.gap_within_bound ? 1 : 0) << "\n";
    }
  } else {
    os << "{\"command\":\"demo\",\"group\":\"" << group << "\",\"p\":" << format_sci17(p)
       << ",\"terms\":" << terms << ",\"bump_radius\":" << format_sci17(radius)
       << ",\"rows\":[";
    for (size_t i = 0; i < report.rows.size(); ++i) {
      const auto& row = report.rows[i];
      if (i) os << ',';
      os << "{\"n\":" << row.n << ",\"group_norm\":" << format_sci17(row.group_norm)
         << ",\"const\":" << format_sci17(row.const_pairing)
         << ",\"bump\":" << format_sci17(row.bump_pairing)
         << ",\"gaussian\":" << format_sci17(row.gaussian_pairing)
         << ",\"pair_bound_next\":" << format_sci17(row.pair_bound_next)
         << ",\"gap_within_bound\":" << (row.gap_within_bound ? "true" : "false") << "}";
    }
    os << "],\"pass\":" << (report.all_ok ? "true" : "false") << "}\n";
  }
  emit(os.str(), out);
  return report.all_ok ? 0 : 1;
}

int run_constants(double p, double c1_sp2, double c2_sp2, const std::string& out) {
  const auto table = (c1_sp2 > 0.0 && c2_sp2 > 0.0)
                         ? weylcert::certify::constants_sp2(p, c1_sp2, c2_sp2)
                         : weylcert::certify::default_constants_sp2(p);
  std::ostringstream os;
  os << "{\"command\":\"constants\",\"p\":" << format_sci17(p)
     << ",\"sp2_constants_source\":\""
     << ((c1_sp2 > 0.0 && c2_sp2 > 0.0) ? "configured" : "fitted(cutoff 64) x2 safety")
     << "\",\"table\":{";
  os << "\"cTilde\":" << format_sci17(table.cTilde) << ",\"c1\":" << format_sci17(table.c1)
     << ",\"c2\":" << format_sci17(table.c2) << ",\"c3\":" << format_sci17(table.c3)
     << ",\"c4\":" << format_sci17(table.c4) << ",\"cSL3\":" << format_sci17(table.cSL3)
     << ",\"c1Sp2\":" << format_sci17(table.c1Sp2) << ",\"c2Sp2\":" << format_sci17(table.c2Sp2)
     << ",\"c3Sp2\":" << format_sci17(table.c3Sp2) << ",\"c4Sp2\":" << format_sci17(table.c4Sp2)
     << ",\"c5\":" << format_sci17(table.c5) << ",\"c6\":" << format_sci17(table.c6)
     << ",\"c7\":" << format_sci17(table.c7) << ",\"cGeom\":" << format_sci17(table.cGeom)
     << "}}\n";
  emit(os.str(), out);
  return 0;
}

int run_verify_all(std::uint64_t seed, const std::string& out) {
  const auto results = weylcert::verify::run_all(seed);
  bool all = true;
  std::ostringstream os;
  for (const auto& res : results) {
    all = all && res.pass;
    std::cout << (res.pass ? "PASS" : "FAIL") << " criterion " << res.id << ": " << res.name
              << " — " << res.detail << "\n";
  }
  os << "{\"command\":\"verify-all\",\"seed\":" << seed << ",\"criteria\":[";
  for (size_t i = 0; i < results.size(); ++i) {
    if (i) os << ',';
    os << "{\"id\":" << results[i].id << ",\"pass\":" << (results[i].pass ? "true" : "false")
       << ",\"detail\":\"" << results[i].detail << "\"}";
  }
  os << "],\"pass\":" << (all ? "true" : "false") << "}\n";
  if (!out.empty()) emit(os.str(), out);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weylcert: decay certificates and operator bounds for SL(3,R) and Sp(2,R)"};
  app.require_subcommand(1);

  std::string group = "sl3", from, to, out, format = "json", op = "theta";
  double p = 2.0, c1_sp2 = 0.0, c2_sp2 = 0.0, tol = 1e-9;
  int samples = 1000, delta_grid = 64, cutoff = 256;
  std::uint64_t seed = 42;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "output file (stdout when omitted)");
    cmd->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", tol, "tolerance override for reports");
  };

  auto* kak_cmd = app.add_subcommand("kak", "KAK round-trip batch verification");
  kak_cmd->add_option("--group", group)->check(CLI::IsMember({"sl3", "sp2"}));
  kak_cmd->add_option("--samples", samples);
  kak_cmd->add_option("--seed", seed);
  add_common(kak_cmd);

  auto* spectra_cmd = app.add_subcommand("spectra", "operator-norm sweeps against bounds");
  spectra_cmd->add_option("--op", op)->check(CLI::IsMember({"theta", "ttheta", "stheta"}));
  spectra_cmd->add_option("--delta-grid", delta_grid);
  spectra_cmd->add_option("--cutoff", cutoff);
  add_common(spectra_cmd);

  auto* sinh_cmd = app.add_subcommand("sinh", "sinh-system and wall-solver verification");
  sinh_cmd->add_option("--samples", samples);
  sinh_cmd->add_option("--seed", seed);
  add_common(sinh_cmd);

  auto* certify_cmd = app.add_subcommand("certify", "emit a checked decay certificate");
  certify_cmd->add_option("--group", group)->check(CLI::IsMember({"sl3", "sp2"}));
  certify_cmd->add_option("--from", from)->required();
  certify_cmd->add_option("--to", to)->required();
  certify_cmd->add_option("--p", p);
  certify_cmd->add_option("--c1-sp2", c1_sp2);
  certify_cmd->add_option("--c2-sp2", c2_sp2);
  add_common(certify_cmd);

  auto* demo_cmd = app.add_subcommand("demo", "obstruction demonstration along escape rays");
  demo_cmd->add_option("--group", group)->check(CLI::IsMember({"sl3", "sp2"}));
  demo_cmd->add_option("--p", p);
  demo_cmd->add_option("--samples", samples, "number of ray terms");
  add_common(demo_cmd);

  auto* constants_cmd = app.add_subcommand("constants", "emit the constant ledger");
  constants_cmd->add_option("--p", p);
  constants_cmd->add_option("--c1-sp2", c1_sp2);
  constants_cmd->add_option("--c2-sp2", c2_sp2);
  add_common(constants_cmd);

  auto* verify_cmd = app.add_subcommand("verify-all", "run every acceptance suite");
  verify_cmd->add_option("--p", p);
  verify_cmd->add_option("--seed", seed);
  add_common(verify_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(kak_cmd)) return run_kak(group, samples, seed, out);
    if (app.got_subcommand(spectra_cmd))
      return run_spectra(op, delta_grid, cutoff, out, format);
    if (app.got_subcommand(sinh_cmd)) return run_sinh(samples, seed, out);
    if (app.got_subcommand(certify_cmd))
      return run_certify(group, from, to, p, c1_sp2, c2_sp2, out);
    if (app.got_subcommand(demo_cmd))
      return run_demo(group, p, std::min(samples, 64), out, format);
    if (app.got_subcommand(constants_cmd)) return run_constants(p, c1_sp2, c2_sp2, out);
    if (app.got_subcommand(verify_cmd)) return run_verify_all(seed, out);
  } catch (const CLI::ValidationError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
