#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weylcert/certify.hpp"
#include "weylcert/groups.hpp"
#include "weylcert/kak.hpp"

// Bi-K-averages of test multipliers, the measures m_g as pairings, and the
// obstruction demonstration along escape rays.

namespace weylcert::witness {

// Closed-form value of the norm-one Gaussian coefficient witness:
// prod_i cosh(gamma_i)^{-1/2} on SL3, (cosh beta cosh gamma)^{-1} on Sp2.
// Compact tags sit at the chamber origin and give 1.
double gaussian_phi(const groups::GroupElement& g);

class TestMultiplier {
 public:
  enum class Kind { Constant, GaussianCoefficient, CompactBump };

  static TestMultiplier constant(double c);
  static TestMultiplier gaussian_coefficient();
  // Value-only bump max(0, 1 - |g|/radius); carries no multiplier bound and
  // must never appear inside inequality checks that need one.
  static TestMultiplier compact_bump(double radius);

  Kind kind() const { return kind_; }
  double eval(const groups::GroupElement& g) const;
  // All three kinds are radial in the chamber coordinates.
  bool bi_invariant() const { return true; }
  std::optional<double> pcb_norm_bound() const { return bound_; }
  const std::string& provenance() const { return provenance_; }

 private:
  TestMultiplier(Kind kind, double param, std::optional<double> bound, std::string provenance)
      : kind_(kind), param_(param), bound_(bound), provenance_(std::move(provenance)) {}

  Kind kind_;
  double param_;
  std::optional<double> bound_;
  std::string provenance_;
};

struct PairingResult {
  double value = 0.0;
  double mc_error = 0.0;  // 0 for closed forms
};

// Bi-K-average of the multiplier at g. Bi-invariant inputs short-circuit to
// exact evaluation at D(chamber(g)); the raw-function overload runs Monte
// Carlo over Haar pairs with a standard-error estimate.
PairingResult phi_tilde(const TestMultiplier& phi, const groups::GroupElement& g);
PairingResult phi_tilde(const std::function<double(const Eigen::MatrixXd&)>& phi,
                        const groups::GroupElement& g, int n_samples, std::uint64_t seed);

// <m_g, phi> = phi_tilde(phi)(g).
PairingResult m_pairing(const groups::GroupElement& g, const TestMultiplier& phi);

struct DrstCheck {
  double lhs = 0.0;    // |phi(D(r,s,t)) - phi(D_{-t} k_0 D_{-t})|
  double bound = 0.0;  // epsilon(e^{r+2t})
  bool ok = false;
};

// Gaussian-witness instance of the wall-comparison inequality at P in the
// chamber with t < 0.
DrstCheck check_lemma_drst(const kak::ChamberPointSL3& P, double p);

struct DemoRow {
  int n = 0;
  double group_norm = 0.0;
  double const_pairing = 0.0;
  double bump_pairing = 0.0;
  double gaussian_pairing = 0.0;
  double pair_bound_next = 0.0;  // 0 on the last row
  bool gap_within_bound = true;
};

struct DemoReport {
  groups::GroupTag group;
  double p = 0.0;
  double bump_radius = 0.0;
  std::vector<DemoRow> rows;
  bool all_ok = true;
};

// Escape-ray table along g_n = D(2n,-n,-n) (SL3) or D(2n,n) (Sp2).
DemoReport obstruction_demo(groups::GroupTag group, int n_terms, double bump_radius, double p,
                            const certify::ConstantsTable* sp2_table = nullptr);

// Monte Carlo pairing against the mollified measure: the Haar-ball average
// of phi_tilde(phi, h g) over |h| < 2, sampled in KAK coordinates with the
// polar density prod_{i<j} sinh(gamma_i - gamma_j). SL3 only.
PairingResult m_tilde_pairing(const groups::GroupElement& g, const TestMultiplier& phi,
                              int n_samples, std::uint64_t seed);

}  // namespace weylcert::witness
