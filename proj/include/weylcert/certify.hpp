#pragma once

#include <string>
#include <vector>

#include "weylcert/groups.hpp"
#include "weylcert/kak.hpp"

// Machine-verifiable decay certificates for chamber-point pairs: the
// staircase construction on the s = -1 wall for SL(3,R) and the
// reduce-to-ray / unit-segment chain for Sp(2,R), with the full constant
// ledger. Certificates serialize every constant they use, so a checker
// needs no shared configuration.

namespace weylcert::certify {

struct ConstantsTable {
  double p = 0.0;
  // SL3 chain
  double cTilde = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, cSL3 = 0.0;
  // Sp2 chain (c1Sp2, c2Sp2 are configured inputs)
  double c1Sp2 = 0.0, c2Sp2 = 0.0;
  double c3Sp2 = 0.0, c4Sp2 = 0.0, c5 = 0.0, c6 = 0.0, c7 = 0.0, cGeom = 0.0;
};

// cTilde = 2^{1+2/p}; c1 = 2 cTilde (2/(1-e^{-2/p}) + 1 + e^{1/p});
// c2 = 2 cTilde e^{1/p}; c3 = c1 + 2 c2; c4 = 2 e^{1/p}; cSL3 = max{c3, c4}.
ConstantsTable constants_sl3(double p);

// Extends constants_sl3(p) with the Sp2 chain built from the configured
// Hoelder constants of the T_theta / S_theta families.
ConstantsTable constants_sp2(double p, double c1_sp2, double c2_sp2);

// Sp2 constants defaulted from the spectra fit at cutoff 64 with a x2
// safety factor, transported to L_p by interpolation.
ConstantsTable default_constants_sp2(double p);

enum class StepTag {
  FixGamma3,      // SL3, gamma_3 fixed
  FixGamma1,      // SL3, gamma_1 fixed
  SmallT,         // SL3, t > -1 region
  Sp2ToRayViaT,   // beta >= 2 gamma, to (2s, s)
  Sp2ToRayViaS,   // beta < 2 gamma, to (2t, t)
  Sp2RaySegment,  // short ray segment, carries its two wall sub-steps
  Sp2SmallRegion, // ray join with anchor below 5
  IneqEps1Part,   // sub-step: (beta,gamma) -> (2s, s)
  IneqEps2Part,   // sub-step: (beta,gamma) -> (2t, t)
};

const char* step_tag_name(StepTag tag);

using Point = std::vector<double>;  // (r,s,t) for SL3, (beta,gamma) for Sp2

struct PathStep {
  Point from, to;
  StepTag tag;
  double bound = 0.0;
  std::vector<PathStep> subSteps;
};

struct Envelope {
  double constant = 0.0;
  double coeff = 0.0;   // exponent coefficient
  double anchor = 0.0;  // anchor chamber coordinate
  double value() const;
};

struct Certificate {
  std::string group;  // "sl3" | "sp2"
  double p = 0.0;
  ConstantsTable constants;
  std::vector<PathStep> steps;
  double total = 0.0;
  Envelope envelope;
};

// Path from P to Pp replicating the staircase proof. Requires t(Pp) <= t(P).
Certificate plan_path_sl3(const kak::ChamberPointSL3& P, const kak::ChamberPointSL3& Pp,
                          double p);

// Path from Q to Qp through the (2x, x) ray. Requires beta(Q) <= beta(Qp).
Certificate plan_path_sp2(const kak::ChamberPointSp2& Q, const kak::ChamberPointSp2& Qp,
                          double p, const ConstantsTable& table);

struct CheckReport {
  bool ok = true;
  int step_index = -1;  // -1 marks a certificate-level violation
  std::string message;
};

// Re-derives every step bound from its tag and endpoints, verifies side
// conditions, re-sums, re-checks the envelope. Violations land in the
// report; nothing throws.
CheckReport check_certificate(const Certificate& cert);

// Plans a path between chamber(g) and chamber(gp) (oriented as the lemmas
// require) and returns the certificate total. Throws on mixed group tags.
// Sp2 elements use `table` when given, else default_constants_sp2(p).
double pair_bound(const groups::GroupElement& g, const groups::GroupElement& gp, double p,
                  const ConstantsTable* table = nullptr);

Certificate pair_certificate(const groups::GroupElement& g, const groups::GroupElement& gp,
                             double p, const ConstantsTable* table = nullptr);

// Normative serialization: 17 significant digits, scientific notation.
std::string to_json(const Certificate& cert);
Certificate from_json(const std::string& text);

// Shared number formatting for all machine-readable output.
std::string format_sci17(double x);

}  // namespace weylcert::certify
