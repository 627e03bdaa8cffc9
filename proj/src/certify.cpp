#include "weylcert/certify.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "weylcert/sinhsys.hpp"
#include "weylcert/spectra.hpp"

namespace weylcert::certify {

namespace {

double eps_of(double p, double delta) {
  return spectra::epsilon(spectra::EpsilonParams{p}, delta);
}

void require_p(double p, const char* who) {
  if (!(p > 1.0)) throw std::invalid_argument(std::string(who) + ": requires p > 1");
}

bool in_lambda(const Point& pt, double tol) {
  if (pt.size() != 3) return false;
  return pt[0] >= pt[1] - tol && pt[1] >= pt[2] - tol &&
         std::abs(pt[0] + pt[1] + pt[2]) <= tol;
}

bool in_sp2_chamber(const Point& pt, double tol) {
  if (pt.size() != 2) return false;
  return pt[0] >= pt[1] - tol && pt[1] >= -tol;
}

Point pt3(double r, double s, double t) { return Point{r, s, t}; }
Point pt2(double beta, double gamma) { return Point{beta, gamma}; }

bool same_point(const Point& a, const Point& b, double tol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

// --- SL3 step bounds ---

double fix_gamma3_bound(double p, const Point& from, const Point& to) {
  const double t = from[2];
  return eps_of(p, std::exp(from[0] + 2.0 * t)) + eps_of(p, std::exp(to[0] + 2.0 * t));
}

double fix_gamma1_bound(double p, const Point& from, const Point& to) {
  const double r = from[0];
  return eps_of(p, std::exp(-2.0 * r - from[2])) + eps_of(p, std::exp(-2.0 * r - to[2]));
}

// --- Sp2 step machinery ---

struct RaySegmentParts {
  double beta, gamma;      // joint system solution for (s, t) = (hi, lo)
  double bound_eps1;       // c3Sp2 e^{-(beta-gamma)/(4p)}
  double bound_eps2;       // c4Sp2 e^{-gamma/(4p)}
};

RaySegmentParts ray_segment_parts(const ConstantsTable& tab, double hi, double lo) {
  const auto bg = sinhsys::solve_beta_gamma(hi, lo);
  RaySegmentParts parts;
  parts.beta = bg.beta;
  parts.gamma = bg.gamma;
  parts.bound_eps1 = tab.c3Sp2 * std::exp(-(bg.beta - bg.gamma) / (4.0 * tab.p));
  parts.bound_eps2 = tab.c4Sp2 * std::exp(-bg.gamma / (4.0 * tab.p));
  return parts;
}

PathStep make_ray_segment(const ConstantsTable& tab, double x, double y, bool ascending) {
  // segment between ray(x) and ray(y), x < y
  const auto parts = ray_segment_parts(tab, y, x);
  PathStep sub1{pt2(parts.beta, parts.gamma), pt2(2.0 * y, y), StepTag::IneqEps1Part,
                parts.bound_eps1, {}};
  PathStep sub2{pt2(parts.beta, parts.gamma), pt2(2.0 * x, x), StepTag::IneqEps2Part,
                parts.bound_eps2, {}};
  PathStep step;
  step.tag = StepTag::Sp2RaySegment;
  step.bound = tab.c5 * std::exp(-y / (8.0 * tab.p));
  step.from = ascending ? pt2(2.0 * x, x) : pt2(2.0 * y, y);
  step.to = ascending ? pt2(2.0 * y, y) : pt2(2.0 * x, x);
  step.subSteps = {sub1, sub2};
  return step;
}

const char* kTagNames[] = {"FixGamma3",    "FixGamma1",     "SmallT",
                           "Sp2ToRayViaT", "Sp2ToRayViaS",  "Sp2RaySegment",
                           "Sp2SmallRegion", "IneqEps1Part", "IneqEps2Part"};

}  // namespace

const char* step_tag_name(StepTag tag) { return kTagNames[static_cast<int>(tag)]; }

double Envelope::value() const { return constant * std::exp(coeff * anchor); }

ConstantsTable constants_sl3(double p) {
  require_p(p, "constants_sl3");
  ConstantsTable tab;
  tab.p = p;
  tab.cTilde = std::pow(2.0, 1.0 + 2.0 / p);
  tab.c1 = 2.0 * tab.cTilde * (2.0 / (1.0 - std::exp(-2.0 / p)) + 1.0 + std::exp(1.0 / p));
  tab.c2 = 2.0 * tab.cTilde * std::exp(1.0 / p);
  tab.c3 = tab.c1 + 2.0 * tab.c2;
  tab.c4 = 2.0 * std::exp(1.0 / p);
  tab.cSL3 = std::max(tab.c3, tab.c4);
  return tab;
}

ConstantsTable constants_sp2(double p, double c1_sp2, double c2_sp2) {
  if (!(c1_sp2 > 0.0 && c2_sp2 > 0.0)) {
    throw std::invalid_argument("constants_sp2: configured constants must be positive");
  }
  ConstantsTable tab = constants_sl3(p);
  tab.c1Sp2 = c1_sp2;
  tab.c2Sp2 = c2_sp2;
  // ineqeps1: C1 ((2 r1)^{1/p} + (2 r2)^{1/p}) with r_i <= 2 e^{(gamma-beta)/4}
  // merges with the small-gap branch 2 e^{2/p}.
  tab.c3Sp2 = std::max(2.0 * std::pow(4.0, 1.0 / p) * c1_sp2, 2.0 * std::exp(2.0 / p));
  // ineqeps2: C2 |th1-th2|^{1/(2p)} with |th1-th2| <= e^{-gamma/2}; small
  // branch 2 e^{1/(2p)}.
  tab.c4Sp2 = std::max(c2_sp2, 2.0 * std::exp(1.0 / (2.0 * p)));
  tab.c5 = std::exp(1.0 / (4.0 * p)) * (tab.c3Sp2 + tab.c4Sp2);
  tab.cGeom = tab.c5 / (1.0 - std::exp(-1.0 / (8.0 * p)));
  tab.c6 = std::max(tab.cGeom, 2.0 * std::exp(5.0 / (8.0 * p)));
  tab.c7 = 2.0 * std::max(tab.c3Sp2, tab.c4Sp2) + tab.c6;
  return tab;
}

ConstantsTable default_constants_sp2(double p) {
  static std::once_flag flag;
  static spectra::FittedConstants fitted;
  std::call_once(flag, [] { fitted = spectra::fit_u2_constants(64); });
  const double c1 = 2.0 * spectra::scale_constant_to_p(fitted.c1_l2, p);
  const double c2 = 2.0 * spectra::scale_constant_to_p(fitted.c2_l2, p);
  return constants_sp2(p, c1, c2);
}

Certificate plan_path_sl3(const kak::ChamberPointSL3& P, const kak::ChamberPointSL3& Pp,
                          double p) {
  require_p(p, "plan_path_sl3");
  const Point a = pt3(P.r, P.s, P.t);
  const Point b = pt3(Pp.r, Pp.s, Pp.t);
  if (!in_lambda(a, 1e-9) || !in_lambda(b, 1e-9)) {
    throw std::invalid_argument("plan_path_sl3: endpoints must lie in the chamber");
  }
  if (!(Pp.t <= P.t + 1e-12)) {
    throw std::invalid_argument("plan_path_sl3: requires t(Pp) <= t(P)");
  }

  Certificate cert;
  cert.group = "sl3";
  cert.p = p;
  cert.constants = constants_sl3(p);
  cert.envelope = Envelope{cert.constants.cSL3, 1.0 / p, P.t};
  const ConstantsTable& tab = cert.constants;

  auto push = [&](Point from, Point to, StepTag tag, double bound) {
    if (same_point(from, to, 0.0)) return;
    cert.steps.push_back(PathStep{std::move(from), std::move(to), tag, bound, {}});
  };

  if (!same_point(a, b, 0.0)) {
    if (P.t > -1.0) {
      push(a, b, StepTag::SmallT, tab.c4 * std::exp(P.t / p));
    } else {
      // normalize both endpoints onto the s = -1 wall
      auto normalize = [&](const kak::ChamberPointSL3& pt) -> std::pair<Point, double> {
        if (pt.s > -1.0) {
          Point w = pt3(1.0 - pt.t, -1.0, pt.t);
          return {w, pt.t};
        }
        if (pt.s < -1.0) {
          Point w = pt3(pt.r, -1.0, 1.0 - pt.r);
          return {w, 1.0 - pt.r};
        }
        return {pt3(pt.r, pt.s, pt.t), pt.t};
      };
      const auto [wallP, tauP] = normalize(P);
      const auto [wallPp, tauPp] = normalize(Pp);

      if (P.s > -1.0) {
        push(a, wallP, StepTag::FixGamma3, fix_gamma3_bound(p, a, wallP));
      } else if (P.s < -1.0) {
        push(a, wallP, StepTag::FixGamma1, fix_gamma1_bound(p, a, wallP));
      }

      // staircase between the wall points, descending parametrization
      const double tau_hi = std::max(tauP, tauPp);
      const double tau_lo = std::min(tauP, tauPp);
      std::vector<PathStep> stair;
      if (tau_hi - tau_lo > 0.0) {
        const double tau = tau_hi, taupr = tau_lo;
        const int n = static_cast<int>(std::floor((tau - taupr) / 2.0));
        for (int i = 0; i < n; ++i) {
          Point p0 = pt3(1.0 - tau + 2.0 * i, -1.0, tau - 2.0 * i);
          Point p1 = pt3(1.0 - tau + 2.0 * i, 1.0, tau - 2.0 * (i + 1));
          Point p2 = pt3(1.0 - tau + 2.0 * (i + 1), -1.0, tau - 2.0 * (i + 1));
          stair.push_back(PathStep{p0, p1, StepTag::FixGamma1, fix_gamma1_bound(p, p0, p1), {}});
          stair.push_back(PathStep{p1, p2, StepTag::FixGamma3, fix_gamma3_bound(p, p1, p2), {}});
        }
        Point q0 = pt3(1.0 - tau + 2.0 * n, -1.0, tau - 2.0 * n);
        Point q1 = pt3(1.0 - tau + 2.0 * n, -1.0 + tau - 2.0 * n - taupr, taupr);
        Point q2 = pt3(1.0 - taupr, -1.0, taupr);
        if (!same_point(q0, q1, 0.0))
          stair.push_back(PathStep{q0, q1, StepTag::FixGamma1, fix_gamma1_bound(p, q0, q1), {}});
        if (!same_point(q1, q2, 0.0))
          stair.push_back(PathStep{q1, q2, StepTag::FixGamma3, fix_gamma3_bound(p, q1, q2), {}});
        if (tauP < tauPp) {  // path runs ascending: reverse the staircase
          std::reverse(stair.begin(), stair.end());
          for (auto& st : stair) std::swap(st.from, st.to);
        }
      }
      for (auto& st : stair) cert.steps.push_back(std::move(st));

      if (Pp.s > -1.0) {
        push(wallPp, b, StepTag::FixGamma3, fix_gamma3_bound(p, wallPp, b));
      } else if (Pp.s < -1.0) {
        push(wallPp, b, StepTag::FixGamma1, fix_gamma1_bound(p, wallPp, b));
      }
    }
  }

  cert.total = 0.0;
  for (const auto& st : cert.steps) cert.total += st.bound;
  if (cert.total > cert.envelope.value() * (1.0 + 1e-12)) {
    throw std::runtime_error("plan_path_sl3: planner exceeded its envelope");
  }
  return cert;
}

Certificate plan_path_sp2(const kak::ChamberPointSp2& Q, const kak::ChamberPointSp2& Qp,
                          double p, const ConstantsTable& table) {
  require_p(p, "plan_path_sp2");
  if (table.p != p || !(table.c7 > 0.0)) {
    throw std::invalid_argument("plan_path_sp2: constants table does not match p");
  }
  const Point a = pt2(Q.beta, Q.gamma);
  const Point b = pt2(Qp.beta, Qp.gamma);
  if (!in_sp2_chamber(a, 1e-9) || !in_sp2_chamber(b, 1e-9)) {
    throw std::invalid_argument("plan_path_sp2: endpoints must lie in the chamber");
  }
  if (!(Q.beta <= Qp.beta + 1e-12)) {
    throw std::invalid_argument("plan_path_sp2: requires beta(Q) <= beta(Qp)");
  }

  Certificate cert;
  cert.group = "sp2";
  cert.p = p;
  cert.constants = table;
  cert.envelope = Envelope{table.c7, -1.0 / (32.0 * p), Q.beta};

  if (!same_point(a, b, 0.0)) {
    // reduce each endpoint to its ray point
    auto reduce = [&](const kak::ChamberPointSp2& q) -> std::pair<double, PathStep> {
      if (q.beta >= 2.0 * q.gamma) {
        const double s = sinhsys::solve_s(q.beta, q.gamma);
        PathStep st{pt2(q.beta, q.gamma), pt2(2.0 * s, s), StepTag::Sp2ToRayViaT,
                    table.c3Sp2 * std::exp(-q.beta / (8.0 * p)), {}};
        return {s, st};
      }
      const double t = sinhsys::solve_t(q.beta, q.gamma);
      PathStep st{pt2(q.beta, q.gamma), pt2(2.0 * t, t), StepTag::Sp2ToRayViaS,
                  table.c4Sp2 * std::exp(-q.beta / (8.0 * p)), {}};
      return {t, st};
    };
    auto [x1, red1] = reduce(Q);
    auto [x2, red2] = reduce(Qp);

    if (!same_point(red1.from, red1.to, 0.0)) cert.steps.push_back(red1);

    const double lo = std::min(x1, x2), hi = std::max(x1, x2);
    if (hi - lo > 0.0) {
      if (lo >= 5.0) {
        std::vector<double> cuts;
        for (double x = lo; x < hi; x += 1.0) cuts.push_back(x);
        cuts.push_back(hi);
        std::vector<PathStep> segs;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
          if (cuts[i + 1] - cuts[i] <= 0.0) continue;
          segs.push_back(make_ray_segment(table, cuts[i], cuts[i + 1], /*ascending=*/true));
        }
        if (x1 > x2) {  // path runs downward along the ray
          std::reverse(segs.begin(), segs.end());
          for (auto& st : segs) std::swap(st.from, st.to);
        }
        for (auto& st : segs) cert.steps.push_back(std::move(st));
      } else {
        cert.steps.push_back(PathStep{pt2(2.0 * x1, x1), pt2(2.0 * x2, x2),
                                      StepTag::Sp2SmallRegion,
                                      table.c6 * std::exp(-lo / (8.0 * p)),
                                      {}});
      }
    }

    if (!same_point(red2.from, red2.to, 0.0)) {
      std::swap(red2.from, red2.to);  // path enters Qp through its ray point
      cert.steps.push_back(red2);
    }
  }

  cert.total = 0.0;
  for (const auto& st : cert.steps) cert.total += st.bound;
  if (cert.total > cert.envelope.value() * (1.0 + 1e-12)) {
    throw std::runtime_error("plan_path_sp2: planner exceeded its envelope");
  }
  return cert;
}

namespace {

struct Checker {
  const Certificate& cert;
  CheckReport report;

  void fail(int index, const std::string& msg) {
    if (!report.ok) return;  // keep the first violation
    report.ok = false;
    report.step_index = index;
    report.message = msg;
  }

  bool close(double x, double y, double tol) const {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
  }

  void check_constants() {
    const ConstantsTable& t = cert.constants;
    if (!(cert.p > 1.0) || t.p != cert.p) {
      fail(-1, "constants table p mismatch");
      return;
    }
    const ConstantsTable ref = constants_sl3(cert.p);
    if (!close(t.cTilde, ref.cTilde, 1e-12) || !close(t.c1, ref.c1, 1e-12) ||
        !close(t.c2, ref.c2, 1e-12) || !close(t.c3, ref.c3, 1e-12) ||
        !close(t.c4, ref.c4, 1e-12) || !close(t.cSL3, ref.cSL3, 1e-12)) {
      fail(-1, "SL3 constant chain does not match its formulas");
      return;
    }
    if (cert.group == "sp2") {
      if (!(t.c1Sp2 > 0.0 && t.c2Sp2 > 0.0)) {
        fail(-1, "Sp2 configured constants must be positive");
        return;
      }
      const ConstantsTable ref2 = constants_sp2(cert.p, t.c1Sp2, t.c2Sp2);
      if (!close(t.c3Sp2, ref2.c3Sp2, 1e-12) || !close(t.c4Sp2, ref2.c4Sp2, 1e-12) ||
          !close(t.c5, ref2.c5, 1e-12) || !close(t.c6, ref2.c6, 1e-12) ||
          !close(t.c7, ref2.c7, 1e-12) || !close(t.cGeom, ref2.cGeom, 1e-12)) {
        fail(-1, "Sp2 constant chain does not match its formulas");
      }
    }
  }

  void check_sl3_step(int i, const PathStep& st) {
    if (st.from.size() != 3 || st.to.size() != 3) {
      fail(i, "SL3 step endpoints must have 3 coordinates");
      return;
    }
    if (!in_lambda(st.from, 1e-9) || !in_lambda(st.to, 1e-9)) {
      fail(i, "step endpoint leaves the chamber");
      return;
    }
    const double p = cert.p;
    switch (st.tag) {
      case StepTag::FixGamma3: {
        if (std::abs(st.from[2] - st.to[2]) > 1e-12) {
          fail(i, "FixGamma3 requires equal t coordinates");
          return;
        }
        if (!close(st.bound, fix_gamma3_bound(p, st.from, st.to), 1e-12)) {
          fail(i, "FixGamma3 bound does not match its formula");
        }
        break;
      }
      case StepTag::FixGamma1: {
        if (std::abs(st.from[0] - st.to[0]) > 1e-12) {
          fail(i, "FixGamma1 requires equal r coordinates");
          return;
        }
        if (!close(st.bound, fix_gamma1_bound(p, st.from, st.to), 1e-12)) {
          fail(i, "FixGamma1 bound does not match its formula");
        }
        break;
      }
      case StepTag::SmallT: {
        if (!(st.from[2] > -1.0 - 1e-12)) {
          fail(i, "SmallT requires t > -1");
          return;
        }
        if (!(st.to[2] <= st.from[2] + 1e-12)) {
          fail(i, "SmallT requires descending t");
          return;
        }
        const double want = cert.constants.c4 * std::exp(st.from[2] / p);
        if (!close(st.bound, want, 1e-12) || want < 2.0 * (1.0 - 1e-12)) {
          fail(i, "SmallT bound does not match its formula");
        }
        break;
      }
      default:
        fail(i, "Sp2 tag inside an SL3 certificate");
    }
  }

  void check_sp2_step(int i, const PathStep& st) {
    if (st.from.size() != 2 || st.to.size() != 2) {
      fail(i, "Sp2 step endpoints must have 2 coordinates");
      return;
    }
    if (!in_sp2_chamber(st.from, 1e-9) || !in_sp2_chamber(st.to, 1e-9)) {
      fail(i, "step endpoint leaves the chamber");
      return;
    }
    const double p = cert.p;
    const ConstantsTable& tab = cert.constants;
    auto is_ray = [](const Point& q) { return std::abs(q[0] - 2.0 * q[1]) <= 1e-9; };
    switch (st.tag) {
      case StepTag::Sp2ToRayViaT: {
        const double beta = st.from[0], gamma = st.from[1];
        if (!(beta >= 2.0 * gamma - 1e-9)) {
          fail(i, "Sp2ToRayViaT requires beta >= 2 gamma");
          return;
        }
        const double s = sinhsys::solve_s(beta, gamma);
        if (!same_point(st.to, pt2(2.0 * s, s), 1e-8)) {
          fail(i, "Sp2ToRayViaT target is not the sinh-system ray point");
          return;
        }
        if (!close(st.bound, tab.c3Sp2 * std::exp(-beta / (8.0 * p)), 1e-12)) {
          fail(i, "Sp2ToRayViaT bound does not match its formula");
        }
        break;
      }
      case StepTag::Sp2ToRayViaS: {
        const double beta = st.from[0], gamma = st.from[1];
        if (!(beta <= 2.0 * gamma + 1e-9)) {
          fail(i, "Sp2ToRayViaS requires beta < 2 gamma");
          return;
        }
        const double t = sinhsys::solve_t(beta, gamma);
        if (!same_point(st.to, pt2(2.0 * t, t), 1e-8)) {
          fail(i, "Sp2ToRayViaS target is not the sinh-system ray point");
          return;
        }
        if (!close(st.bound, tab.c4Sp2 * std::exp(-beta / (8.0 * p)), 1e-12)) {
          fail(i, "Sp2ToRayViaS bound does not match its formula");
        }
        break;
      }
      case StepTag::Sp2RaySegment: {
        if (!is_ray(st.from) || !is_ray(st.to)) {
          fail(i, "Sp2RaySegment endpoints must be ray points");
          return;
        }
        const double x = std::min(st.from[1], st.to[1]);
        const double y = std::max(st.from[1], st.to[1]);
        if (!(x >= 2.0 - 1e-9)) {
          fail(i, "Sp2RaySegment requires anchor >= 2");
          return;
        }
        if (!(y <= 1.2 * x + 1e-9)) {
          fail(i, "Sp2RaySegment requires s <= 6t/5");
          return;
        }
        if (!close(st.bound, tab.c5 * std::exp(-y / (8.0 * p)), 1e-12)) {
          fail(i, "Sp2RaySegment bound does not match its formula");
          return;
        }
        if (st.subSteps.size() != 2) {
          fail(i, "Sp2RaySegment must carry its two wall sub-steps");
          return;
        }
        const auto parts = ray_segment_parts(tab, y, x);
        const PathStep& s1 = st.subSteps[0];
        const PathStep& s2 = st.subSteps[1];
        if (s1.tag != StepTag::IneqEps1Part || s2.tag != StepTag::IneqEps2Part) {
          fail(i, "Sp2RaySegment sub-steps carry the wrong tags");
          return;
        }
        if (!same_point(s1.from, pt2(parts.beta, parts.gamma), 1e-8) ||
            !same_point(s2.from, s1.from, 1e-12)) {
          fail(i, "sub-steps do not start at the joint sinh-system solution");
          return;
        }
        if (!same_point(s1.to, pt2(2.0 * y, y), 1e-9) ||
            !same_point(s2.to, pt2(2.0 * x, x), 1e-9)) {
          fail(i, "sub-step targets are not the segment endpoints");
          return;
        }
        if (!close(s1.bound, parts.bound_eps1, 1e-10) ||
            !close(s2.bound, parts.bound_eps2, 1e-10)) {
          fail(i, "sub-step bounds do not match the wall lemma formulas");
          return;
        }
        if (!(std::min(parts.gamma, parts.beta - parts.gamma) >= y / 2.0 - 1.0 - 1e-9)) {
          fail(i, "min(gamma, beta-gamma) >= s/2 - 1 fails for the segment");
          return;
        }
        if (!(s1.bound + s2.bound <= st.bound * (1.0 + 1e-12))) {
          fail(i, "sub-step bounds exceed the segment bound");
        }
        break;
      }
      case StepTag::Sp2SmallRegion: {
        if (!is_ray(st.from) || !is_ray(st.to)) {
          fail(i, "Sp2SmallRegion endpoints must be ray points");
          return;
        }
        const double lo = std::min(st.from[1], st.to[1]);
        if (!(lo <= 5.0 + 1e-9)) {
          fail(i, "Sp2SmallRegion requires anchor <= 5");
          return;
        }
        const double want = tab.c6 * std::exp(-lo / (8.0 * p));
        if (!close(st.bound, want, 1e-12) || want < 2.0 * (1.0 - 1e-12)) {
          fail(i, "Sp2SmallRegion bound does not match its formula");
        }
        break;
      }
      default:
        fail(i, "SL3 tag inside an Sp2 certificate");
    }
  }

  void run() {
    if (cert.group != "sl3" && cert.group != "sp2") {
      fail(-1, "unknown group tag");
      return;
    }
    check_constants();
    if (!report.ok) return;

    for (size_t i = 0; i + 1 < cert.steps.size(); ++i) {
      if (!same_point(cert.steps[i].to, cert.steps[i + 1].from, 1e-12)) {
        fail(static_cast<int>(i + 1), "step does not start where the previous one ended");
        return;
      }
    }
    for (size_t i = 0; i < cert.steps.size(); ++i) {
      if (cert.group == "sl3")
        check_sl3_step(static_cast<int>(i), cert.steps[i]);
      else
        check_sp2_step(static_cast<int>(i), cert.steps[i]);
      if (!report.ok) return;
    }

    double total = 0.0;
    for (const auto& st : cert.steps) total += st.bound;
    if (!(std::abs(total - cert.total) <= 1e-10 * std::max(1.0, total))) {
      fail(-1, "total does not equal the sum of step bounds");
      return;
    }

    const double coeff_want = (cert.group == "sl3") ? 1.0 / cert.p : -1.0 / (32.0 * cert.p);
    const double const_want = (cert.group == "sl3") ? cert.constants.cSL3 : cert.constants.c7;
    if (!close(cert.envelope.coeff, coeff_want, 1e-12) ||
        !close(cert.envelope.constant, const_want, 1e-12)) {
      fail(-1, "envelope does not use the ledger constant and exponent");
      return;
    }
    if (!cert.steps.empty()) {
      const Point& start = cert.steps.front().from;
      const double anchor_want = (cert.group == "sl3") ? start[2] : start[0];
      if (std::abs(cert.envelope.anchor - anchor_want) > 1e-12) {
        fail(-1, "envelope anchor does not match the path start");
        return;
      }
    }
    if (!(cert.total <= cert.envelope.value() * (1.0 + 1e-10))) {
      fail(-1, "total exceeds the exponential envelope");
    }
  }
};

}  // namespace

CheckReport check_certificate(const Certificate& cert) {
  Checker checker{cert, {}};
  checker.run();
  return checker.report;
}

Certificate pair_certificate(const groups::GroupElement& g, const groups::GroupElement& gp,
                             double p, const ConstantsTable* table) {
  if (g.tag != gp.tag) {
    throw std::invalid_argument("pair_certificate: mixed group tags");
  }
  if (g.tag == groups::GroupTag::SL3) {
    const auto cg = kak::gamma_sl3(g);
    const auto cgp = kak::gamma_sl3(gp);
    return (cgp.t <= cg.t) ? plan_path_sl3(cg, cgp, p) : plan_path_sl3(cgp, cg, p);
  }
  if (g.tag == groups::GroupTag::Sp2) {
    const auto cg = kak::beta_gamma_sp2(g);
    const auto cgp = kak::beta_gamma_sp2(gp);
    const ConstantsTable tab = table ? *table : default_constants_sp2(p);
    return (cg.beta <= cgp.beta) ? plan_path_sp2(cg, cgp, p, tab)
                                 : plan_path_sp2(cgp, cg, p, tab);
  }
  throw std::invalid_argument("pair_certificate: compact-group elements have no decay path");
}

double pair_bound(const groups::GroupElement& g, const groups::GroupElement& gp, double p,
                  const ConstantsTable* table) {
  return pair_certificate(g, gp, p, table).total;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string format_sci17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

namespace {

void write_point(std::ostringstream& os, const Point& pt) {
  os << '[';
  for (size_t i = 0; i < pt.size(); ++i) {
    if (i) os << ',';
    os << format_sci17(pt[i]);
  }
  os << ']';
}

void write_step(std::ostringstream& os, const PathStep& st) {
  os << "{\"from\":";
  write_point(os, st.from);
  os << ",\"to\":";
  write_point(os, st.to);
  os << ",\"tag\":\"" << step_tag_name(st.tag) << "\",\"bound\":" << format_sci17(st.bound);
  if (!st.subSteps.empty()) {
    os << ",\"subSteps\":[";
    for (size_t i = 0; i < st.subSteps.size(); ++i) {
      if (i) os << ',';
      write_step(os, st.subSteps[i]);
    }
    os << ']';
  }
  os << '}';
}

StepTag tag_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(StepTag::IneqEps2Part); ++i) {
    if (name == kTagNames[i]) return static_cast<StepTag>(i);
  }
  throw std::invalid_argument("unknown step tag: " + name);
}

PathStep step_from_json(const nlohmann::json& j) {
  PathStep st;
  st.from = j.at("from").get<std::vector<double>>();
  st.to = j.at("to").get<std::vector<double>>();
  st.tag = tag_from_name(j.at("tag").get<std::string>());
  st.bound = j.at("bound").get<double>();
  if (j.contains("subSteps")) {
    for (const auto& sub : j.at("subSteps")) st.subSteps.push_back(step_from_json(sub));
  }
  return st;
}

}  // namespace

std::string to_json(const Certificate& cert) {
  std::ostringstream os;
  const ConstantsTable& t = cert.constants;
  os << "{\"group\":\"" << cert.group << "\",\"p\":" << format_sci17(cert.p);
  os << ",\"constants\":{";
  os << "\"p\":" << format_sci17(t.p);
  os << ",\"cTilde\":" << format_sci17(t.cTilde) << ",\"c1\":" << format_sci17(t.c1)
     << ",\"c2\":" << format_sci17(t.c2) << ",\"c3\":" << format_sci17(t.c3)
     << ",\"c4\":" << format_sci17(t.c4) << ",\"cSL3\":" << format_sci17(t.cSL3);
  os << ",\"c1Sp2\":" << format_sci17(t.c1Sp2) << ",\"c2Sp2\":" << format_sci17(t.c2Sp2)
     << ",\"c3Sp2\":" << format_sci17(t.c3Sp2) << ",\"c4Sp2\":" << format_sci17(t.c4Sp2)
     << ",\"c5\":" << format_sci17(t.c5) << ",\"c6\":" << format_sci17(t.c6)
     << ",\"c7\":" << format_sci17(t.c7) << ",\"cGeom\":" << format_sci17(t.cGeom);
  os << "},\"steps\":[";
  for (size_t i = 0; i < cert.steps.size(); ++i) {
    if (i) os << ',';
    write_step(os, cert.steps[i]);
  }
  os << "],\"total\":" << format_sci17(cert.total);
  os << ",\"envelope\":{\"constant\":" << format_sci17(cert.envelope.constant)
     << ",\"coeff\":" << format_sci17(cert.envelope.coeff)
     << ",\"anchor\":" << format_sci17(cert.envelope.anchor) << "}}";
  return os.str();
}

Certificate from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Certificate cert;
  cert.group = j.at("group").get<std::string>();
  cert.p = j.at("p").get<double>();
  const auto& jc = j.at("constants");
  ConstantsTable& t = cert.constants;
  t.p = jc.at("p").get<double>();
  t.cTilde = jc.at("cTilde").get<double>();
  t.c1 = jc.at("c1").get<double>();
  t.c2 = jc.at("c2").get<double>();
  t.c3 = jc.at("c3").get<double>();
  t.c4 = jc.at("c4").get<double>();
  t.cSL3 = jc.at("cSL3").get<double>();
  t.c1Sp2 = jc.at("c1Sp2").get<double>();
  t.c2Sp2 = jc.at("c2Sp2").get<double>();
  t.c3Sp2 = jc.at("c3Sp2").get<double>();
  t.c4Sp2 = jc.at("c4Sp2").get<double>();
  t.c5 = jc.at("c5").get<double>();
  t.c6 = jc.at("c6").get<double>();
  t.c7 = jc.at("c7").get<double>();
  t.cGeom = jc.at("cGeom").get<double>();
  for (const auto& js : j.at("steps")) cert.steps.push_back(step_from_json(js));
  cert.total = j.at("total").get<double>();
  const auto& je = j.at("envelope");
  cert.envelope.constant = je.at("constant").get<double>();
  cert.envelope.coeff = je.at("coeff").get<double>();
  cert.envelope.anchor = je.at("anchor").get<double>();
  return cert;
}

}  // namespace weylcert::certify
