#include "weylcert/spectra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weylcert::spectra {

namespace {

constexpr double kPi = std::numbers::pi;

double lchoose(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double choose(int n, int k) { return std::exp(lchoose(n, k)); }

// d^l_{mu nu}(beta) for l = two_lmax/2 by upward recurrence in l.
// Assumes the caller already routed to nu >= |mu| via the d-symmetries.
double wigner_element_up(int two_mu, int two_nu, double beta, int two_lmax) {
  const double mu = 0.5 * two_mu, nu = 0.5 * two_nu;
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  const double x = std::cos(beta);

  // seed at l = nu: d^nu_{mu nu} = sqrt(C(2nu, nu-mu)) c^{nu+mu} s^{nu-mu}
  double seed;
  {
    const int kp = (two_nu + two_mu) / 2, km = (two_nu - two_mu) / 2;
    const double mag = std::exp(0.5 * lchoose(two_nu, km) +
                                kp * std::log(std::abs(c) > 0 ? std::abs(c) : 1.0) +
                                km * std::log(std::abs(s) > 0 ? std::abs(s) : 1.0));
    double sign = 1.0;
    if (c < 0.0 && (kp % 2)) sign = -sign;
    if (s < 0.0 && (km % 2)) sign = -sign;
    seed = ((c == 0.0 && kp > 0) || (s == 0.0 && km > 0)) ? 0.0 : sign * mag;
  }
  if (two_lmax == two_nu) return seed;

  double d_prev = 0.0, d_cur = seed;
  for (int two_l = two_nu; two_l < two_lmax; two_l += 2) {
    double d_next;
    if (two_l == 0) {
      d_next = x * d_cur;
    } else {
      const double l = 0.5 * two_l;
      const double a1 = (2.0 * l + 1.0) * (l * (l + 1.0) * x - mu * nu);
      const double a2 = (l + 1.0) * std::sqrt(std::max(l * l - mu * mu, 0.0)) *
                        std::sqrt(std::max(l * l - nu * nu, 0.0));
      const double a3 = l * std::sqrt((l + 1.0) * (l + 1.0) - mu * mu) *
                        std::sqrt((l + 1.0) * (l + 1.0) - nu * nu);
      d_next = (a1 * d_cur - a2 * d_prev) / a3;
    }
    d_prev = d_cur;
    d_cur = d_next;
  }
  return d_cur;
}

double wigner_element(int two_mu, int two_nu, double beta, int two_l) {
  // route into nu >= |mu| using d_{mu nu} = (-1)^{mu-nu} d_{nu mu} = (-1)^{mu-nu} d_{-mu,-nu}
  double sign = 1.0;
  int tm = two_mu, tn = two_nu;
  if (std::abs(tm) > std::abs(tn)) {
    std::swap(tm, tn);
    if (((two_mu - two_nu) / 2) % 2) sign = -sign;
  }
  if (tn < 0) {
    if (((tm - tn) / 2) % 2) sign = -sign;
    tm = -tm;
    tn = -tn;
  }
  return sign * wigner_element_up(tm, tn, beta, two_l);
}

// Weights of the SO(2)-invariant unit vector of Sym^m (even m) against the
// torus weights: tau_m(theta) = sum_i w_i cos((4i - m) theta).
std::vector<double> t_theta_weights(int m) {
  const int h = m / 2;
  std::vector<double> w(h + 1);
  double total = 0.0;
  for (int i = 0; i <= h; ++i) {
    w[i] = std::exp(2.0 * lchoose(h, i) - lchoose(m, 2 * i));
    total += w[i];
  }
  for (double& wi : w) wi /= total;
  return w;
}

double t_theta_scalar(int m, double theta) {
  const auto w = t_theta_weights(m);
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    acc += w[i] * std::cos((4.0 * i - m) * theta);
  }
  return acc;
}

// Diagonal of Sym^m(u_theta): e^{i theta (m-2j)} d^{m/2}_{mu mu}(pi/2),
// mu = (m-2j)/2, from the u_theta = Delta_{theta/2} R_{pi/2} Delta_{theta/2}
// factorization.
Eigen::VectorXcd s_theta_diag(int m, double theta) {
  Eigen::VectorXcd diag(m + 1);
  for (int j = 0; j <= m; ++j) {
    const int two_mu = m - 2 * j;
    const double r = wigner_element(two_mu, two_mu, kPi / 2.0, m);
    diag(j) = std::polar(1.0, theta * (m - 2 * j)) * r;
  }
  return diag;
}

void require_delta(double delta, const char* who) {
  if (!(std::abs(delta) <= 1.0)) {
    throw std::domain_error(std::string(who) + ": |delta| must be <= 1");
  }
}

}  // namespace

double legendre(int n, double x) {
  if (n < 0) throw std::domain_error("legendre: n must be >= 0");
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int k = 1; k < n; ++k) {
    const double pn = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = pn;
  }
  return p;
}

std::vector<double> theta_delta_eigs(double delta, int n_max) {
  require_delta(delta, "theta_delta_eigs");
  std::vector<double> eig(n_max + 1);
  eig[0] = 1.0;
  if (n_max >= 1) eig[1] = delta;
  for (int k = 1; k + 1 <= n_max; ++k) {
    eig[k + 1] = ((2.0 * k + 1.0) * delta * eig[k] - k * eig[k - 1]) / (k + 1.0);
  }
  return eig;
}

double theta_gap_norm(double delta, int n_max) {
  require_delta(delta, "theta_gap_norm");
  const auto at_delta = theta_delta_eigs(delta, n_max);
  const auto at_zero = theta_delta_eigs(0.0, n_max);
  double sup = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    sup = std::max(sup, std::abs(at_delta[n] - at_zero[n]));
  }
  return sup;
}

double epsilon(const EpsilonParams& params, double delta) {
  if (!(params.p > 1.0)) throw std::domain_error("epsilon: p must be > 1");
  require_delta(delta, "epsilon");
  return std::pow(2.0, 1.0 + 2.0 / params.p) * std::pow(std::abs(delta), 1.0 / params.p);
}

double interp_bound(double norm2, double normq, double p, double q) {
  if (!(p >= 2.0 && q >= p)) {
    throw std::invalid_argument("interp_bound: requires 2 <= p <= q");
  }
  if (q == 2.0) return norm2;  // forces p = 2
  const double theta = (0.5 - 1.0 / p) / (0.5 - 1.0 / q);
  return std::pow(norm2, 1.0 - theta) * std::pow(normq, theta);
}

Eigen::MatrixXd wigner_d(int two_l, double angle) {
  if (two_l < 0) throw std::domain_error("wigner_d: l must be >= 0");
  const int n = two_l + 1;
  Eigen::MatrixXd d(n, n);
  for (int j = 0; j < n; ++j) {
    for (int jp = 0; jp < n; ++jp) {
      d(j, jp) = wigner_element(two_l - 2 * j, two_l - 2 * jp, angle, two_l);
    }
  }
  return d;
}

Eigen::MatrixXcd sym_power_u2(const Eigen::Matrix2cd& g, int m) {
  if (m < 0) throw std::domain_error("sym_power_u2: m must be >= 0");
  using C = std::complex<double>;
  const C a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  Eigen::MatrixXcd out(m + 1, m + 1);
  for (int j = 0; j <= m; ++j) {
    // coefficients of (a x + c y)^{m-j} (b x + d y)^j against x^{m-k} y^k
    std::vector<C> p1(m - j + 1), p2(j + 1), conv(m + 1, C(0.0, 0.0));
    for (int i = 0; i <= m - j; ++i) p1[i] = choose(m - j, i) * std::pow(a, m - j - i) * std::pow(c, i);
    for (int l = 0; l <= j; ++l) p2[l] = choose(j, l) * std::pow(b, j - l) * std::pow(d, l);
    for (int i = 0; i <= m - j; ++i)
      for (int l = 0; l <= j; ++l) conv[i + l] += p1[i] * p2[l];
    for (int k = 0; k <= m; ++k) {
      out(k, j) = conv[k] * std::exp(0.5 * (lchoose(m, j) - lchoose(m, k)));
    }
  }
  return out;
}

double SpectralBlock::spectral_norm() const {
  if (block.rows() == 0 || block.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
  return svd.singularValues()(0);
}

SpectralBlock t_theta_block(const U2Irrep& irrep, double theta) {
  const int m = irrep.sym_degree;
  if (m < 0) throw std::domain_error("t_theta_block: m must be >= 0");
  if (m % 2 == 1) {
    return SpectralBlock{irrep, Eigen::MatrixXcd(0, 0)};
  }
  Eigen::MatrixXcd b(1, 1);
  b(0, 0) = t_theta_scalar(m, theta);
  return SpectralBlock{irrep, b};
}

SpectralBlock s_theta_block(const U2Irrep& irrep, double theta) {
  const int m = irrep.sym_degree;
  if (m < 0) throw std::domain_error("s_theta_block: m must be >= 0");
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(m + 1, m + 1);
  b.diagonal() = s_theta_diag(m, theta);
  return SpectralBlock{irrep, b};
}

SpectralOperatorKind theta_delta_op(double delta) {
  require_delta(delta, "theta_delta_op");
  return SpectralOperatorKind{OperatorFamily::ThetaDelta, delta, std::nullopt};
}
SpectralOperatorKind t_theta_op(double theta) {
  return SpectralOperatorKind{OperatorFamily::TTheta, theta, std::nullopt};
}
SpectralOperatorKind s_theta_op(double theta) {
  return SpectralOperatorKind{OperatorFamily::STheta, theta, std::nullopt};
}
SpectralOperatorKind difference(SpectralOperatorKind kind, double minus_param) {
  if (kind.family == OperatorFamily::ThetaDelta) require_delta(minus_param, "difference");
  kind.minus_param = minus_param;
  return kind;
}

NormEstimate op_norm_l2(const SpectralOperatorKind& kind, int cutoff) {
  if (cutoff < 0) throw std::domain_error("op_norm_l2: cutoff must be >= 0");
  double best = 0.0;
  int arg = 0;
  switch (kind.family) {
    case OperatorFamily::ThetaDelta: {
      const auto e1 = theta_delta_eigs(kind.param, cutoff);
      std::vector<double> e2(cutoff + 1, 0.0);
      if (kind.minus_param) e2 = theta_delta_eigs(*kind.minus_param, cutoff);
      for (int n = 0; n <= cutoff; ++n) {
        const double v = std::abs(e1[n] - (kind.minus_param ? e2[n] : 0.0));
        if (v > best) {
          best = v;
          arg = n;
        }
      }
      break;
    }
    case OperatorFamily::TTheta: {
      for (int m = 0; m <= cutoff; m += 2) {
        double v = t_theta_scalar(m, kind.param);
        if (kind.minus_param) v -= t_theta_scalar(m, *kind.minus_param);
        if (std::abs(v) > best) {
          best = std::abs(v);
          arg = m;
        }
      }
      break;
    }
    case OperatorFamily::STheta: {
      // The det^k twist leaves these blocks unchanged (det u_theta = 1),
      // so the sup over (k, m) reduces to a sup over m.
      for (int m = 0; m <= cutoff; ++m) {
        Eigen::VectorXcd d1 = s_theta_diag(m, kind.param);
        if (kind.minus_param) d1 -= s_theta_diag(m, *kind.minus_param);
        const double v = d1.cwiseAbs().maxCoeff();
        if (v > best) {
          best = v;
          arg = m;
        }
      }
      break;
    }
  }
  return NormEstimate{best, cutoff, arg};
}

double fit_exponent(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 8) throw std::invalid_argument("fit_exponent: need >= 8 grid points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [gap, norm] : pts) {
    if (!(gap > 0.0 && norm > 0.0)) {
      throw std::invalid_argument("fit_exponent: gaps and norms must be positive");
    }
    const double x = std::log(gap), y = std::log(norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * n * sxx) {
    throw std::invalid_argument("fit_exponent: degenerate grid");
  }
  return (n * sxy - sx * sy) / denom;
}

std::vector<std::pair<double, double>> t_theta_gap_sweep(const std::vector<double>& gaps,
                                                         int cutoff) {
  std::vector<std::pair<double, double>> out;
  out.reserve(gaps.size());
  for (double h : gaps) {
    const auto kind = difference(t_theta_op(kPi / 4.0 + h), kPi / 4.0);
    out.emplace_back(h, op_norm_l2(kind, cutoff).value);
  }
  return out;
}

std::vector<std::pair<double, double>> s_theta_gap_sweep(const std::vector<double>& gaps,
                                                         int cutoff, double base_theta) {
  std::vector<std::pair<double, double>> out;
  out.reserve(gaps.size());
  for (double h : gaps) {
    const auto kind = difference(s_theta_op(base_theta + h), base_theta);
    out.emplace_back(h, op_norm_l2(kind, cutoff).value);
  }
  return out;
}

FittedConstants fit_u2_constants(int cutoff) {
  // Grids live where the cutoff-64 norms are already cutoff-converged;
  // T stays inside the lemma's window [pi/6, pi/3].
  double c1 = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double h = 0.05 * std::pow((kPi / 12.0) / 0.05, i / 11.0);
    for (double sgn : {-1.0, 1.0}) {
      const auto kind = difference(t_theta_op(kPi / 4.0 + sgn * h), kPi / 4.0);
      c1 = std::max(c1, op_norm_l2(kind, cutoff).value / std::sqrt(h));
    }
  }
  double c2 = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double h = 0.05 * std::pow(0.8 / 0.05, i / 11.0);
    const auto kind = difference(s_theta_op(0.9 + h), 0.9);
    c2 = std::max(c2, op_norm_l2(kind, cutoff).value / std::pow(h, 0.25));
  }
  return FittedConstants{c1, c2, cutoff};
}

double scale_constant_to_p(double c_l2, double p) {
  if (!(p >= 2.0)) throw std::domain_error("scale_constant_to_p: p must be >= 2");
  return std::pow(2.0, 1.0 - 2.0 / p) * std::pow(c_l2, 2.0 / p);
}

// ---------------------------------------------------------------------------
// Sphere quadrature
// ---------------------------------------------------------------------------

namespace {

struct GaussLegendre {
  std::vector<double> nodes, weights;
};

GaussLegendre gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-based initial guess
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double p = legendre(n, x);
      const double pm = legendre(n - 1, x);
      const double dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double pm = legendre(n - 1, x);
    const double dp = n * (x * legendre(n, x) - pm) / (x * x - 1.0);
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

// Orthonormal complex spherical harmonics, Condon-Shortley phase.
// Fills values[l*l + l + m] for all l <= lmax, |m| <= l.
void sph_harm_all(int lmax, double ct, double phi, std::vector<std::complex<double>>& values) {
  values.assign((lmax + 1) * (lmax + 1), {0.0, 0.0});
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  // normalized associated Legendre via the standard mm / (m+1)m / upward chain
  std::vector<double> pbar((lmax + 1) * (lmax + 2) / 2);  // index l(l+1)/2 + m
  auto idx = [](int l, int m) { return l * (l + 1) / 2 + m; };
  pbar[idx(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= lmax; ++m) {
    pbar[idx(m, m)] =
        -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * pbar[idx(m - 1, m - 1)];
  }
  for (int m = 0; m < lmax; ++m) {
    pbar[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * pbar[idx(m, m)];
  }
  for (int m = 0; m <= lmax; ++m) {
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (1.0 * l * l - m * m));
      const double b =
          std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      pbar[idx(l, m)] = a * (ct * pbar[idx(l - 1, m)] - b * pbar[idx(l - 2, m)]);
    }
  }
  for (int l = 0; l <= lmax; ++l) {
    for (int m = 0; m <= l; ++m) {
      const std::complex<double> y = pbar[idx(l, m)] * std::polar(1.0, m * phi);
      values[l * l + l + m] = y;
      if (m > 0) values[l * l + l - m] = ((m % 2) ? -1.0 : 1.0) * std::conj(y);
    }
  }
}

}  // namespace

SphCoeffs quad_apply_theta(const SphCoeffs& f, double delta, int circle_points) {
  require_delta(delta, "quad_apply_theta");
  if (f.lmax > 16) throw std::invalid_argument("quad_apply_theta: band limit must be <= 16");
  if (circle_points < 64) throw std::invalid_argument("quad_apply_theta: need >= 64 points");
  const int lmax = f.lmax;
  const int n_theta = lmax + 1;
  const int n_phi = 2 * lmax + 1;
  const GaussLegendre gl = gauss_legendre(n_theta);

  SphCoeffs out(lmax);
  std::vector<std::complex<double>> ybuf;
  const double root = std::sqrt(std::max(0.0, 1.0 - delta * delta));

  for (int i = 0; i < n_theta; ++i) {
    const double ct = gl.nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int jp = 0; jp < n_phi; ++jp) {
      const double phi = 2.0 * kPi * jp / n_phi;
      const Eigen::Vector3d x(st * std::cos(phi), st * std::sin(phi), ct);
      // orthonormal frame normal to x (grid never touches the poles)
      Eigen::Vector3d u1 = Eigen::Vector3d::UnitZ().cross(x).normalized();
      Eigen::Vector3d u2 = x.cross(u1);

      std::complex<double> avg(0.0, 0.0);
      for (int k = 0; k < circle_points; ++k) {
        const double a = 2.0 * kPi * k / circle_points;
        const Eigen::Vector3d y = delta * x + root * (std::cos(a) * u1 + std::sin(a) * u2);
        sph_harm_all(lmax, y(2), std::atan2(y(1), y(0)), ybuf);
        std::complex<double> val(0.0, 0.0);
        for (size_t q = 0; q < ybuf.size(); ++q) val += f.coeffs[q] * ybuf[q];
        avg += val;
      }
      avg /= static_cast<double>(circle_points);

      sph_harm_all(lmax, ct, phi, ybuf);
      const double w = gl.weights[i] * (2.0 * kPi / n_phi);
      for (size_t q = 0; q < ybuf.size(); ++q) {
        out.coeffs[q] += w * avg * std::conj(ybuf[q]);
      }
    }
  }
  return out;
}

}  // namespace weylcert::spectra
