#include "whembed/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace whembed {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::decay_too_slow: return "DecayTooSlow";
    case ErrorCode::contour_hit: return "ContourHit";
    case ErrorCode::singular_matrix: return "SingularMatrix";
    case ErrorCode::singular_at_incidence: return "SingularAtIncidence";
    case ErrorCode::kernel_zero: return "KernelZero";
    case ErrorCode::winding_nonzero: return "WindingNonzero";
    case ErrorCode::optical_boundary: return "OpticalBoundary";
    case ErrorCode::degenerate_base: return "DegenerateBase";
    case ErrorCode::not_converged: return "NotConverged";
    case ErrorCode::gauge_ambiguous: return "GaugeAmbiguous";
    case ErrorCode::pole_hit: return "PoleHit";
    case ErrorCode::empty_mask: return "EmptyMask";
    case ErrorCode::io: return "IOError";
  }
  return "Unknown";
}

void MediumConfig::validate() const {
  if (!(k_real > 0.0) || !std::isfinite(k_real))
    throw Error(ErrorCode::invalid_argument, "k_real must be positive, got " + std::to_string(k_real));
  if (!(k_loss >= 0.0) || !std::isfinite(k_loss))
    throw Error(ErrorCode::invalid_argument, "k_loss must be nonnegative, got " + std::to_string(k_loss));
}

SpectralFunction VectorSpectralFunction::component(int i) const {
  auto f = evaluate;
  double g = i < static_cast<int>(growth_exponents.size()) ? growth_exponents[i] : 0.0;
  return {[f, i](cplx z) { return f(z)(i); }, half_plane, g};
}

void ContourSpec::validate() const {
  if (!(truncation > 4.0 * scale))
    throw Error(ErrorCode::invalid_argument, "contour truncation must exceed 4*scale");
  if (!(indentation > 0.0)) throw Error(ErrorCode::invalid_argument, "contour indentation must be positive");
  if (nodes < 16) throw Error(ErrorCode::invalid_argument, "contour needs at least 16 nodes");
  if (!(scale > 0.0) || !(refine_min > 0.0))
    throw Error(ErrorCode::invalid_argument, "contour scale and refine_min must be positive");
}

std::vector<double> ContourSpec::breakpoints() const {
  const double T = truncation;
  std::set<double> b = {-T, T};
  auto add = [&](double x) {
    if (x > -T && x < T) b.insert(x);
  };
  for (double s : refine_at) {
    add(s);
    for (double d = refine_min; d < 0.5 * scale; d *= 2.0) {
      add(s - d);
      add(s + d);
    }
  }
  for (double x = 1.5 * scale; x < T; x *= 1.6) {
    add(x);
    add(-x);
  }
  // Merge breakpoints closer than a relative epsilon.
  std::vector<double> out;
  for (double x : b)
    if (out.empty() || x - out.back() > 1e-14 * T) out.push_back(x);
  out.back() = T;
  return out;
}

int ContourSpec::nodes_per_panel() const {
  const int panels = static_cast<int>(breakpoints().size()) - 1;
  return std::max(4, nodes / panels);
}

ContourSpec ContourSpec::for_medium(const MediumConfig& m, double truncation_factor, int nodes) {
  m.validate();
  if (!(m.k_loss > 0.0))
    throw Error(ErrorCode::invalid_argument, "contour computations require k_loss > 0");
  ContourSpec c;
  c.scale = std::abs(m.k());
  c.truncation = truncation_factor * m.k_real;
  c.nodes = nodes;
  c.indentation = 0.1 * m.k_loss;
  c.refine_at = {-m.k_real, m.k_real};
  c.refine_min = 0.45 * m.k_loss;
  return c;
}

cplx gamma_branch(cplx z, const MediumConfig& cfg) {
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    throw Error(ErrorCode::invalid_argument, "gamma_branch: NaN argument");
  const cplx k = cfg.k();
  if (z == k || z == -k) return {0.0, 0.0};
  const cplx g = std::sqrt(k - z) * std::sqrt(k + z);
  return {g.real() + 0.0, g.imag() + 0.0};
}

cplx theta_branch(cplx z, const MediumConfig& cfg) {
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    throw Error(ErrorCode::invalid_argument, "theta_branch: NaN argument");
  const cplx k = cfg.k();
  if (z == k) return {0.0, 0.0};
  if (z == -k) return {kPi, 0.0};
  return std::acos(z / k);
}

cplx sin_ratio(double nu, cplx phi) {
  if (std::abs(phi) < 1e-4) {
    const cplx p2 = phi * phi;
    const double n2 = nu * nu;
    return nu * (1.0 + (1.0 - n2) / 6.0 * p2 + (n2 - 1.0) * (3.0 * n2 - 7.0) / 360.0 * p2 * p2);
  }
  return std::sin(nu * phi) / std::sin(phi);
}

cplx chebyshev_T(int n, cplx x) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "chebyshev_T: negative degree");
  if (n == 0) return 1.0;
  cplx t0 = 1.0, t1 = x;
  for (int j = 1; j < n; ++j) {
    const cplx t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

double chebyshev_T(int n, double x) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "chebyshev_T: negative degree");
  if (n == 0) return 1.0;
  double t0 = 1.0, t1 = x;
  for (int j = 1; j < n; ++j) {
    const double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

double gamma_fn(double x) {
  if (x > 0.0) return std::tgamma(x);
  if (x == std::floor(x)) throw Error(ErrorCode::invalid_argument, "gamma_fn: pole at nonpositive integer");
  return kPi / (std::sin(kPi * x) * std::tgamma(1.0 - x));
}

double bessel_j(int n, double x) {
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (n % 2) sign = -sign;
  }
  return sign * std::cyl_bessel_j(static_cast<double>(n), x);
}

cplx hankel1_0(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::invalid_argument, "hankel1_0: argument must be positive");
  return {std::cyl_bessel_j(0.0, x), std::cyl_neumann(0.0, x)};
}

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "gauss_legendre: m must be positive");
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (t * p1 - p0) / (t * t - 1.0);
    }
    x[i] = -t;
    x[m - 1 - i] = t;
    w[i] = w[m - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  if (m % 2 == 1) x[m / 2] = 0.0;
}

namespace {

struct PathRule {
  std::vector<double> x, w;
};

PathRule make_rule(const std::vector<double>& bp, int m) {
  std::vector<double> gx, gw;
  gauss_legendre(m, gx, gw);
  PathRule r;
  r.x.reserve(bp.size() * m);
  r.w.reserve(bp.size() * m);
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    const double h = 0.5 * (bp[i + 1] - bp[i]), c = 0.5 * (bp[i + 1] + bp[i]);
    for (int j = 0; j < m; ++j) {
      r.x.push_back(c + h * gx[j]);
      r.w.push_back(h * gw[j]);
    }
  }
  return r;
}

// Integral over s > T of c*s^{-p}/(s - z) for |z| < T.
cplx tail_series(cplx z, double p, double T) {
  cplx s = 0.0, zn = 1.0;
  const double Tp = std::pow(T, p);
  for (int n = 0; n < 4000; ++n) {
    const cplx term = zn / ((n + p) * Tp);
    s += term;
    if (std::abs(term) < 1e-18 * std::abs(s)) break;
    zn *= z / T;
  }
  return s;
}

double local_panel_length(const std::vector<double>& bp, double x) {
  auto it = std::upper_bound(bp.begin(), bp.end(), x);
  if (it == bp.begin() || it == bp.end()) return 0.0;
  const size_t i = static_cast<size_t>(it - bp.begin()) - 1;
  double len = bp[i + 1] - bp[i];
  if (i > 0) len = std::max(len, bp[i] - bp[i - 1]);
  if (i + 2 < bp.size()) len = std::max(len, bp[i + 2] - bp[i + 1]);
  return len;
}

}  // namespace

SplitResult cauchy_split(const SpectralFunction& G, cplx z, Side side, const ContourSpec& contour) {
  contour.validate();
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    throw Error(ErrorCode::invalid_argument, "cauchy_split: NaN point");
  const double p = -G.growth_exponent;
  if (!(p > 0.0))
    throw Error(ErrorCode::decay_too_slow, "declared growth exponent " + std::to_string(G.growth_exponent) +
                                               " does not decay");
  const double T = contour.truncation;
  const double delta = contour.indentation;
  const double h0 = -delta;

  double h = h0;
  if (side == Side::plus && !(z.imag() - h0 > delta)) h = z.imag() - delta;
  if (side == Side::minus && !(h0 - z.imag() > delta)) h = z.imag() + delta;

  const cplx zs = z - cplx(0.0, h);
  if (std::abs(zs) >= 0.95 * T)
    throw Error(ErrorCode::contour_hit, "point lies at the truncation ends of the contour (|z| >= 0.95 T)");

  auto at = [&](double x) { return G(cplx(x, h)); };
  const double Tp = std::pow(T, p);
  for (double sgn : {1.0, -1.0}) {
    const double a = std::abs(at(sgn * T)) * Tp;
    const double b = std::abs(at(sgn * 0.5 * T)) * std::pow(0.5 * T, p);
    if (b > 0.0 && a > 4.0 * b + 1e-300)
      throw Error(ErrorCode::decay_too_slow,
                  "sampled tail decays slower than |t|^-" + std::to_string(p));
  }

  const std::vector<double> bp = contour.breakpoints();
  const int m = std::max(4, contour.nodes / static_cast<int>(bp.size() - 1));
  const int m2 = std::max(2, (3 * m) / 4);

  const bool subtract = std::abs(zs.real()) < T && std::abs(zs.imag()) < local_panel_length(bp, zs.real());
  const cplx gz = subtract ? G(z) : cplx(0.0);
  const cplx log_term = subtract ? gz * (std::log(T - zs) - std::log(-T - zs)) : cplx(0.0);

  auto integrate = [&](int order) {
    const PathRule r = make_rule(bp, order);
    cplx s = 0.0;
    for (size_t j = 0; j < r.x.size(); ++j) {
      const cplx g = at(r.x[j]);
      s += r.w[j] * (g - gz) / (r.x[j] - zs);
    }
    return s + log_term;
  };
  const cplx I1 = integrate(m);
  const cplx I2 = integrate(m2);

  // Beyond T, G(+-x + ih) x^p ~ c0 + c1/x + c2/x^2, fitted at T, 2T, 4T; the miss at 8T sizes the error.
  cplx tail = 0.0;
  double tail_err = 0.0;
  for (double sgn : {1.0, -1.0}) {
    Eigen::Matrix3cd V;
    Eigen::Vector3cd a;
    for (int j = 0; j < 3; ++j) {
      const double x = T * std::pow(2.0, j);
      V.row(j) << 1.0, 1.0 / x, 1.0 / (x * x);
      a(j) = at(sgn * x) * std::pow(x, p);
    }
    const Eigen::Vector3cd c = V.partialPivLu().solve(a);
    const double x8 = 8.0 * T;
    const cplx a8 = at(sgn * x8) * std::pow(x8, p);
    const cplx s0 = tail_series(sgn * zs, p, T);
    tail += sgn * (c(0) * s0 + c(1) * tail_series(sgn * zs, p + 1.0, T) + c(2) * tail_series(sgn * zs, p + 2.0, T));
    tail_err += 2.0 * std::abs(s0) * std::abs(a8 - c(0) - c(1) / x8 - c(2) / (x8 * x8));
  }

  const cplx cauchy = (I1 + tail) / (2.0 * kPi * kI);
  SplitResult res;
  res.value = side == Side::plus ? cauchy : -cauchy;
  const double err = (std::abs(I1 - I2) + (std::isfinite(tail_err) ? tail_err : 0.0)) / (2.0 * kPi);
  res.error_estimate = err + 1e-16 * std::abs(res.value);
  return res;
}

double analyticity_defect(const SpectralFunction& f, const std::vector<cplx>& points, Side side,
                          const ContourSpec& contour) {
  const double p = std::max(f.growth_exponent, 0.0);
  const int m = static_cast<int>(std::floor(p)) + 3;
  const double off = contour.scale;
  const cplx w = side == Side::plus ? cplx(0.0, -contour.indentation - off) : cplx(0.0, -contour.indentation + off);
  SpectralFunction g{[&f, w, m](cplx t) { return f(t) / std::pow(t - w, m); }, f.half_plane,
                     f.growth_exponent - m};
  double worst = 0.0;
  for (cplx z : points) {
    const cplx direct = f(z);
    const cplx rebuilt = cauchy_split(g, z, side, contour).value * std::pow(z - w, m);
    worst = std::max(worst, std::abs(rebuilt - direct) / std::max(std::abs(direct), 1e-300));
  }
  return worst;
}

CVector dense_solve(const CMatrix& A, const CVector& b, double* condition) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw Error(ErrorCode::invalid_argument, "dense_solve: dimension mismatch");
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double smin = s.size() ? s(s.size() - 1) : 0.0;
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (condition) *condition = cond;
  if (!(cond <= 1e14)) throw Error(ErrorCode::singular_matrix, "condition estimate " + std::to_string(cond));
  return svd.solve(b);
}

Eigen::VectorXd dense_svd(const CMatrix& A) {
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues();
}

}  // namespace whembed
