#include <doctest.h>

#include <cmath>
#include <random>

#include "whembed/numerics.hpp"

using namespace whembed;

namespace {

std::vector<cplx> random_points(int n, std::uint64_t seed, double re, double im_lo, double im_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-re, re), uy(im_lo, im_hi);
  std::vector<cplx> p;
  for (int j = 0; j < n; ++j) p.emplace_back(ux(rng), uy(rng));
  return p;
}

ContourSpec small_contour() {
  ContourSpec c;
  c.truncation = 60.0;
  c.indentation = 1e-3;
  c.nodes = 3000;
  c.scale = 1.0;
  return c;
}

}  // namespace

TEST_CASE("gamma branch values") {
  const MediumConfig m{1.0, 0.0};
  CHECK(gamma_branch(0.0, m) == cplx(1.0, 0.0));
  CHECK(gamma_branch(1.0, m) == cplx(0.0, 0.0));
  CHECK(gamma_branch(-1.0, m) == cplx(0.0, 0.0));
  const cplx g2 = gamma_branch(2.0, m);
  CHECK(std::abs(g2 - cplx(0.0, std::sqrt(3.0))) < 1e-15);
  // exp(i gamma y) decays for y > 0.
  CHECK(std::abs(std::exp(kI * g2 * 1.0)) < 1.0);
  const MediumConfig lossy{2.5, 0.01};
  CHECK(gamma_branch(lossy.k(), lossy) == cplx(0.0, 0.0));
  CHECK_THROWS_AS(gamma_branch(cplx(std::nan(""), 0.0), m), Error);
}

TEST_CASE("gamma squares to k^2 - z^2 and keeps Im >= 0 on the real axis") {
  const MediumConfig m{1.3, 1e-3};
  const cplx k = m.k();
  double worst = 0.0;
  for (cplx z : random_points(400, 1, 5.0, -3.0, 3.0)) {
    const cplx g = gamma_branch(z, m);
    worst = std::max(worst, std::abs(g * g - (k * k - z * z)) / std::max(1.0, std::abs(k * k - z * z)));
  }
  CHECK(worst < 1e-13);
  for (int j = 0; j <= 400; ++j) {
    const double x = -6.0 + 12.0 * j / 400.0;
    CHECK(gamma_branch(x, m).imag() >= 0.0);
  }
}

TEST_CASE("gamma Schwarz symmetry for real k") {
  const MediumConfig m{1.0, 0.0};
  double worst = 0.0;
  for (cplx z : random_points(200, 2, 4.0, 0.05, 3.0)) {
    worst = std::max(worst, std::abs(std::conj(gamma_branch(std::conj(z), m)) - gamma_branch(z, m)));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("theta branch") {
  const MediumConfig m{2.0, 0.0};
  CHECK(theta_branch(2.0, m) == cplx(0.0, 0.0));
  CHECK(theta_branch(-2.0, m) == cplx(kPi, 0.0));
  CHECK(std::abs(theta_branch(0.0, m) - 0.5 * kPi) < 1e-15);
  const MediumConfig lossy{2.0, 1e-6};
  double worst = 0.0;
  int n = 0;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b, ++n) {
      const cplx z(-5.0 + a * 1.1, -2.0 + b * 0.45);
      const cplx r = std::cos(theta_branch(z, lossy)) - z / lossy.k();
      worst = std::max(worst, std::abs(r) / std::abs(z / lossy.k()));
    }
  CHECK(n == 100);
  CHECK(worst < 1e-14);
}

TEST_CASE("sin_ratio is continuous through the series switch") {
  for (double nu : {1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0}) {
    const double below = sin_ratio(nu, 0.99999e-4).real(), above = sin_ratio(nu, 1.00001e-4).real();
    CHECK(std::abs(below - above) < 1e-12);
    CHECK(std::abs(sin_ratio(nu, 0.0) - nu) < 1e-16);
    CHECK(std::abs(sin_ratio(nu, 0.5) - std::sin(nu * 0.5) / std::sin(0.5)) < 1e-15);
  }
}

TEST_CASE("chebyshev identities") {
  CHECK(chebyshev_T(3, 1.0) == 1.0);
  CHECK(chebyshev_T(0, cplx(0.3, 0.2)) == cplx(1.0, 0.0));
  CHECK_THROWS_AS(chebyshev_T(-1, 0.5), Error);
  double d2 = 0.0, d6 = 0.0;
  for (int j = 0; j <= 200; ++j) {
    const double t = kPi * j / 200.0;
    d2 = std::max(d2, std::abs(chebyshev_T(2, std::cos(t)) - std::cos(2.0 * t)));
    const double alpha = j / 200.0;
    d6 = std::max(d6, std::abs(chebyshev_T(6, std::sqrt(alpha)) - chebyshev_T(3, 2.0 * alpha - 1.0)));
  }
  CHECK(d2 < 1e-13);
  CHECK(d6 < 1e-13);
  CHECK(std::abs(chebyshev_T(5, cplx(0.3, 0.4)) - std::cos(5.0 * std::acos(cplx(0.3, 0.4)))) < 1e-13);
}

TEST_CASE("gamma function, frozen high-precision values") {
  CHECK(gamma_fn(-2.0 / 3.0) == doctest::Approx(-4.01840780206162145).epsilon(1e-14));
  CHECK(gamma_fn(-4.0 / 3.0) == doctest::Approx(3.04676536370940094).epsilon(1e-14));
  CHECK(gamma_fn(1.0 / 3.0) == doctest::Approx(2.67893853470774763).epsilon(1e-14));
  CHECK(gamma_fn(-1.0 / 3.0) == doctest::Approx(-4.06235381827920125).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(-2.0), Error);
}

TEST_CASE("bessel and hankel") {
  CHECK(bessel_j(3, -1.7) == doctest::Approx(-std::cyl_bessel_j(3.0, 1.7)));
  CHECK(bessel_j(-3, 1.7) == doctest::Approx(-std::cyl_bessel_j(3.0, 1.7)));
  CHECK(bessel_j(2, -1.7) == doctest::Approx(std::cyl_bessel_j(2.0, 1.7)));
  const cplx h = hankel1_0(2.0);
  CHECK(h.real() == doctest::Approx(0.22389077914123567));
  CHECK(h.imag() == doctest::Approx(0.51037567264974512));
  CHECK_THROWS_AS(hankel1_0(0.0), Error);
}

TEST_CASE("gauss-legendre integrates polynomials of degree 2m-1 exactly") {
  for (int m : {1, 2, 5, 16, 33}) {
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    for (int d = 0; d <= 2 * m - 1; ++d) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += w[j] * std::pow(x[j], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }
}

TEST_CASE("cauchy_split of a single pole") {
  const ContourSpec c = small_contour();
  const cplx w_low(0.4, -0.7), w_up(-0.2, 0.9);
  SpectralFunction below{[w_low](cplx t) { return 1.0 / (t - w_low); }, HalfPlane::upper, -1.0};
  SpectralFunction above{[w_up](cplx t) { return 1.0 / (t - w_up); }, HalfPlane::lower, -1.0};
  const cplx z_up(0.3, 0.5), z_low(-0.6, -0.4);
  CHECK(std::abs(cauchy_split(below, z_up, Side::plus, c).value - below(z_up)) < 1e-9);
  CHECK(std::abs(cauchy_split(below, z_low, Side::minus, c).value) < 1e-9);
  CHECK(std::abs(cauchy_split(above, z_low, Side::minus, c).value - above(z_low)) < 1e-9);
}

TEST_CASE("cauchy_split partial fractions of 1/(t^2 + 1)") {
  const ContourSpec c = small_contour();
  SpectralFunction G{[](cplx t) { return 1.0 / (t * t + 1.0); }, HalfPlane::entire, -2.0};
  const cplx z(0.3, 0.5);
  // Frozen: (-1/2i)/(z + i) and (1/2i)/(z - i) at z = 0.3 + 0.5i.
  const SplitResult plus = cauchy_split(G, z, Side::plus, c);
  CHECK(std::abs(plus.value - cplx(0.320512820512820513, 0.0641025641025641026)) < 1e-10);
  const cplx zm(0.3, -0.5);
  CHECK(std::abs(cauchy_split(G, zm, Side::minus, c).value - (0.5 / kI) / (zm - kI)) < 1e-10);
  CHECK(std::abs(cauchy_split(G, z, Side::minus, c).value - cplx(0.735294117647058824, -0.441176470588235294)) < 1e-10);
  CHECK(plus.error_estimate < 1e-8);
}

TEST_CASE("cauchy_split reconstruction and linearity on the strip") {
  const ContourSpec c = small_contour();
  SpectralFunction G{[](cplx t) { return std::exp(cplx(0.0, 0.3) * t) / (t * t + 4.0); }, HalfPlane::entire, -2.0};
  SpectralFunction H{[](cplx t) { return 1.0 / ((t - cplx(1.0, 2.0)) * (t + cplx(0.5, 1.0))); }, HalfPlane::entire,
                     -2.0};
  const cplx a(0.7, -0.2), b(-1.1, 0.4);
  SpectralFunction L{[&](cplx t) { return a * G(t) + b * H(t); }, HalfPlane::entire, -2.0};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(-0.5e-3, 0.5e-3);
  for (int j = 0; j < 20; ++j) {
    const cplx z(ux(rng), uy(rng));
    const SplitResult p = cauchy_split(G, z, Side::plus, c), m = cauchy_split(G, z, Side::minus, c);
    CHECK(std::abs(p.value + m.value - G(z)) <= p.error_estimate + m.error_estimate + 1e-15);
    const cplx lin = cauchy_split(L, z, Side::plus, c).value;
    const cplx sum = a * p.value + b * cauchy_split(H, z, Side::plus, c).value;
    CHECK(std::abs(lin - sum) < 1e-12);
  }
}

TEST_CASE("cauchy_split errors") {
  const ContourSpec c = small_contour();
  SpectralFunction flat{[](cplx) { return cplx(1.0); }, HalfPlane::entire, 0.0};
  CHECK_THROWS_WITH_AS(cauchy_split(flat, 0.5, Side::plus, c), doctest::Contains("DecayTooSlow"), Error);
  SpectralFunction liar{[](cplx t) { return 1.0 / std::sqrt(t * t + 1.0); }, HalfPlane::entire, -3.0};
  CHECK_THROWS_WITH_AS(cauchy_split(liar, cplx(0.5, 0.5), Side::plus, c), doctest::Contains("DecayTooSlow"), Error);
  SpectralFunction ok{[](cplx t) { return 1.0 / (t * t + 1.0); }, HalfPlane::entire, -2.0};
  CHECK_THROWS_WITH_AS(cauchy_split(ok, cplx(58.0, 0.0), Side::plus, c), doctest::Contains("ContourHit"), Error);
}

TEST_CASE("ContourSpec validation and medium defaults") {
  ContourSpec c;
  c.nodes = 8;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ContourSpec{};
  c.indentation = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(ContourSpec::for_medium({1.0, 0.0}), Error);
  const ContourSpec f = ContourSpec::for_medium(MediumConfig::numeric_solve(2.0));
  CHECK(f.truncation == doctest::Approx(80.0));
  CHECK(f.indentation == doctest::Approx(2e-4));
  CHECK(MediumConfig::identity_checks(3.0).k_loss == doctest::Approx(3e-6));
  CHECK_THROWS_AS((MediumConfig{-1.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS((MediumConfig{1.0, -1e-3}).validate(), Error);
}

TEST_CASE("dense_solve and dense_svd") {
  CMatrix I = CMatrix::Identity(3, 3);
  CVector b(3);
  b << cplx(1, 2), cplx(-3, 0.5), cplx(0, 1);
  CHECK((dense_solve(I, b) - b).norm() < 1e-15);
  const Eigen::VectorXd s = dense_svd(I);
  CHECK(s.size() == 3);
  for (int j = 0; j < 3; ++j) CHECK(s(j) == doctest::Approx(1.0));
  CMatrix S(2, 2);
  S << 1.0, 1.0, 2.0, 2.0;
  CHECK_THROWS_WITH_AS(dense_solve(S, CVector::Ones(2)), doctest::Contains("SingularMatrix"), Error);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int n : {2, 5, 17, 64}) {
    CMatrix A(n, n);
    CVector x(n);
    for (int i = 0; i < n; ++i) {
      x(i) = {nd(rng), nd(rng)};
      for (int j = 0; j < n; ++j) A(i, j) = {nd(rng), nd(rng)};
    }
    const CVector rhs = A * x;
    double cond = 0.0;
    const CVector sol = dense_solve(A, rhs, &cond);
    CHECK((A * sol - rhs).norm() <= 1e-12 * rhs.norm() * cond);
    const Eigen::VectorXd sv = dense_svd(A);
    for (int j = 1; j < n; ++j) CHECK(sv(j) <= sv(j - 1));
    CHECK(sv(n - 1) >= 0.0);
  }
}
