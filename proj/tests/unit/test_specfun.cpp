#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "schroflow/errors.hpp"
#include "schroflow/quadrature.hpp"
#include "schroflow/specfun.hpp"

using namespace schroflow;
using namespace schroflow::specfun;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// J_nu(r) reference values, 40-digit arithmetic (mpmath besselj), frozen.
struct BesselRef {
  double nu, r, value;
};
const BesselRef kBesselTable[] = {
    {0, 0.5, 0.93846980724081290423},     {0, 5, -0.17759677131433830435},
    {0, 11.9, 0.02504944169958964508},    {0, 12.1, 0.069666773606807311849},
    {0, 30, -0.086367983581040211336},    {0, 199.5, -0.039613637334785146078},
    {0.5, 13, 0.092980175853725430574},   {1.3, 7.7, 0.072433742713834856109},
    {1.3, 50, -0.11262974595626641893},   {2.5, 100, 0.038325919332375405594},
    {4.7, 15, 0.060397620015279487928},   {4.7, 150, -0.056124062288715067434},
    {10, 5, 0.0014678026473104741311},    {10, 25, -0.075179843948523283841},
    {17.25, 40, -0.1305011009578263301},  {25, 20, 0.0097811657925700449191},
    {25, 60, 0.10752452824703348309},     {33.3, 90, 0.058029041084793540662},
    {40, 10, 6.0308953123469066317e-21},  {40, 45, 0.12660062126820200267},
    {40, 80, 0.0093414776311431160491},   {40, 200, -0.031932993297986605204},
    {0.25, 3.3, -0.21884001026285327273}, {3.75, 180, -0.049916367591560513368},
};

// Associated Laguerre L_n^{(a)}(t) by the three-term recurrence, extended precision.
long double laguerre(int n, long double a, long double t) {
  if (n == 0) return 1.0L;
  long double l0 = 1.0L;
  long double l1 = 1.0L + a - t;
  for (int k = 1; k < n; ++k) {
    const long double l2 = ((2.0L * k + 1.0L + a - t) * l1 - (k + a) * l0) / (k + 1.0L);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

// P(t) = 1F1(-n; b; t) = n! / (b)_n L_n^{(b-1)}(t)
long double p_via_laguerre(int n, double b, double t) {
  long double scale = 1.0L;
  for (int k = 1; k <= n; ++k) scale *= static_cast<long double>(k) / (b + k - 1.0L);
  return scale * laguerre(n, b - 1.0L, t);
}

}  // namespace

TEST_CASE("gamma_fn examples and poles") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_err(gamma_fn(0.5), std::sqrt(std::numbers::pi)) < 1e-14);
  // Gamma(7.5) from Gamma(x+1) = x Gamma(x) starting at Gamma(1/2)
  CHECK(rel_err(gamma_fn(7.5), 1871.2543057977883465) < 1e-13);
  for (double x = 0.5; x <= 50.0; x += 0.25) {
    CHECK(rel_err(gamma_fn(x + 1.0), x * gamma_fn(x)) < 2e-12);
  }
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
  CHECK_NOTHROW(gamma_fn(-2.5));
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(17.3, 0) == 1.0);
  CHECK(pochhammer(3.0, 2) == 12.0);
  CHECK(pochhammer(-2.0, 4) == 0.0);
  for (int s = -5; s <= 5; ++s) {
    for (int i = 0; i < 8; ++i) CHECK(pochhammer(s, i + 1) == pochhammer(s, i) * (s + i));
  }
}

TEST_CASE("bessel_j examples") {
  CHECK(std::abs(bessel_j(BesselOrder(0.5), std::numbers::pi)) < 1e-15);
  CHECK(bessel_j(BesselOrder(0.0), 0.0) == 1.0);
  CHECK(bessel_j(BesselOrder(2.0), 0.0) == 0.0);
  CHECK(rel_err(bessel_j(BesselOrder(1.5), 2.0), 0.49129377868716234501) < 1e-14);
  CHECK_THROWS_AS(bessel_j(BesselOrder(1.0), -0.1), DomainError);
  CHECK_THROWS_AS(BesselOrder(-0.5), DomainError);
}

TEST_CASE("bessel_j reference table across both paths") {
  for (const auto& ref : kBesselTable) {
    INFO("nu=" << ref.nu << " r=" << ref.r);
    CHECK(rel_err(bessel_j(BesselOrder(ref.nu), ref.r), ref.value) < 1e-10);
  }
}

TEST_CASE("bessel series and Steed agree in the overlap band") {
  double worst = 0.0;
  for (double nu : {0.0, 0.5, 1.3, 4.7}) {
    for (int i = 0; i <= 40; ++i) {
      const double r = 8.0 + 0.2 * i + 0.0137;
      const double s = bessel_j_series(nu, r);
      const double d = bessel_j_steed(nu, r);
      worst = std::max(worst, rel_err(s, d));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("bessel three-term recurrence residual") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> nu_d(1.0, 40.0);
  std::uniform_real_distribution<double> r_d(0.05, 200.0);
  for (int i = 0; i < 100; ++i) {
    const double nu = nu_d(rng);
    const double r = r_d(rng);
    const double jm = bessel_j(BesselOrder(nu - 1.0), r);
    const double j0 = bessel_j(BesselOrder(nu), r);
    const double jp = bessel_j(BesselOrder(nu + 1.0), r);
    CHECK(std::abs(jm + jp - (2.0 * nu / r) * j0) <= 1e-9 * std::max(1.0, std::abs(j0)));
  }
}

TEST_CASE("j_scaled examples") {
  const double x = std::numbers::pi / 2.0;
  CHECK(rel_err(j_scaled(3, 0.0, x), std::pow(2.0 / std::numbers::pi, 1.5)) < 1e-13);
  CHECK(rel_err(j_scaled(3, 0.0, x), std::sqrt(2.0 / std::numbers::pi) * std::sin(x) / x) < 1e-13);
  CHECK(rel_err(j_scaled_weighted(3, 0.0, 0.0), std::sqrt(2.0 / std::numbers::pi)) < 1e-14);
  CHECK(j_scaled_weighted(2, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(j_scaled(3, 0.0, 0.0), DomainError);
  // weighted form continuous across the origin and across the series/Steed switch
  const double alpha = 0.25;
  CHECK(rel_err(j_scaled_weighted(3, alpha, 1e-8), j_scaled_weighted(3, alpha, 0.0)) < 1e-12);
  CHECK(rel_err(j_scaled_weighted(3, alpha, 20.0), std::pow(20.0, alpha) * j_scaled(3, alpha, 20.0)) < 1e-12);
  // near-origin behaviour c r^{-alpha}
  const double c0 = j_scaled_weighted(3, alpha, 0.0);
  CHECK(rel_err(j_scaled(3, alpha, 1e-6), c0 * std::pow(1e-6, -alpha)) < 1e-9);
}

TEST_CASE("eval_P examples") {
  CHECK(eval_P(PolySpec(0, 0.7), 12.5) == 1.0);
  CHECK(eval_P(PolySpec(1, 1.5), 3.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(eval_P(PolySpec(2, 1.25), 0.0) == 1.0);
  CHECK_THROWS_AS(PolySpec(2, 0.0), DomainError);
  CHECK_THROWS_AS(PolySpec(2, -1.0), DomainError);
  const PolySpec p(3, 2.25);
  for (int i = 0; i <= 3; ++i) {
    CHECK(rel_err(p.coefficients()[i], pochhammer(-3, i) / pochhammer(2.25, i) / std::tgamma(i + 1.0)) < 1e-15);
  }
}

TEST_CASE("eval_P matches the Laguerre recurrence") {
  double worst = 0.0;
  for (double b : {0.25, 1.25, 1.5, 2.5, 3.4, 5.0}) {
    for (int n = 0; n <= 30; ++n) {
      const PolySpec p(n, b);
      for (int k = 0; k <= 200; ++k) {
        const double t = 0.5 * k + 0.0031;
        const long double ref = p_via_laguerre(n, b, t);
        const double e = std::abs(p(t) - ref) / std::abs(ref);
        worst = std::max(worst, e);
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("legendre_p") {
  CHECK(legendre_p(0, 0.3) == 1.0);
  CHECK(legendre_p(1, -0.5) == -0.5);
  const double x = 0.7;
  CHECK(rel_err(legendre_p(4, x), (35 * std::pow(x, 4) - 30 * x * x + 3) / 8) < 1e-14);
  CHECK_THROWS_AS(legendre_p(2, 1.01), DomainError);
}

TEST_CASE("sph_harm examples") {
  const double inv = 1.0 / std::sqrt(4 * std::numbers::pi);
  CHECK(std::abs(sph_harm(0, 0, 0.4, 2.1) - inv) < 1e-15);
  CHECK(std::abs(sph_harm(1, 0, 0.0, 0.0) - std::sqrt(3 / (4 * std::numbers::pi))) < 1e-15);
  CHECK(std::abs(sph_harm(1, 1, std::numbers::pi / 2, 0.0) + std::sqrt(3 / (8 * std::numbers::pi))) < 1e-15);
  CHECK_THROWS_AS(sph_harm(1, 2, 0.1, 0.1), DomainError);
  // Y_l^{-m} = (-1)^m conj(Y_l^m)
  CHECK(std::abs(sph_harm(3, -2, 0.7, 1.1) - std::conj(sph_harm(3, 2, 0.7, 1.1))) < 1e-15);
  CHECK(std::abs(sph_harm(3, -1, 0.7, 1.1) + std::conj(sph_harm(3, 1, 0.7, 1.1))) < 1e-15);
  // addition theorem: sum_m |Y_l^m|^2 = (2l+1)/(4 pi)
  double s = 0;
  for (int m = -5; m <= 5; ++m) s += std::norm(sph_harm(5, m, 1.3, 0.2));
  CHECK(rel_err(s, 11 / (4 * std::numbers::pi)) < 1e-13);
}

TEST_CASE("spherical harmonic Gram matrices are the identity") {
  const int lmax = 4;
  const auto gl = gauss_legendre(2 * lmax + 2);
  const int nphi = 4 * lmax + 4;
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= lmax; ++l)
    for (int m = -l; m <= l; ++m) lm.emplace_back(l, m);
  const std::size_t n = lm.size();
  std::vector<std::complex<double>> gram(n * n);
  std::vector<double> gram_real(n * n);
  for (std::size_t it = 0; it < gl.nodes.size(); ++it) {
    const double theta = std::acos(gl.nodes[it]);
    for (int ip = 0; ip < nphi; ++ip) {
      const double phi = 2 * std::numbers::pi * ip / nphi;
      const double w = gl.weights[it] * 2 * std::numbers::pi / nphi;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          gram[a * n + b] += w * sph_harm(lm[a].first, lm[a].second, theta, phi) *
                             std::conj(sph_harm(lm[b].first, lm[b].second, theta, phi));
          gram_real[a * n + b] += w * real_sph_harm(lm[a].first, lm[a].second, theta, phi) *
                                  real_sph_harm(lm[b].first, lm[b].second, theta, phi);
        }
      }
    }
  }
  double dev = 0.0;
  double dev_real = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      dev = std::max(dev, std::abs(gram[a * n + b] - (a == b ? 1.0 : 0.0)));
      dev_real = std::max(dev_real, std::abs(gram_real[a * n + b] - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(dev <= 1e-10);
  CHECK(dev_real <= 1e-10);
}

TEST_CASE("harmonic_dimension") {
  CHECK(harmonic_dimension(3, 0) == 1);
  CHECK(harmonic_dimension(3, 4) == 9);
  CHECK(harmonic_dimension(2, 0) == 1);
  CHECK(harmonic_dimension(2, 3) == 2);
  CHECK(harmonic_dimension(4, 2) == 9);  // (l+1)^2 on S^3
}
