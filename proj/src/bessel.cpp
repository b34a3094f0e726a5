#include <cmath>
#include <numbers>

#include "schroflow/errors.hpp"
#include "schroflow/specfun.hpp"

namespace schroflow::specfun {

namespace {

constexpr int kSeriesMaxTerms = 200;
constexpr long double kSeriesRelStop = 1e-17L;

// sum_k (-1)^k (r/2)^{2k} / (k! Gamma(k + nu + 1)), i.e. (r/2)^{-nu} J_nu(r).
long double reduced_series(long double nu, long double r) {
  const long double q = 0.25L * r * r;
  long double term = std::exp(-std::lgamma(nu + 1.0L));
  long double sum = term;
  for (int k = 1; k < kSeriesMaxTerms; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) <= kSeriesRelStop * std::abs(sum)) break;
  }
  return sum;
}

void check_args(double nu, double r, const char* who) {
  if (!std::isfinite(nu) || nu < 0.0) throw DomainError(std::string(who) + ": order must be finite and >= 0");
  if (!std::isfinite(r) || r < 0.0) throw DomainError(std::string(who) + ": argument must be finite and >= 0");
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!std::isfinite(nu) || nu < 0.0) throw DomainError("BesselOrder: order must be finite and >= 0");
}

double bessel_j_series(double nu, double r) {
  check_args(nu, r, "bessel_j_series");
  if (r == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const long double half = 0.5L * r;
  return static_cast<double>(std::pow(half, static_cast<long double>(nu)) * reduced_series(nu, r));
}

// Steed's method (CF1 for J'/J at order nu, downward recurrence to an order
// mu in [-1/2, 1/2], CF2 for (J' + iY')/(J + iY) at mu, Wronskian for the
// normalization). Valid for r >= 2.
double bessel_j_steed(double nu, double r) {
  check_args(nu, r, "bessel_j_steed");
  if (r < 2.0) throw DomainError("bessel_j_steed: requires r >= 2");
  using LD = long double;
  constexpr int kMaxIt = 1000000;
  constexpr LD kEps = 1e-19L;
  constexpr LD kFpMin = 1e-300L;

  const LD x = r;
  const LD xnu = nu;
  const int nl = std::max(0, static_cast<int>(xnu - x + 1.5L));
  const LD xmu = xnu - nl;
  const LD xmu2 = xmu * xmu;
  const LD xi = 1.0L / x;
  const LD xi2 = 2.0L * xi;
  const LD w = xi2 / std::numbers::pi_v<LD>;

  int isign = 1;
  LD h = xnu * xi;
  if (h < kFpMin) h = kFpMin;
  LD b = xi2 * xnu;
  LD d = 0.0L;
  LD c = h;
  int it = 0;
  for (; it < kMaxIt; ++it) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0L / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0L / d;
    const LD del = c * d;
    h = del * h;
    if (d < 0.0L) isign = -isign;
    if (std::abs(del - 1.0L) < kEps) break;
  }
  if (it == kMaxIt) throw NumericError("bessel_j_steed: CF1 did not converge");

  LD rjl = isign * kFpMin;
  LD rjpl = h * rjl;
  const LD rjl1 = rjl;
  LD fact = xnu * xi;
  for (int l = nl; l >= 1; --l) {
    const LD rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0L) rjl = kEps;
  const LD f = rjpl / rjl;

  LD a = 0.25L - xmu2;
  LD p = -0.5L * xi;
  LD q = 1.0L;
  const LD br = 2.0L * x;
  LD bi = 2.0L;
  fact = a * xi / (p * p + q * q);
  LD cr = br + q * fact;
  LD ci = bi + p * fact;
  LD den = br * br + bi * bi;
  LD dr = br / den;
  LD di = -bi / den;
  LD dlr = cr * dr - ci * di;
  LD dli = cr * di + ci * dr;
  LD temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (it = 2; it < kMaxIt; ++it) {
    a += 2 * (it - 1);
    bi += 2.0L;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0L) + std::abs(dli) < kEps) break;
  }
  if (it == kMaxIt) throw NumericError("bessel_j_steed: CF2 did not converge");

  const LD gam = (p - f) / q;
  LD rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  return static_cast<double>(rjl1 * (rjmu / rjl));
}

double bessel_j(BesselOrder nu, double r) {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("bessel_j: argument must be finite and >= 0");
  return r <= kBesselSeriesRadius ? bessel_j_series(nu.value(), r) : bessel_j_steed(nu.value(), r);
}

double bessel_j_over_power(double nu, double r) {
  check_args(nu, r, "bessel_j_over_power");
  if (r <= kBesselSeriesRadius) {
    return static_cast<double>(std::pow(0.5L, static_cast<long double>(nu)) * reduced_series(nu, r));
  }
  return bessel_j_steed(nu, r) / std::pow(r, nu);
}

namespace {
double scaled_order(int N, double alpha) {
  if (N < 2) throw DomainError("j_scaled: dimension must be >= 2");
  const double order = -alpha + 0.5 * (N - 2);
  // Orders are beta_k = sqrt(...) >= 0; allow rounding noise from the subtraction.
  if (order < 0.0) {
    if (order > -1e-13) return 0.0;
    throw DomainError("j_scaled: Bessel order -alpha + (N-2)/2 must be >= 0");
  }
  return order;
}
}  // namespace

double j_scaled(int N, double alpha, double r) {
  const double order = scaled_order(N, alpha);
  if (!(r > 0.0)) throw DomainError("j_scaled: r must be > 0");
  return std::pow(r, -0.5 * (N - 2)) * bessel_j(BesselOrder(order), r);
}

double j_scaled_weighted(int N, double alpha, double r) {
  const double order = scaled_order(N, alpha);
  if (!(r >= 0.0)) throw DomainError("j_scaled_weighted: r must be >= 0");
  // r^alpha r^{-(N-2)/2} J_beta(r) = r^{-beta} J_beta(r)
  return bessel_j_over_power(order, r);
}

}  // namespace schroflow::specfun
