#include "schroflow/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "schroflow/errors.hpp"

namespace schroflow::specfun {

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    throw DomainError("gamma_fn: pole at " + std::to_string(x));
  }
  return std::tgamma(x);
}

double pochhammer(double s, int i) {
  if (i < 0) throw DomainError("pochhammer: negative count");
  double p = 1.0;
  for (int j = 0; j < i; ++j) p *= s + j;
  return p;
}

PolySpec::PolySpec(int degree, double b) : degree_(degree), b_(b) {
  if (degree < 0) throw DomainError("PolySpec: negative degree");
  if (!(b > 0.0)) throw DomainError("PolySpec: parameter b must be positive");
  using W = detail::wide_float;
  wide_coeffs_.resize(static_cast<std::size_t>(degree) + 1);
  coeffs_.resize(wide_coeffs_.size());
  W c = 1;
  const W wb = b;
  for (int i = 0; i <= degree; ++i) {
    wide_coeffs_[i] = c;
    coeffs_[i] = static_cast<double>(c);
    // c_{i+1} = c_i (-n + i) / ((b + i)(i + 1))
    c = c * W(i - degree) / ((wb + W(i)) * W(i + 1));
  }
}

double PolySpec::operator()(double t) const {
  using W = detail::wide_float;
  const W wt = t;
  W acc = wide_coeffs_.back();
  for (int i = degree_ - 1; i >= 0; --i) acc = acc * wt + wide_coeffs_[i];
  return static_cast<double>(acc);
}

double eval_P(const PolySpec& spec, double t) { return spec(t); }

double legendre_p(int l, double x) {
  if (l < 0) throw DomainError("legendre_p: negative degree");
  if (!(std::abs(x) <= 1.0)) throw DomainError("legendre_p: |x| > 1");
  if (l == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 1; k < l; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace {

// Orthonormalized associated Legendre function Pbar_l^m(cos theta), m >= 0,
// including the Condon-Shortley phase, so that Y_l^m = Pbar_l^m e^{i m phi}.
double normalized_plm(int l, int m, double theta) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  if (l == m) return pmm;
  double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
  if (l == m + 1) return pm1;
  double pl = 0.0;
  for (int k = m + 2; k <= l; ++k) {
    const double kk = k;
    const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - m * m));
    const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - m * m) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
    pl = a * (x * pm1 - b * pmm);
    pmm = pm1;
    pm1 = pl;
  }
  return pl;
}

}  // namespace

std::complex<double> sph_harm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw DomainError("sph_harm: require |m| <= l");
  const int am = std::abs(m);
  const double p = normalized_plm(l, am, theta);
  std::complex<double> y = p * std::polar(1.0, am * phi);
  if (m < 0) {
    y = std::conj(y);
    if (am % 2 == 1) y = -y;
  }
  return y;
}

double real_sph_harm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw DomainError("real_sph_harm: require |m| <= l");
  const int am = std::abs(m);
  double p = normalized_plm(l, am, theta);
  if (am % 2 == 1) p = -p;  // strip Condon-Shortley
  if (m == 0) return p;
  if (m > 0) return std::numbers::sqrt2 * p * std::cos(am * phi);
  return std::numbers::sqrt2 * p * std::sin(am * phi);
}

long harmonic_dimension(int N, int l) {
  if (N < 2 || l < 0) throw DomainError("harmonic_dimension: require N >= 2, l >= 0");
  auto binom = [](long n, long k) -> long {
    if (k < 0 || n < k) return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  return binom(l + N - 1, N - 1) - binom(l + N - 3, N - 1);
}

}  // namespace schroflow::specfun
