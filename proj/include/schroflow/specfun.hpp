#pragma once

#include <complex>
#include <span>
#include <vector>

namespace schroflow::specfun {

namespace detail {
#if defined(__SIZEOF_FLOAT128__)
using wide_float = __float128;
#else
using wide_float = long double;
#endif
}  // namespace detail

/// Gamma function. Throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

/// Rising factorial (s)_i = s (s+1) ... (s+i-1), with (s)_0 = 1.
double pochhammer(double s, int i);

/// Non-negative finite Bessel order.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double value() const noexcept { return nu_; }

 private:
  double nu_;
};

/// Radius at and below which J_nu is summed from its power series.
inline constexpr double kBesselSeriesRadius = 12.0;

/// J_nu(r) for r >= 0. Power series for r <= kBesselSeriesRadius, Steed's
/// continued-fraction method above.
double bessel_j(BesselOrder nu, double r);

/// The two evaluation paths, exposed so they can be checked against each other.
double bessel_j_series(double nu, double r);
double bessel_j_steed(double nu, double r);

/// r^{-nu} J_nu(r), continuous at r = 0 where it equals 2^{-nu} / Gamma(nu + 1).
double bessel_j_over_power(double nu, double r);

/// j_{-alpha}(r) = r^{-(N-2)/2} J_{beta}(r) with beta = -alpha + (N-2)/2 >= 0.
/// Requires r > 0; diverges like r^{-alpha} at the origin when alpha > 0.
double j_scaled(int N, double alpha, double r);

/// r^{alpha} j_{-alpha}(r), which extends continuously to r = 0.
double j_scaled_weighted(int N, double alpha, double r);

/// Confluent polynomial P(t) = sum_{i<=n} (-n)_i / (b)_i t^i / i!.
///
/// The coefficients alternate in sign and the sum cancels heavily for large t
/// (relative cancellation up to ~1e16 at n = 30, t = 100), so both the cached
/// coefficients and the Horner accumulation are carried in quad precision.
class PolySpec {
 public:
  PolySpec(int degree, double b);

  int degree() const noexcept { return degree_; }
  double b() const noexcept { return b_; }
  /// Coefficients rounded to double, index i multiplies t^i.
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  double operator()(double t) const;

 private:
  int degree_;
  double b_;
  std::vector<double> coeffs_;
  std::vector<detail::wide_float> wide_coeffs_;
};

double eval_P(const PolySpec& spec, double t);

/// Legendre polynomial P_l(x), |x| <= 1, by upward recurrence.
double legendre_p(int l, double x);

/// Orthonormal complex spherical harmonic Y_l^m(theta, phi), Condon-Shortley phase.
/// theta is the colatitude, phi the longitude.
std::complex<double> sph_harm(int l, int m, double theta, double phi);

/// Orthonormal real spherical harmonic: sqrt(2) N P_l^|m| cos(m phi) for m > 0,
/// N P_l^0 for m = 0, sqrt(2) N P_l^|m| sin(|m| phi) for m < 0 (no Condon-Shortley factor).
double real_sph_harm(int l, int m, double theta, double phi);

/// Dimension of the space of degree-l spherical harmonics on S^{N-1}.
long harmonic_dimension(int N, int l);

}  // namespace schroflow::specfun
