#include "schroflow/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "schroflow/errors.hpp"
#include "schroflow/quadrature.hpp"
#include "schroflow/specfun.hpp"

namespace schroflow::angular {

namespace {
constexpr double kConjugateTol = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

CircleFourier::CircleFourier(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 != 1) throw ConfigError("CircleFourier: coefficient array must have odd length 2Q+1");
}

CircleFourier CircleFourier::constant(double value) { return CircleFourier({cplx(value)}); }

CircleFourier CircleFourier::from_samples(std::span<const double> samples, int max_q) {
  const auto m = static_cast<int>(samples.size());
  if (m < 1 || max_q < 0) throw ConfigError("CircleFourier::from_samples: empty samples or negative band");
  if (2 * max_q + 1 > m) throw ConfigError("CircleFourier::from_samples: band exceeds sample resolution");
  std::vector<cplx> c(2 * max_q + 1);
  for (int q = -max_q; q <= max_q; ++q) {
    cplx s = 0.0;
    for (int i = 0; i < m; ++i) s += samples[i] * std::polar(1.0, -kTwoPi * q * i / m);
    c[q + max_q] = s / static_cast<double>(m);
  }
  return CircleFourier(std::move(c));
}

cplx CircleFourier::at(int q) const noexcept {
  const int Q = max_q();
  return std::abs(q) <= Q ? coeffs_[q + Q] : cplx{};
}

double CircleFourier::conjugate_symmetry_defect() const noexcept {
  double d = 0.0;
  for (int q = 0; q <= max_q(); ++q) d = std::max(d, std::abs(at(-q) - std::conj(at(q))));
  return d;
}

double CircleFourier::evaluate(double theta) const {
  cplx s = 0.0;
  for (int q = -max_q(); q <= max_q(); ++q) s += at(q) * std::polar(1.0, q * theta);
  return s.real();
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

double HermitianMatrix::hermiticity_defect() const noexcept {
  double d = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

double HermitianMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

std::string_view to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::circle_fourier: return "circle_fourier";
    case BasisTag::sphere_harmonic: return "sphere_harmonic";
    case BasisTag::analytic_constant: return "analytic_constant";
  }
  return "unknown";
}

HermitianMatrix assemble_circle(const AngularProblem& problem) {
  if (problem.dimension != 2) throw ConfigError("assemble_circle: requires N = 2");
  if (problem.truncation < 0) throw ConfigError("assemble_circle: negative truncation");
  const int K = problem.truncation;

  CircleFourier a;
  if (const auto* c = std::get_if<ConstantCoefficient>(&problem.scalar)) {
    a = CircleFourier::constant(c->value);
  } else if (const auto* f = std::get_if<CircleFourier>(&problem.scalar)) {
    a = *f;
  } else {
    throw ConfigError("assemble_circle: scalar coefficient must be constant or Fourier");
  }
  const CircleFourier alpha = problem.magnetic.value_or(CircleFourier{});
  if (a.conjugate_symmetry_defect() > kConjugateTol) throw ConfigError("assemble_circle: a(theta) is not real");
  if (alpha.conjugate_symmetry_defect() > kConjugateTol) throw ConfigError("assemble_circle: alpha(theta) is not real");

  // g = alpha^2 + a, needed for |q| <= 2K
  const int band = 2 * K;
  std::vector<cplx> g(2 * band + 1);
  const int Qa = alpha.max_q();
  for (int q = -band; q <= band; ++q) {
    cplx s = a.at(q);
    for (int p = -Qa; p <= Qa; ++p) s += alpha.at(p) * alpha.at(q - p);
    g[q + band] = s;
  }

  const std::size_t n = 2 * K + 1;
  HermitianMatrix m(n);
  for (int i = 0; i < static_cast<int>(n); ++i) {
    const int mi = i - K;
    for (int j = 0; j < static_cast<int>(n); ++j) {
      const int nj = j - K;
      cplx v = static_cast<double>(mi + nj) * alpha.at(mi - nj) + g[mi - nj + band];
      if (i == j) v += static_cast<double>(mi) * nj;
      m(i, j) = v;
    }
  }
  // exact Hermitian symmetry: average the two triangles
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  return m;
}

HermitianMatrix assemble_sphere(const AngularProblem& problem) {
  if (problem.dimension != 3) throw ConfigError("assemble_sphere: requires N = 3");
  if (problem.magnetic) throw ConfigError("assemble_sphere: magnetic potentials are only supported on the circle");
  if (problem.truncation < 0) throw ConfigError("assemble_sphere: negative L_max");
  const int L = problem.truncation;
  const int nt_floor = 2 * L + 2;
  const int np_floor = 4 * L + 4;
  const int nt = problem.sphere_theta_nodes == 0 ? nt_floor : problem.sphere_theta_nodes;
  const int np = problem.sphere_phi_nodes == 0 ? np_floor : problem.sphere_phi_nodes;
  if (nt < nt_floor || np < np_floor) {
    throw ConfigError("assemble_sphere: quadrature below floor (" + std::to_string(nt_floor) + " x " +
                      std::to_string(np_floor) + ")");
  }
  const std::size_t n = static_cast<std::size_t>(L + 1) * (L + 1);
  HermitianMatrix m(n);
  for (int l = 0; l <= L; ++l)
    for (int mm = -l; mm <= l; ++mm) m(l * l + l + mm, l * l + l + mm) = l * (l + 1.0);

  if (const auto* c = std::get_if<ConstantCoefficient>(&problem.scalar)) {
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c->value;
    return m;
  }
  const auto* fn = std::get_if<SphereFunction>(&problem.scalar);
  if (fn == nullptr || !*fn) throw ConfigError("assemble_sphere: scalar coefficient must be constant or a sphere function");

  const auto gl = gauss_legendre(nt);
  std::vector<double> v(n * n, 0.0);
  std::vector<double> y(n);
  for (int it = 0; it < nt; ++it) {
    const double theta = std::acos(gl.nodes[it]);
    for (int ip = 0; ip < np; ++ip) {
      const double phi = kTwoPi * ip / np;
      const double w = gl.weights[it] * kTwoPi / np * (*fn)(theta, phi);
      for (int l = 0; l <= L; ++l)
        for (int mm = -l; mm <= l; ++mm) y[l * l + l + mm] = specfun::real_sph_harm(l, mm, theta, phi);
      for (std::size_t i = 0; i < n; ++i) {
        const double wy = w * y[i];
        for (std::size_t j = i; j < n; ++j) v[i * n + j] += wy * y[j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      m(i, j) += v[i * n + j];
      if (j != i) m(j, i) = m(i, j);
    }
  }
  return m;
}

AngularEigensystem solve(const AngularProblem& problem, double tol) {
  AngularEigensystem sys;
  sys.dimension = problem.dimension;
  sys.truncation = problem.truncation;
  if (const auto* c = std::get_if<ConstantCoefficient>(&problem.scalar); c && !problem.magnetic) {
    sys.constant_a = c->value;
  }
  HermitianMatrix m;
  if (problem.dimension == 2) {
    sys.basis = BasisTag::circle_fourier;
    m = assemble_circle(problem);
  } else if (problem.dimension == 3) {
    sys.basis = BasisTag::sphere_harmonic;
    m = assemble_sphere(problem);
  } else {
    throw ConfigError("solve: Galerkin assembly supports N = 2 and N = 3; use constant_a_spectrum for N > 3");
  }
  EigenResult r = eigensolve(m, tol);
  sys.eigenvalues = std::move(r.values);
  sys.eigenvectors = std::move(r.vectors);
  sys.residual_bound = std::max(r.residual, r.orthogonality_defect);
  return sys;
}

AngularEigensystem constant_a_spectrum(int N, double a, int count) {
  if (N < 3) throw ConfigError("constant_a_spectrum: requires N >= 3");
  if (count < 1) throw ConfigError("constant_a_spectrum: count must be >= 1");
  AngularEigensystem sys;
  sys.basis = BasisTag::analytic_constant;
  sys.dimension = N;
  sys.constant_a = a;
  int l = 0;
  while (static_cast<int>(sys.eigenvalues.size()) < count) {
    const long mult = specfun::harmonic_dimension(N, l);
    const double mu = l * (l + N - 2.0) + a;
    for (long i = 0; i < mult; ++i) {
      sys.eigenvalues.push_back(mu);
      sys.degree.push_back(l);
      sys.order.push_back(N == 3 ? static_cast<int>(i) - l : static_cast<int>(i));
    }
    ++l;
  }
  sys.truncation = l - 1;
  return sys;
}

cplx AngularEigensystem::evaluate(std::size_t k, Direction dir) const {
  if (k >= size()) throw BoundsError("AngularEigensystem::evaluate: mode index out of range");
  switch (basis) {
    case BasisTag::circle_fourier: {
      const auto& c = eigenvectors[k];
      const int K = truncation;
      cplx s = 0.0;
      for (int i = 0; i < static_cast<int>(c.size()); ++i) s += c[i] * std::polar(1.0, (i - K) * dir.theta);
      return s / std::sqrt(kTwoPi);
    }
    case BasisTag::sphere_harmonic: {
      const auto& c = eigenvectors[k];
      const int L = truncation;
      cplx s = 0.0;
      for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) {
          const cplx ci = c[l * l + l + m];
          if (ci != cplx{}) s += ci * specfun::real_sph_harm(l, m, dir.theta, dir.phi);
        }
      return s;
    }
    case BasisTag::analytic_constant:
      if (dimension != 3) throw ConfigError("AngularEigensystem::evaluate: analytic harmonics only evaluated for N = 3");
      return specfun::sph_harm(degree[k], order[k], dir.theta, dir.phi);
  }
  return {};
}

double AngularEigensystem::max_abs(std::size_t k) const {
  if (k >= size()) throw BoundsError("AngularEigensystem::max_abs: mode index out of range");
  double best = 0.0;
  if (dimension == 2) {
    for (int i = 0; i < 2048; ++i) best = std::max(best, std::abs(evaluate(k, {kTwoPi * i / 2048, 0.0})));
    return best;
  }
  if (basis == BasisTag::analytic_constant) {
    // |Y_l^m| does not depend on the longitude
    for (int i = 0; i <= 4096; ++i) {
      best = std::max(best, std::abs(evaluate(k, {std::numbers::pi * i / 4096, 0.0})));
    }
    return best;
  }
  for (int i = 0; i <= 256; ++i)
    for (int j = 0; j < 512; ++j)
      best = std::max(best, std::abs(evaluate(k, {std::numbers::pi * i / 256, kTwoPi * j / 512})));
  return best;
}

}  // namespace schroflow::angular
