#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace schroflow::angular {

using cplx = std::complex<double>;

/// Constant scalar potential a(theta) = value.
struct ConstantCoefficient {
  double value = 0.0;
};

/// Real function on the circle given by Fourier coefficients
/// f_q = (1/2pi) int f(theta) e^{-iq theta} dtheta for |q| <= max_q().
class CircleFourier {
 public:
  CircleFourier() : coeffs_{cplx{}} {}
  /// coeffs[q + Q] holds f_q for q = -Q..Q; size must be odd.
  explicit CircleFourier(std::vector<cplx> coeffs);
  /// Direct DFT of uniform samples f(2 pi i / M), i = 0..M-1, truncated at |q| <= max_q.
  static CircleFourier from_samples(std::span<const double> samples, int max_q);
  static CircleFourier constant(double value);

  int max_q() const noexcept { return static_cast<int>(coeffs_.size() / 2); }
  /// f_q, zero outside the stored band.
  cplx at(int q) const noexcept;
  /// Largest |f_{-q} - conj(f_q)| over the band.
  double conjugate_symmetry_defect() const noexcept;
  double evaluate(double theta) const;

 private:
  std::vector<cplx> coeffs_;
};

/// Point on S^2 (colatitude, longitude), or on S^1 (theta only).
struct Direction {
  double theta = 0.0;
  double phi = 0.0;
};

/// a(theta) on S^2 evaluated pointwise.
using SphereFunction = std::function<double(double theta, double phi)>;

using ScalarCoefficient = std::variant<ConstantCoefficient, CircleFourier, SphereFunction>;

/// Angular hamiltonian L = (-i grad_S + A)^2 + a on S^{N-1}.
/// A is only representable on the circle, as its tangential component alpha(theta).
struct AngularProblem {
  int dimension = 3;
  ScalarCoefficient scalar = ConstantCoefficient{};
  std::optional<CircleFourier> magnetic;
  /// K (circle modes |m| <= K) or L_max (sphere degree).
  int truncation = 8;
  /// Sphere quadrature; 0 selects the floor 2 L_max + 2 (colatitude) and 4 L_max + 4 (longitude).
  int sphere_theta_nodes = 0;
  int sphere_phi_nodes = 0;
};

/// Dense complex Hermitian matrix, row-major.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t n) : n_(n), data_(n * n) {}
  static HermitianMatrix diagonal(std::span<const double> d);

  std::size_t size() const noexcept { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  /// max |M_ij - conj(M_ji)|
  double hermiticity_defect() const noexcept;
  double frobenius_norm() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> data_;
};

enum class BasisTag { circle_fourier, sphere_harmonic, analytic_constant };

std::string_view to_string(BasisTag tag);

/// Eigenpairs of L, ascending, eigenvalues repeated by multiplicity.
///
/// Coefficients refer to the declared basis: e^{im theta}/sqrt(2 pi) with index
/// m + K on the circle, real spherical harmonics with index l^2 + l + m on the
/// sphere. The analytic branch stores no coefficient arrays, only the harmonic
/// degree and order of each mode.
struct AngularEigensystem {
  BasisTag basis = BasisTag::analytic_constant;
  int dimension = 3;
  int truncation = 0;
  std::vector<double> eigenvalues;
  std::vector<std::vector<cplx>> eigenvectors;
  /// analytic branch: harmonic degree l and order m of each mode
  std::vector<int> degree;
  std::vector<int> order;
  double residual_bound = 0.0;
  /// constant scalar coefficient, when the problem had one
  std::optional<double> constant_a;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  /// psi_k at a direction; k is zero-based.
  cplx evaluate(std::size_t k, Direction dir) const;
  /// Sampled max over the sphere of |psi_k|.
  double max_abs(std::size_t k) const;
};

struct EigenResult {
  std::vector<double> values;
  std::vector<std::vector<cplx>> vectors;
  double residual = 0.0;
  double orthogonality_defect = 0.0;
};

/// Galerkin matrix on the circle, N = 2, basis e^{im theta}, |m| <= K.
HermitianMatrix assemble_circle(const AngularProblem& problem);

/// Galerkin matrix on S^2 over real spherical harmonics of degree <= L_max, A = 0.
HermitianMatrix assemble_sphere(const AngularProblem& problem);

/// Cyclic complex Jacobi. Residual max_k |M v_k - mu_k v_k| <= tol |M|_F or NumericError.
EigenResult eigensolve(const HermitianMatrix& matrix, double tol = 1e-11);

/// Assemble and solve, tagging the result with its basis.
AngularEigensystem solve(const AngularProblem& problem, double tol = 1e-11);

/// mu = l(l + N - 2) + a with the harmonic multiplicity, complete shells, at least `count` modes.
AngularEigensystem constant_a_spectrum(int N, double a, int count);

}  // namespace schroflow::angular
