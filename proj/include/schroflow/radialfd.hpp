#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schroflow/oscillator.hpp"
#include "schroflow/quadrature.hpp"

namespace schroflow::radialfd {

using cplx = std::complex<double>;

/// c_k = mu_k + (N-1)(N-3)/4, the inverse-square strength after w = r^{(N-1)/2} u.
double effective_strength(int N, double mu);

/// Cell-centered radial grid r_i = (i + 1/2) h, i < M, h M = R, for one angular mode.
///
/// The operator A w = -w'' + c/r^2 w is discretized with second differences, an
/// odd ghost value w_{-1} = -w_0 behind the origin, and w_M = 0 at r = R.
struct RadialSchema {
  int dimension = 3;
  double c = 0.0;
  double outer_radius = 30.0;
  int points = 12000;
  double dt = 1e-3;

  static RadialSchema make(int N, double mu, double outer_radius, int points, double dt);

  double h() const { return outer_radius / points; }
  double r(int i) const { return (i + 0.5) * h(); }
  /// Throws ConfigError unless M >= 2, R > 0, dt > 0 and c > -1/4.
  void validate() const;
  /// Diagonal of A; the off-diagonal is -1/h^2.
  std::vector<double> diagonal() const;
};

/// sqrt(h sum |w_i|^2)
double discrete_norm(const RadialSchema& schema, std::span<const cplx> w);
double discrete_norm(const RadialSchema& schema, std::span<const double> w);

/// Complex tridiagonal solve (Thomas), sub/sup of length n-1. NumericError on a vanishing pivot.
std::vector<cplx> solve_tridiagonal(std::span<const cplx> sub, std::span<const cplx> diag, std::span<const cplx> sup,
                                    std::span<const cplx> rhs);

/// Crank-Nicolson for i w_t = A w, with the factorization of I + i dt/2 A cached.
class SchrodingerStepper {
 public:
  explicit SchrodingerStepper(const RadialSchema& schema);
  void step(std::vector<cplx>& w) const;
  void advance(std::vector<cplx>& w, int steps) const;
  const RadialSchema& schema() const noexcept { return schema_; }

 private:
  RadialSchema schema_;
  std::vector<double> a_diag_;
  double a_off_;
  std::vector<cplx> inv_pivot_;
  std::vector<cplx> upper_;
};

/// One Crank-Nicolson step of i w_t = -w_rr + c/r^2 w.
std::vector<cplx> cn_step_schrodinger(const RadialSchema& schema, std::span<const cplx> w);

enum class HeatScheme { crank_nicolson, backward_euler };

/// Implicit stepper for w_t = -A w.
class HeatStepper {
 public:
  HeatStepper(const RadialSchema& schema, HeatScheme scheme);
  void step(std::vector<double>& w) const;
  void advance(std::vector<double>& w, int steps) const;

 private:
  RadialSchema schema_;
  HeatScheme scheme_;
  std::vector<double> a_diag_;
  double a_off_;
  std::vector<double> inv_pivot_;
  std::vector<double> upper_;
};

std::vector<double> implicit_step_heat(const RadialSchema& schema, std::span<const double> w,
                                       HeatScheme scheme = HeatScheme::backward_euler);

/// Number of steps of size dt reaching T; throws ConfigError unless T/dt is an integer within 1e-9.
int step_count(double T, double dt);

struct CompareParams {
  int dimension = 3;
  /// Constant angular potential for the closed-form route.
  double a = -0.1875;
  /// Route-specific values; each must equal `a` when given.
  std::optional<double> kernel_a;
  std::optional<double> fd_a;
  oscillator::ModeIndex mode{0, 1};
  double t = 1.0;
  double r_lo = 0.1;
  double r_hi = 8.0;
  double fd_outer_radius = 30.0;
  int fd_points = 24000;
  double fd_dt = 1e-3;
  RadialQuadratureSpec kernel_quadrature{};
  int threads = 1;
};

struct RouteRun {
  std::string name;
  bool ok = false;
  std::string failure;
  double runtime_seconds = 0.0;
  std::vector<cplx> values;
};

struct PairError {
  std::string first;
  std::string second;
  bool ok = false;
  /// Relative to the first route of the pair.
  double rel_l2 = 0.0;
  double rel_sup = 0.0;
};

struct CompareReport {
  /// Finite-difference nodes inside [r_lo, r_hi]; all routes are sampled there.
  std::vector<double> radii;
  std::vector<RouteRun> routes;
  std::vector<PairError> pairs;
};

/// Closed form, representation formula and Crank-Nicolson for one oscillator mode of a
/// constant-a problem. Route failures are recorded, not thrown; inconsistent parameters throw ConfigError.
CompareReport compare_routes(const CompareParams& params);

}  // namespace schroflow::radialfd
