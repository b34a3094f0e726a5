#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schroflow/angular.hpp"
#include "schroflow/quadrature.hpp"
#include "schroflow/specfun.hpp"
#include "schroflow/state.hpp"

namespace schroflow::oscillator {

using cplx = std::complex<double>;

enum class DecayClass { classical_candidate, loss_of_decay, invalid };

std::string_view to_string(DecayClass c);

struct SpectralRow {
  int k = 1;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Frequency bookkeeping for T = H + |x|^2/4:
///   alpha_k = (N-2)/2 - sqrt(((N-2)/2)^2 + mu_k),  beta_k = sqrt(((N-2)/2)^2 + mu_k).
/// Rows whose radicand is negative carry NaN indices; the table is then not Hardy-admissible.
struct SpectralTable {
  int dimension = 3;
  std::vector<SpectralRow> rows;
  bool hardy_ok = false;
  DecayClass decay_class = DecayClass::invalid;
  /// Angular system the rows came from; used to evaluate psi_k.
  std::shared_ptr<const angular::AngularEigensystem> angular;

  int k_max() const noexcept { return static_cast<int>(rows.size()); }
  /// 1-based access; throws BoundsError.
  const SpectralRow& row(int k) const;
  double mu(int k) const { return row(k).mu; }
  double alpha(int k) const { return row(k).alpha; }
  double beta(int k) const { return row(k).beta; }

  /// "k,mu,alpha,beta" header plus one line per row, %.17g.
  std::string to_csv() const;
};

SpectralTable build_table(const angular::AngularEigensystem& eigsys, int N, int k_max);

/// Same bookkeeping from bare eigenvalues (ascending).
SpectralTable build_table(std::span<const double> mu, int N);

/// Oscillator quantum numbers: radial n >= 0, angular j >= 1.
struct ModeIndex {
  int n = 0;
  int j = 1;
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// gamma_{n,j} = 2n - alpha_j + N/2.
double gamma_of(ModeIndex index, const SpectralTable& table);

/// All (n, j) with j <= K_max, n <= n_cap and |gamma_{n,j} - gamma| <= 1e-9, ordered by (j, n).
std::vector<ModeIndex> level_multiplicity(double gamma, const SpectralTable& table, int n_cap);

/// Normalized oscillator eigenfunction V_{n,j} / |V_{n,j}|.
struct NormalizedMode {
  ModeIndex index;
  int dimension = 3;
  double gamma = 0.0;
  double alpha = 0.0;
  /// |V_{n,j}|_{L^2(R^N)}
  double norm = 1.0;
  specfun::PolySpec poly{0, 1.0};
};

NormalizedMode make_mode(ModeIndex index, const SpectralTable& table, const RadialQuadratureSpec& quad = {});

/// |V_{n,j}|^2 = 2^{b-1} n! Gamma(b)^2 / Gamma(b+n), b = N/2 - alpha_j, from Laguerre orthogonality.
double closed_form_norm_squared(int n, int N, double alpha);

/// Radial part r^{-alpha} e^{-r^2/4} P(r^2/2) / |V|, r > 0.
double radial_profile(const NormalizedMode& mode, double r);
/// r^{alpha} times the radial part; finite at r = 0.
double radial_profile_weighted(const NormalizedMode& mode, double r);

/// Full value r^{-alpha} e^{-r^2/4} P(r^2/2) psi / |V|.
cplx eval_mode(const NormalizedMode& mode, double r, cplx angular_value);
cplx eval_mode_weighted(const NormalizedMode& mode, double r, cplx angular_value);

/// Radial profile of the mode sampled on a grid, packaged as a single-mode state.
SeparatedState sample_mode(const NormalizedMode& mode, const RadialGrid& grid);

struct Projection {
  cplx coefficient;
  /// The grid has fewer than 16 points per unit radius over the mode's support.
  bool resolution_warning = false;
};

/// c = int u conj(V~) dx, reduced by angular orthogonality to the radial quadrature of
/// f_j conj(radial part) r^{N-1} on the state's grid. Exactly zero when the state has no mode j.
Projection project(const SeparatedState& state, const NormalizedMode& mode);

/// The first `count` modes in order of (gamma, j, n).
std::vector<ModeIndex> lowest_modes(const SpectralTable& table, int count, int n_cap = 64);

}  // namespace schroflow::oscillator
