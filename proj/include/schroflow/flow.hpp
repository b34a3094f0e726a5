#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "schroflow/angular.hpp"
#include "schroflow/oscillator.hpp"
#include "schroflow/quadrature.hpp"
#include "schroflow/state.hpp"

namespace schroflow::flow {

using cplx = std::complex<double>;
using oscillator::ModeIndex;
using oscillator::NormalizedMode;
using oscillator::SpectralTable;

/// i^{-beta} on the principal branch, e^{-i pi beta / 2}.
cplx i_pow_minus(double beta);

/// Radial part of e^{-itH} applied to the normalized oscillator mode:
///   (1+t^2)^{-N/4+alpha/2} r^{-alpha} e^{-r^2/(4(1+t^2))} / |V| e^{i r^2 t/(4(1+t^2))} e^{-i gamma arctan t} P(r^2/(2(1+t^2))).
/// Requires a Hardy-admissible table and r > 0.
cplx evolve_mode_closed_form(const NormalizedMode& mode, const SpectralTable& table, double r, double t);
/// r^{alpha} times the above; defined at r = 0.
cplx evolve_mode_closed_form_weighted(const NormalizedMode& mode, const SpectralTable& table, double r, double t);

/// Closed-form evolved mode sampled on a grid as a single-mode state.
SeparatedState sample_evolved_mode(const NormalizedMode& mode, const SpectralTable& table, const RadialGrid& grid, double t);

/// Free Schroedinger evolution of the Gaussian e^{-r^2/4} in R^N: (1+it)^{-N/2} e^{-r^2/(4(1+it))}.
cplx free_gaussian_evolved(int N, double r, double t);

enum class PseudoconformalDirection { forward, backward };

/// Pseudoconformal change of variables phi(x,t) = (1+t^2)^{N/4} u(sqrt(1+t^2) x, t) e^{-it|x|^2/4}.
///
/// Implemented by rescaling the grid rather than interpolating: forward returns
/// phi on the radii r_i / s with weights w_i / s, s = sqrt(1+t^2); backward maps
/// radii and weights by s. Both directions preserve the discrete L^2 norm exactly.
SeparatedState pseudoconformal(const SeparatedState& state, double t, PseudoconformalDirection direction);

enum class KernelPath { mode_sum, legendre_collapsed };

std::string_view to_string(KernelPath path);

/// K (k_start = 1) or the tail kernel K_k (k_start = k), truncated at mode K_trunc.
struct KernelSpec {
  std::shared_ptr<const SpectralTable> table;
  int k_start = 1;
  int k_trunc = 1;
  KernelPath path = KernelPath::mode_sum;

  /// Throws ConfigError unless 1 <= k_start <= k_trunc <= K_max and the path is applicable.
  void validate() const;
};

/// k_trunc covering spherical degree <= l_max for the analytic N = 3 spectrum.
int truncation_for_degree(const SpectralTable& table, int l_max);

struct KernelValue {
  cplx value;
  /// Magnitude bound of the last included eigenvalue cluster.
  double tail_estimate = 0.0;
  bool convergence_warning = false;
};

inline constexpr double kKernelTailWarning = 1e-8;

/// sum_{k=k_start}^{K_trunc} i^{-beta_k} j_{-alpha_k}(rho) psi_k(x) conj(psi_k(y)).
/// The Legendre path (N = 3, constant a) collapses every complete degree shell to
/// (2l+1)/(4 pi) P_l(x.y) and sums partial shells mode by mode.
/// rho = 0 with some alpha_k > 0 in range throws DomainError.
KernelValue kernel_eval(const KernelSpec& spec, angular::Direction x, angular::Direction y, double rho);

/// Same sum with every term multiplied by rho^{w}; finite at rho = 0 when w >= alpha_k for all included k.
KernelValue kernel_eval_weighted(const KernelSpec& spec, angular::Direction x, angular::Direction y, double rho, double w);

struct PropagateOptions {
  /// Output radii; the input grid when empty.
  std::optional<RadialGrid> output_grid;
  int threads = 1;
  /// Minimum quadrature nodes per local phase period at the edge of the data support.
  double min_points_per_period = 8.0;
};

/// Representation-formula propagator, mode by mode:
///   u_j(r,t) = e^{ir^2/4t} / (i (2t)^{N/2}) i^{-beta_j} int j_{-alpha_j}(r rho/2t) e^{i rho^2/4t} f_j(rho) rho^{N-1} drho
/// on the state's quadrature grid. Modes below spec.k_start must be absent (data in the
/// orthogonal complement of the first k-1 modes). Throws NumericError when the input grid
/// resolves the oscillatory integrand with fewer than min_points_per_period nodes.
SeparatedState propagate_representation(const SeparatedState& state, double t, const KernelSpec& spec,
                                        const PropagateOptions& options = {});

/// t^{-N/2+alpha_k} r^{-alpha_k} e^{-r^2/4t} times the angular value, for constant a.
cplx heat_self_similar(int N, double a, int k, double r, double t, cplx angular_value);
/// Same with alpha_k taken from a table.
double heat_self_similar_radial(const SpectralTable& table, int k, double r, double t);

struct HeatResidual {
  double max_residual = 0.0;
  double max_value = 0.0;
  double relative() const { return max_residual / max_value; }
};

/// Centered-difference residual of v_t - v_rr - (N-1)/r v_r + mu_k/r^2 v on
/// [r_lo, r_hi] x [t_lo, t_hi] sampled with steps dr, dt.
HeatResidual heat_residual(const SpectralTable& table, int k, double r_lo, double r_hi, double t_lo, double t_hi,
                           double dr = 1.0 / 200, double dt = 1e-4);

struct WeightedNorm {
  std::map<int, double> per_mode;
  /// Triangle-inequality bound sum_j per_mode[j].
  double combined = 0.0;
};

/// max over grid radii in [r_lo, r_hi] of r^w |f_j(r)| max|psi_j|, per mode and combined.
/// Angular maxima come from state.table; throws ConfigError on an empty window.
WeightedNorm weighted_sup_norm(const SeparatedState& state, double w, double r_lo, double r_hi);

/// Same for a single-mode evaluator returning r^w |u(r)| (excluding the angular factor).
double weighted_sup_norm(const std::function<double(double)>& weighted_modulus, std::span<const double> radii,
                         double r_lo, double r_hi, double angular_max = 1.0);

struct DecayReport {
  std::vector<double> times;
  std::vector<double> norms;
  double weight_exponent = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Fit of log norm against log sqrt(1+t^2), the natural clock of the closed form.
  double bracket_slope = 0.0;
};

/// Least-squares line through (log t, log norm). At least 4 samples, strictly increasing
/// positive times, positive norms.
DecayReport decay_fit(std::span<const double> times, std::span<const double> norms, double weight_exponent = 0.0);

/// Dyadic times 2^lo .. 2^hi.
std::vector<double> dyadic_times(int lo = 0, int hi = 10);

}  // namespace schroflow::flow
