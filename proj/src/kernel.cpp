#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "schroflow/errors.hpp"
#include "schroflow/flow.hpp"
#include "schroflow/specfun.hpp"

namespace schroflow::flow {

std::string_view to_string(KernelPath path) {
  return path == KernelPath::legendre_collapsed ? "legendre_collapsed" : "mode_sum";
}

void KernelSpec::validate() const {
  if (!table) throw ConfigError("KernelSpec: no spectral table");
  if (!table->hardy_ok) throw DomainError("KernelSpec: Hardy condition violated");
  if (k_start < 1 || k_start > k_trunc || k_trunc > table->k_max()) {
    throw ConfigError("KernelSpec: need 1 <= k_start <= K_trunc <= K_max");
  }
  if (!table->angular) throw ConfigError("KernelSpec: table carries no angular eigenfunctions");
  if (path == KernelPath::legendre_collapsed) {
    const auto& ang = *table->angular;
    if (table->dimension != 3 || ang.basis != angular::BasisTag::analytic_constant) {
      throw ConfigError("KernelSpec: the Legendre path needs N = 3 with constant a");
    }
  }
}

int truncation_for_degree(const SpectralTable& table, int l_max) {
  if (!table.angular || table.angular->basis != angular::BasisTag::analytic_constant) {
    throw ConfigError("truncation_for_degree: needs the analytic constant-a spectrum");
  }
  const auto& deg = table.angular->degree;
  int k = 0;
  while (k < table.k_max() && deg[k] <= l_max) ++k;
  if (k == table.k_max() && k < static_cast<int>(deg.size()) && deg[k] <= l_max) {
    throw BoundsError("truncation_for_degree: table too short for the requested degree");
  }
  return k;
}

namespace {

// rho^w j_{-alpha}(rho), with the limits at rho = 0.
double weighted_radial(int N, double alpha, double rho, double w) {
  if (rho > 0.0) return std::pow(rho, w) * specfun::j_scaled(N, alpha, rho);
  const double e = w - alpha;
  if (e > 1e-13) return 0.0;
  if (e < -1e-13) throw DomainError("kernel_eval: kernel term diverges at rho = 0");
  return specfun::j_scaled_weighted(N, alpha, 0.0);
}

double dot(angular::Direction x, angular::Direction y) {
  return std::sin(x.theta) * std::sin(y.theta) * std::cos(x.phi - y.phi) + std::cos(x.theta) * std::cos(y.theta);
}

bool same_level(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

}  // namespace

KernelValue kernel_eval_weighted(const KernelSpec& spec, angular::Direction x, angular::Direction y, double rho, double w) {
  spec.validate();
  if (!(rho >= 0.0)) throw DomainError("kernel_eval: rho must be >= 0");
  const auto& table = *spec.table;
  const auto& ang = *table.angular;
  const int N = table.dimension;
  KernelValue out;
  cplx sum = 0.0;

  if (spec.path == KernelPath::legendre_collapsed) {
    const double c = std::clamp(dot(x, y), -1.0, 1.0);
    int k = spec.k_start;
    while (k <= spec.k_trunc) {
      const int l = ang.degree[k - 1];
      const int shell_first = l * l + 1;
      const int shell_last = (l + 1) * (l + 1);
      const double radial = weighted_radial(N, table.alpha(k), rho, w);
      const cplx coef = i_pow_minus(table.beta(k)) * radial;
      double bound;
      if (k == shell_first && spec.k_trunc >= shell_last) {
        sum += coef * ((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * specfun::legendre_p(l, c));
        bound = std::abs(radial) * (2.0 * l + 1.0) / (4.0 * std::numbers::pi);
        k = shell_last + 1;
      } else {
        const int stop = std::min(shell_last, spec.k_trunc);
        cplx part = 0.0;
        bound = 0.0;
        for (int kk = k; kk <= stop; ++kk) {
          const cplx px = ang.evaluate(kk - 1, x);
          const cplx py = ang.evaluate(kk - 1, y);
          part += px * std::conj(py);
          bound += std::abs(px) * std::abs(py);
        }
        sum += coef * part;
        bound *= std::abs(radial);
        k = stop + 1;
      }
      out.tail_estimate = bound;
    }
  } else {
    int k = spec.k_start;
    while (k <= spec.k_trunc) {
      // one Bessel evaluation per eigenvalue cluster
      int stop = k;
      while (stop < spec.k_trunc && same_level(table.mu(stop + 1), table.mu(k))) ++stop;
      const double radial = weighted_radial(N, table.alpha(k), rho, w);
      cplx part = 0.0;
      double bound = 0.0;
      for (int kk = k; kk <= stop; ++kk) {
        const cplx px = ang.evaluate(kk - 1, x);
        const cplx py = ang.evaluate(kk - 1, y);
        part += i_pow_minus(table.beta(kk)) * px * std::conj(py);
        bound += std::abs(px) * std::abs(py);
      }
      sum += radial * part;
      out.tail_estimate = std::abs(radial) * bound;
      k = stop + 1;
    }
  }
  out.value = sum;
  out.convergence_warning = out.tail_estimate > kKernelTailWarning;
  return out;
}

KernelValue kernel_eval(const KernelSpec& spec, angular::Direction x, angular::Direction y, double rho) {
  return kernel_eval_weighted(spec, x, y, rho, 0.0);
}

SeparatedState propagate_representation(const SeparatedState& state, double t, const KernelSpec& spec,
                                        const PropagateOptions& options) {
  state.validate();
  spec.validate();
  if (!(t > 0.0)) throw DomainError("propagate_representation: t must be > 0");
  const auto& table = *spec.table;
  const int N = state.dimension;
  if (N != table.dimension) throw ConfigError("propagate_representation: dimension mismatch between state and kernel");
  const RadialGrid& out_grid = options.output_grid ? *options.output_grid : state.grid;
  if (out_grid.size() == 0) throw ConfigError("propagate_representation: empty output grid");
  for (double r : out_grid.r)
    if (!(r > 0.0)) throw DomainError("propagate_representation: output radii must be > 0");
  const double r_out_max = out_grid.r_max();
  const auto& rho = state.grid.r;
  const auto& wq = state.grid.w;
  const std::size_t M = rho.size();

  SeparatedState out;
  out.dimension = N;
  out.grid = out_grid;
  out.table = state.table ? state.table : spec.table;

  for (const auto& [j, f] : state.profiles) {
    const bool zero = std::all_of(f.begin(), f.end(), [](cplx v) { return v == cplx{}; });
    auto& u = out.profiles[j];
    u.assign(out_grid.size(), cplx{});
    if (zero) continue;
    if (j < spec.k_start || j > spec.k_trunc) {
      throw ConfigError("propagate_representation: state mode " + std::to_string(j) + " outside the kernel range");
    }
    if (state.table && state.table.get() != spec.table.get() && state.table->alpha(j) != table.alpha(j)) {
      throw ConfigError("propagate_representation: state and kernel use different spectral tables");
    }
    const double alpha = table.alpha(j);

    // integrand weights, trimmed where the datum is negligible
    std::vector<cplx> g(M);
    double peak = 0.0;
    for (std::size_t i = 0; i < M; ++i) peak = std::max(peak, std::abs(f[i]) * std::pow(rho[i], N - 1.0));
    std::size_t first = M, last = 0;
    for (std::size_t i = 0; i < M; ++i) {
      const double mag = std::abs(f[i]) * std::pow(rho[i], N - 1.0);
      if (mag < 1e-16 * peak) continue;
      first = std::min(first, i);
      last = i;
      g[i] = wq[i] * std::polar(1.0, 0.25 * rho[i] * rho[i] / t) * f[i] * std::pow(rho[i], N - 1.0);
    }

    // nodes per local period of e^{i rho^2/4t} j(r rho/2t) at the support edge
    const std::size_t i0 = last >= 4 ? last - 4 : 0;
    const std::size_t i1 = std::min(M - 1, last + 4);
    const double spacing = i1 > i0 ? (rho[i1] - rho[i0]) / static_cast<double>(i1 - i0) : rho[last];
    const double omega = (rho[last] + r_out_max) / (2.0 * t);
    const double per_period = 2.0 * std::numbers::pi / (omega * spacing);
    if (per_period < options.min_points_per_period) {
      throw NumericError("propagate_representation: input grid gives " + std::to_string(per_period) +
                             " nodes per phase period at rho = " + std::to_string(rho[last]) + ", need " +
                             std::to_string(options.min_points_per_period),
                         per_period);
    }

    const cplx pre = i_pow_minus(table.beta(j)) / (cplx(0.0, 1.0) * std::pow(2.0 * t, 0.5 * N));
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t o = lo; o < hi; ++o) {
        const double r = out_grid.r[o];
        cplx s = 0.0;
        for (std::size_t i = first; i <= last; ++i) {
          if (g[i] == cplx{}) continue;
          s += specfun::j_scaled(N, alpha, r * rho[i] / (2.0 * t)) * g[i];
        }
        u[o] = std::polar(1.0, 0.25 * r * r / t) * pre * s;
      }
    };
    const std::size_t n_out = out_grid.size();
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(n_out)));
    if (threads == 1) {
      work(0, n_out);
    } else {
      std::vector<std::jthread> pool;
      for (int p = 0; p < threads; ++p) {
        pool.emplace_back(work, n_out * p / threads, n_out * (p + 1) / threads);
      }
    }
  }
  return out;
}

}  // namespace schroflow::flow
