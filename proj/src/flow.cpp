#include "schroflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "schroflow/errors.hpp"

namespace schroflow::flow {

cplx i_pow_minus(double beta) { return std::polar(1.0, -0.5 * std::numbers::pi * beta); }

namespace {

void require_hardy(const SpectralTable& table, const char* who) {
  if (!table.hardy_ok) throw DomainError(std::string(who) + ": Hardy condition violated");
}

cplx closed_form_core(const NormalizedMode& mode, double r, double t) {
  const double s2 = 1.0 + t * t;
  const double amp = std::pow(s2, -0.25 * mode.dimension + 0.5 * mode.alpha);
  const double radial = std::exp(-0.25 * r * r / s2) * mode.poly(0.5 * r * r / s2) / mode.norm;
  const cplx phase = std::polar(1.0, 0.25 * r * r * t / s2 - mode.gamma * std::atan(t));
  return amp * radial * phase;
}

}  // namespace

cplx evolve_mode_closed_form(const NormalizedMode& mode, const SpectralTable& table, double r, double t) {
  require_hardy(table, "evolve_mode_closed_form");
  if (!(r > 0.0)) throw DomainError("evolve_mode_closed_form: r must be > 0");
  const double s2 = 1.0 + t * t;
  const double amp = std::pow(s2, -0.25 * mode.dimension + 0.5 * mode.alpha);
  const double radial = std::pow(r, -mode.alpha) * (std::exp(-0.25 * r * r / s2) * mode.poly(0.5 * r * r / s2) / mode.norm);
  const cplx phase = std::polar(1.0, 0.25 * r * r * t / s2 - mode.gamma * std::atan(t));
  return amp * radial * phase;
}

cplx evolve_mode_closed_form_weighted(const NormalizedMode& mode, const SpectralTable& table, double r, double t) {
  require_hardy(table, "evolve_mode_closed_form_weighted");
  if (!(r >= 0.0)) throw DomainError("evolve_mode_closed_form_weighted: r must be >= 0");
  return closed_form_core(mode, r, t);
}

SeparatedState sample_evolved_mode(const NormalizedMode& mode, const SpectralTable& table, const RadialGrid& grid, double t) {
  SeparatedState s;
  s.dimension = mode.dimension;
  s.grid = grid;
  auto& f = s.profiles[mode.index.j];
  f.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = evolve_mode_closed_form(mode, table, grid.r[i], t);
  return s;
}

cplx free_gaussian_evolved(int N, double r, double t) {
  const cplx z(1.0, t);
  return std::pow(z, -0.5 * N) * std::exp(-0.25 * r * r / z);
}

SeparatedState pseudoconformal(const SeparatedState& state, double t, PseudoconformalDirection direction) {
  state.validate();
  const double s = std::sqrt(1.0 + t * t);
  const int N = state.dimension;
  SeparatedState out;
  out.dimension = N;
  out.table = state.table;
  const std::size_t M = state.grid.size();
  out.grid.r.resize(M);
  out.grid.w.resize(M);
  const bool fwd = direction == PseudoconformalDirection::forward;
  for (std::size_t i = 0; i < M; ++i) {
    out.grid.r[i] = fwd ? state.grid.r[i] / s : state.grid.r[i] * s;
    out.grid.w[i] = fwd ? state.grid.w[i] / s : state.grid.w[i] * s;
  }
  const double amp = std::pow(s, fwd ? 0.5 * N : -0.5 * N);
  for (const auto& [j, f] : state.profiles) {
    auto& g = out.profiles[j];
    g.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
      // |x|^2 is the radius of the phi variable in both directions
      const double x = fwd ? out.grid.r[i] : state.grid.r[i];
      g[i] = amp * f[i] * std::polar(1.0, (fwd ? -0.25 : 0.25) * t * x * x);
    }
  }
  return out;
}

double heat_self_similar_radial(const SpectralTable& table, int k, double r, double t) {
  require_hardy(table, "heat_self_similar");
  if (!(t > 0.0)) throw DomainError("heat_self_similar: t must be > 0");
  if (!(r > 0.0)) throw DomainError("heat_self_similar: r must be > 0");
  const double alpha = table.alpha(k);
  return std::pow(t, -0.5 * table.dimension + alpha) * std::pow(r, -alpha) * std::exp(-0.25 * r * r / t);
}

cplx heat_self_similar(int N, double a, int k, double r, double t, cplx angular_value) {
  if (k < 1) throw BoundsError("heat_self_similar: mode index must be >= 1");
  const auto table = oscillator::build_table(angular::constant_a_spectrum(N, a, k), N, k);
  return heat_self_similar_radial(table, k, r, t) * angular_value;
}

HeatResidual heat_residual(const SpectralTable& table, int k, double r_lo, double r_hi, double t_lo, double t_hi,
                           double dr, double dt) {
  if (!(r_lo > dr) || !(r_hi > r_lo) || !(t_lo > dt) || !(t_hi >= t_lo)) {
    throw ConfigError("heat_residual: invalid sampling window");
  }
  const double N = table.dimension;
  const double mu = table.mu(k);
  auto v = [&](double r, double t) { return heat_self_similar_radial(table, k, r, t); };
  HeatResidual out;
  const int nr = static_cast<int>(std::lround((r_hi - r_lo) / dr));
  const int nt = 100;
  for (int it = 0; it <= nt; ++it) {
    const double t = t_lo + (t_hi - t_lo) * it / nt;
    for (int ir = 0; ir <= nr; ++ir) {
      const double r = r_lo + ir * dr;
      const double v0 = v(r, t);
      const double vt = (v(r, t + dt) - v(r, t - dt)) / (2.0 * dt);
      const double vp = v(r + dr, t);
      const double vm = v(r - dr, t);
      const double vrr = (vp - 2.0 * v0 + vm) / (dr * dr);
      const double vr = (vp - vm) / (2.0 * dr);
      const double res = vt - vrr - (N - 1.0) / r * vr + mu / (r * r) * v0;
      out.max_residual = std::max(out.max_residual, std::abs(res));
      out.max_value = std::max(out.max_value, std::abs(v0));
    }
  }
  return out;
}

WeightedNorm weighted_sup_norm(const SeparatedState& state, double w, double r_lo, double r_hi) {
  state.validate();
  if (!state.table || !state.table->angular) throw ConfigError("weighted_sup_norm: state carries no angular system");
  WeightedNorm out;
  bool any = false;
  for (const auto& [j, f] : state.profiles) {
    const double amax = state.table->angular->max_abs(static_cast<std::size_t>(j - 1));
    double best = 0.0;
    for (std::size_t i = 0; i < state.grid.size(); ++i) {
      const double r = state.grid.r[i];
      if (r < r_lo || r > r_hi) continue;
      any = true;
      best = std::max(best, std::pow(r, w) * std::abs(f[i]));
    }
    out.per_mode[j] = best * amax;
    out.combined += best * amax;
  }
  if (!any) throw ConfigError("weighted_sup_norm: no grid radii inside the window");
  return out;
}

double weighted_sup_norm(const std::function<double(double)>& weighted_modulus, std::span<const double> radii,
                         double r_lo, double r_hi, double angular_max) {
  double best = 0.0;
  bool any = false;
  for (double r : radii) {
    if (r < r_lo || r > r_hi) continue;
    any = true;
    best = std::max(best, weighted_modulus(r));
  }
  if (!any) throw ConfigError("weighted_sup_norm: no sample radii inside the window");
  return best * angular_max;
}

namespace {

struct Line {
  double slope;
  double intercept;
  double r_squared;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (l.intercept + l.slope * x[i]);
    ss_res += e * e;
  }
  l.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return l;
}

}  // namespace

DecayReport decay_fit(std::span<const double> times, std::span<const double> norms, double weight_exponent) {
  if (times.size() != norms.size()) throw ConfigError("decay_fit: times and norms differ in length");
  if (times.size() < 4) throw ConfigError("decay_fit: at least 4 samples required");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw ConfigError("decay_fit: times must be positive and strictly increasing");
    }
    if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) throw DomainError("decay_fit: norms must be positive and finite");
  }
  DecayReport rep;
  rep.times.assign(times.begin(), times.end());
  rep.norms.assign(norms.begin(), norms.end());
  rep.weight_exponent = weight_exponent;
  std::vector<double> lx(times.size()), lb(times.size()), ly(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    lx[i] = std::log(times[i]);
    lb[i] = 0.5 * std::log1p(times[i] * times[i]);
    ly[i] = std::log(norms[i]);
  }
  const Line fit = least_squares(lx, ly);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r_squared = fit.r_squared;
  rep.bracket_slope = least_squares(lb, ly).slope;
  return rep;
}

std::vector<double> dyadic_times(int lo, int hi) {
  std::vector<double> t;
  for (int e = lo; e <= hi; ++e) t.push_back(std::ldexp(1.0, e));
  return t;
}

}  // namespace schroflow::flow
