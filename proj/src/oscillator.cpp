#include "schroflow/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "schroflow/errors.hpp"

namespace schroflow::oscillator {

std::string_view to_string(DecayClass c) {
  switch (c) {
    case DecayClass::classical_candidate: return "classical_candidate";
    case DecayClass::loss_of_decay: return "loss_of_decay";
    case DecayClass::invalid: return "invalid";
  }
  return "invalid";
}

const SpectralRow& SpectralTable::row(int k) const {
  if (k < 1 || k > k_max()) throw BoundsError("SpectralTable: mode index " + std::to_string(k) + " out of range");
  return rows[k - 1];
}

std::string SpectralTable::to_csv() const {
  std::string out = "k,mu,alpha,beta\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.k, r.mu, r.alpha, r.beta);
    out += buf;
  }
  return out;
}

SpectralTable build_table(std::span<const double> mu, int N) {
  if (N < 2) throw ConfigError("build_table: dimension must be >= 2");
  if (mu.empty()) throw BoundsError("build_table: no eigenvalues");
  SpectralTable t;
  t.dimension = N;
  const double half = 0.5 * (N - 2);
  const double half2 = half * half;
  t.rows.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    SpectralRow r;
    r.k = static_cast<int>(i) + 1;
    r.mu = mu[i];
    const double rad = half2 + mu[i];
    if (rad >= 0.0) {
      r.beta = std::sqrt(rad);
      r.alpha = half - r.beta;
    } else {
      r.beta = std::numeric_limits<double>::quiet_NaN();
      r.alpha = std::numeric_limits<double>::quiet_NaN();
    }
    t.rows.push_back(r);
  }
  t.hardy_ok = mu[0] > -half2;
  if (!t.hardy_ok) {
    t.decay_class = DecayClass::invalid;
  } else {
    t.decay_class = t.rows[0].alpha > 0.0 ? DecayClass::loss_of_decay : DecayClass::classical_candidate;
  }
  return t;
}

SpectralTable build_table(const angular::AngularEigensystem& eigsys, int N, int k_max) {
  if (eigsys.dimension != N) throw ConfigError("build_table: eigensystem dimension does not match N");
  if (k_max < 1 || static_cast<std::size_t>(k_max) > eigsys.size()) {
    throw BoundsError("build_table: K_max exceeds the available angular modes");
  }
  SpectralTable t = build_table(std::span<const double>(eigsys.eigenvalues.data(), k_max), N);
  t.angular = std::make_shared<const angular::AngularEigensystem>(eigsys);
  return t;
}

double gamma_of(ModeIndex index, const SpectralTable& table) {
  if (index.n < 0) throw BoundsError("gamma_of: negative radial index");
  return 2.0 * index.n - table.alpha(index.j) + 0.5 * table.dimension;
}

std::vector<ModeIndex> level_multiplicity(double gamma, const SpectralTable& table, int n_cap) {
  std::vector<ModeIndex> out;
  for (int j = 1; j <= table.k_max(); ++j) {
    for (int n = 0; n <= n_cap; ++n) {
      if (std::abs(gamma_of({n, j}, table) - gamma) <= 1e-9) out.push_back({n, j});
    }
  }
  return out;
}

double closed_form_norm_squared(int n, int N, double alpha) {
  const double b = 0.5 * N - alpha;
  // 2^{b-1} n! Gamma(b)^2 / Gamma(b+n), in logs
  const double log_v = (b - 1.0) * std::log(2.0) + std::lgamma(n + 1.0) + 2.0 * std::lgamma(b) - std::lgamma(b + n);
  return std::exp(log_v);
}

NormalizedMode make_mode(ModeIndex index, const SpectralTable& table, const RadialQuadratureSpec& quad) {
  if (!table.hardy_ok) throw DomainError("make_mode: Hardy condition violated, the oscillator basis does not exist");
  const double alpha = table.alpha(index.j);
  NormalizedMode m;
  m.index = index;
  m.dimension = table.dimension;
  m.gamma = gamma_of(index, table);
  m.alpha = alpha;
  m.poly = specfun::PolySpec(index.n, 0.5 * table.dimension - alpha);
  m.norm = 1.0;
  const RadialGrid g = make_radial_grid(quad);
  const double p = table.dimension - 1.0 - 2.0 * alpha;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.r[i];
    const double pr = m.poly(0.5 * r * r);
    s += g.w[i] * std::pow(r, p) * std::exp(-0.5 * r * r) * pr * pr;
  }
  m.norm = std::sqrt(s);
  return m;
}

double radial_profile_weighted(const NormalizedMode& mode, double r) {
  if (!(r >= 0.0)) throw DomainError("radial_profile_weighted: r must be >= 0");
  return std::exp(-0.25 * r * r) * mode.poly(0.5 * r * r) / mode.norm;
}

double radial_profile(const NormalizedMode& mode, double r) {
  if (!(r > 0.0)) throw DomainError("radial_profile: r must be > 0");
  return std::pow(r, -mode.alpha) * radial_profile_weighted(mode, r);
}

cplx eval_mode(const NormalizedMode& mode, double r, cplx angular_value) {
  return radial_profile(mode, r) * angular_value;
}

cplx eval_mode_weighted(const NormalizedMode& mode, double r, cplx angular_value) {
  return radial_profile_weighted(mode, r) * angular_value;
}

SeparatedState sample_mode(const NormalizedMode& mode, const RadialGrid& grid) {
  SeparatedState s;
  s.dimension = mode.dimension;
  s.grid = grid;
  auto& f = s.profiles[mode.index.j];
  f.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = radial_profile(mode, grid.r[i]);
  return s;
}

namespace {

// Points per unit radius over the part of the grid where the mode is above 1e-10 of its peak.
bool under_resolved(const RadialGrid& grid, const NormalizedMode& mode) {
  double peak = 0.0;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = std::abs(std::pow(grid.r[i], mode.dimension - 1.0) * radial_profile(mode, grid.r[i]));
    peak = std::max(peak, v[i]);
  }
  std::size_t first = grid.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (v[i] >= 1e-10 * peak) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first >= last) return true;
  const double span = grid.r[last] - grid.r[first];
  return static_cast<double>(last - first + 1) < 16.0 * span;
}

}  // namespace

Projection project(const SeparatedState& state, const NormalizedMode& mode) {
  if (state.dimension != mode.dimension) throw ConfigError("project: dimension mismatch");
  Projection out;
  const auto it = state.profiles.find(mode.index.j);
  if (it == state.profiles.end()) return out;
  const auto& f = it->second;
  if (f.size() != state.grid.size()) throw ConfigError("project: profile does not match the grid");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = state.grid.r[i];
    s += state.grid.w[i] * f[i] * radial_profile(mode, r) * std::pow(r, state.dimension - 1.0);
  }
  out.coefficient = s;
  out.resolution_warning = under_resolved(state.grid, mode);
  return out;
}

std::vector<ModeIndex> lowest_modes(const SpectralTable& table, int count, int n_cap) {
  struct Entry {
    double gamma;
    ModeIndex idx;
  };
  std::vector<Entry> all;
  for (int j = 1; j <= table.k_max(); ++j)
    for (int n = 0; n <= n_cap; ++n) all.push_back({gamma_of({n, j}, table), {n, j}});
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.gamma != b.gamma) return a.gamma < b.gamma;
    if (a.idx.j != b.idx.j) return a.idx.j < b.idx.j;
    return a.idx.n < b.idx.n;
  });
  std::vector<ModeIndex> out;
  for (int i = 0; i < count && i < static_cast<int>(all.size()); ++i) out.push_back(all[i].idx);
  return out;
}

}  // namespace schroflow::oscillator
