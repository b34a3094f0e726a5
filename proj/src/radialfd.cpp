#include "schroflow/radialfd.hpp"

#include <cmath>

#include "schroflow/errors.hpp"

namespace schroflow::radialfd {

double effective_strength(int N, double mu) { return mu + 0.25 * (N - 1.0) * (N - 3.0); }

RadialSchema RadialSchema::make(int N, double mu, double outer_radius, int points, double dt) {
  RadialSchema s;
  s.dimension = N;
  s.c = effective_strength(N, mu);
  s.outer_radius = outer_radius;
  s.points = points;
  s.dt = dt;
  s.validate();
  return s;
}

void RadialSchema::validate() const {
  if (points < 2) throw ConfigError("RadialSchema: need at least 2 grid points");
  if (!(outer_radius > 0.0)) throw ConfigError("RadialSchema: outer radius must be positive");
  if (!(dt > 0.0)) throw ConfigError("RadialSchema: time step must be positive");
  if (!(c > -0.25)) throw DomainError("RadialSchema: c <= -1/4 violates the Hardy condition for this mode");
}

std::vector<double> RadialSchema::diagonal() const {
  const double h2 = h() * h();
  std::vector<double> d(points);
  for (int i = 0; i < points; ++i) d[i] = 2.0 / h2 + c / (r(i) * r(i));
  // odd ghost w_{-1} = -w_0
  d[0] += 1.0 / h2;
  return d;
}

double discrete_norm(const RadialSchema& schema, std::span<const cplx> w) {
  double s = 0.0;
  for (const auto& v : w) s += std::norm(v);
  return std::sqrt(schema.h() * s);
}

double discrete_norm(const RadialSchema& schema, std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return std::sqrt(schema.h() * s);
}

namespace {

constexpr double kTinyPivot = 1e-300;

// LU of a symmetric tridiagonal with constant off-diagonal `off`: stores 1/u_i and off/u_{i-1}.
template <class T>
void factor(const std::vector<T>& diag, T off, std::vector<T>& inv_pivot, std::vector<T>& lower) {
  const std::size_t n = diag.size();
  inv_pivot.resize(n);
  lower.assign(n, T{});
  T u = diag[0];
  for (std::size_t i = 0;; ++i) {
    if (std::abs(u) < kTinyPivot) throw NumericError("tridiagonal factorization: vanishing pivot", std::abs(u));
    inv_pivot[i] = T(1) / u;
    if (i + 1 == n) break;
    lower[i + 1] = off * inv_pivot[i];
    u = diag[i + 1] - lower[i + 1] * off;
  }
}

template <class T>
void substitute(const std::vector<T>& inv_pivot, const std::vector<T>& lower, T off, std::vector<T>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1; i < n; ++i) x[i] -= lower[i] * x[i - 1];
  x[n - 1] *= inv_pivot[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - off * x[i + 1]) * inv_pivot[i];
}

template <class T>
void check_profile(const RadialSchema& s, std::span<const T> w) {
  if (w.size() != static_cast<std::size_t>(s.points)) throw ConfigError("radialfd: profile does not match the schema grid");
}

}  // namespace

std::vector<cplx> solve_tridiagonal(std::span<const cplx> sub, std::span<const cplx> diag, std::span<const cplx> sup,
                                    std::span<const cplx> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || rhs.size() != n || sub.size() + 1 != n || sup.size() + 1 != n) {
    throw ConfigError("solve_tridiagonal: inconsistent band sizes");
  }
  std::vector<cplx> c(n), x(rhs.begin(), rhs.end());
  cplx u = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(u) < kTinyPivot) throw NumericError("solve_tridiagonal: vanishing pivot", std::abs(u));
    if (i + 1 < n) c[i] = sup[i] / u;
    x[i] /= u;
    if (i + 1 < n) {
      u = diag[i + 1] - sub[i] * c[i];
      x[i + 1] -= sub[i] * x[i];
    }
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

SchrodingerStepper::SchrodingerStepper(const RadialSchema& schema) : schema_(schema) {
  schema_.validate();
  a_diag_ = schema_.diagonal();
  a_off_ = -1.0 / (schema_.h() * schema_.h());
  const cplx half(0.0, 0.5 * schema_.dt);
  std::vector<cplx> d(a_diag_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 + half * a_diag_[i];
  factor(d, half * a_off_, inv_pivot_, upper_);
}

void SchrodingerStepper::step(std::vector<cplx>& w) const {
  check_profile<cplx>(schema_, w);
  const std::size_t n = w.size();
  const cplx half(0.0, 0.5 * schema_.dt);
  std::vector<cplx> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx aw = a_diag_[i] * w[i];
    if (i > 0) aw += a_off_ * w[i - 1];
    if (i + 1 < n) aw += a_off_ * w[i + 1];
    rhs[i] = w[i] - half * aw;
  }
  substitute(inv_pivot_, upper_, half * a_off_, rhs);
  w = std::move(rhs);
}

void SchrodingerStepper::advance(std::vector<cplx>& w, int steps) const {
  for (int s = 0; s < steps; ++s) step(w);
}

std::vector<cplx> cn_step_schrodinger(const RadialSchema& schema, std::span<const cplx> w) {
  std::vector<cplx> out(w.begin(), w.end());
  SchrodingerStepper(schema).step(out);
  return out;
}

HeatStepper::HeatStepper(const RadialSchema& schema, HeatScheme scheme) : schema_(schema), scheme_(scheme) {
  schema_.validate();
  a_diag_ = schema_.diagonal();
  a_off_ = -1.0 / (schema_.h() * schema_.h());
  const double theta = scheme_ == HeatScheme::crank_nicolson ? 0.5 : 1.0;
  std::vector<double> d(a_diag_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 + theta * schema_.dt * a_diag_[i];
  factor(d, theta * schema_.dt * a_off_, inv_pivot_, upper_);
}

void HeatStepper::step(std::vector<double>& w) const {
  check_profile<double>(schema_, w);
  const std::size_t n = w.size();
  std::vector<double> rhs(w);
  double theta = 1.0;
  if (scheme_ == HeatScheme::crank_nicolson) {
    theta = 0.5;
    for (std::size_t i = 0; i < n; ++i) {
      double aw = a_diag_[i] * w[i];
      if (i > 0) aw += a_off_ * w[i - 1];
      if (i + 1 < n) aw += a_off_ * w[i + 1];
      rhs[i] = w[i] - 0.5 * schema_.dt * aw;
    }
  }
  substitute(inv_pivot_, upper_, theta * schema_.dt * a_off_, rhs);
  w = std::move(rhs);
}

void HeatStepper::advance(std::vector<double>& w, int steps) const {
  for (int s = 0; s < steps; ++s) step(w);
}

std::vector<double> implicit_step_heat(const RadialSchema& schema, std::span<const double> w, HeatScheme scheme) {
  std::vector<double> out(w.begin(), w.end());
  HeatStepper(schema, scheme).step(out);
  return out;
}

int step_count(double T, double dt) {
  if (!(T >= 0.0) || !(dt > 0.0)) throw ConfigError("step_count: need T >= 0 and dt > 0");
  const double n = T / dt;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) throw ConfigError("step_count: T is not a multiple of dt");
  return static_cast<int>(rounded);
}

}  // namespace schroflow::radialfd
