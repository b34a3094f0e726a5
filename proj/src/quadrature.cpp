#include "schroflow/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "schroflow/errors.hpp"

namespace schroflow {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      // p1 = P_n(z), p0 = P_{n-1}(z)
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    if (n == 1) {
      z = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    gl.nodes[i] = -z;
    gl.nodes[n - 1 - i] = z;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  if (n == 1) gl.weights[0] = 2.0;
  return gl;
}

namespace {
void append_panel(RadialGrid& g, const GaussLegendre& gl, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    g.r.push_back(mid + half * gl.nodes[i]);
    g.w.push_back(half * gl.weights[i]);
  }
}
}  // namespace

RadialGrid make_radial_grid(const RadialQuadratureSpec& spec) {
  if (!(spec.outer_radius > 0.0) || spec.panels < 1 || spec.order < 1 || spec.grading_levels < 0 ||
      !(spec.grading_ratio > 0.0 && spec.grading_ratio < 1.0)) {
    throw ConfigError("make_radial_grid: invalid quadrature spec");
  }
  const GaussLegendre gl = gauss_legendre(spec.order);
  const double h = spec.outer_radius / spec.panels;
  RadialGrid g;
  g.r.reserve(static_cast<std::size_t>(spec.order) * (spec.panels + spec.grading_levels));
  g.w.reserve(g.r.capacity());
  // first panel (0, h], graded toward the origin
  std::vector<double> edges{h};
  for (int k = 0; k < spec.grading_levels; ++k) edges.push_back(edges.back() * spec.grading_ratio);
  edges.push_back(0.0);
  for (std::size_t k = edges.size() - 1; k >= 1; --k) append_panel(g, gl, edges[k], edges[k - 1]);
  for (int p = 1; p < spec.panels; ++p) append_panel(g, gl, p * h, (p + 1) * h);
  return g;
}

RadialGrid make_midpoint_grid(double outer_radius, int points) {
  if (!(outer_radius > 0.0) || points < 1) throw ConfigError("make_midpoint_grid: invalid grid");
  RadialGrid g;
  const double h = outer_radius / points;
  g.r.resize(points);
  g.w.assign(points, h);
  for (int i = 0; i < points; ++i) g.r[i] = (i + 0.5) * h;
  return g;
}

RadialGrid make_log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) throw ConfigError("make_log_grid: invalid window");
  RadialGrid g;
  g.r.resize(points);
  g.w.assign(points, 0.0);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) g.r[i] = std::exp(a + (b - a) * i / (points - 1));
  g.r.front() = lo;
  g.r.back() = hi;
  return g;
}

}  // namespace schroflow
