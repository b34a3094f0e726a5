#pragma once

#include <vector>

namespace schroflow {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

/// Radial sample points with attached quadrature weights for integrals over (0, R].
/// Weights integrate against dr; callers supply the r^{N-1} Jacobian themselves.
struct RadialGrid {
  std::vector<double> r;
  std::vector<double> w;

  std::size_t size() const noexcept { return r.size(); }
  double r_max() const { return r.back(); }
};

/// Composite Gauss-Legendre on (0, R]: `panels` equal panels of `order` nodes,
/// with the first panel replaced by `grading_levels` geometrically shrinking
/// panels (ratio `grading_ratio`) so integrands like r^p, p > -1, converge
/// quickly at the origin.
struct RadialQuadratureSpec {
  double outer_radius = 30.0;
  int panels = 64;
  int order = 8;
  int grading_levels = 12;
  double grading_ratio = 0.2;
};

RadialGrid make_radial_grid(const RadialQuadratureSpec& spec);

/// Uniform midpoint grid r_i = (i + 1/2) h with weights h.
RadialGrid make_midpoint_grid(double outer_radius, int points);

/// Logarithmically spaced sample radii in [lo, hi], both ends included; weights are zero.
RadialGrid make_log_grid(double lo, double hi, int points);

}  // namespace schroflow
