#pragma once

#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "schroflow/quadrature.hpp"

namespace schroflow {

namespace oscillator {
struct SpectralTable;
}

/// u(x) = sum_j f_j(|x|) psi_j(x/|x|), stored as radial profiles on one shared grid.
/// Angular mode indices j are 1-based, matching the spectral table.
struct SeparatedState {
  int dimension = 3;
  RadialGrid grid;
  std::map<int, std::vector<std::complex<double>>> profiles;
  std::shared_ptr<const oscillator::SpectralTable> table;

  /// sum_j int |f_j|^2 r^{N-1} dr with the grid's quadrature weights.
  double l2_norm() const;
  /// Throws ConfigError unless every profile matches the grid and at least one mode is present.
  void validate() const;
};

}  // namespace schroflow
