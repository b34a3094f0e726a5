#include "schroflow/state.hpp"

#include <cmath>

#include "schroflow/errors.hpp"

namespace schroflow {

double SeparatedState::l2_norm() const {
  double s = 0.0;
  for (const auto& [j, f] : profiles) {
    for (std::size_t i = 0; i < f.size(); ++i) s += grid.w[i] * std::norm(f[i]) * std::pow(grid.r[i], dimension - 1.0);
  }
  return std::sqrt(s);
}

void SeparatedState::validate() const {
  if (profiles.empty()) throw ConfigError("SeparatedState: no angular modes");
  if (grid.r.size() != grid.w.size()) throw ConfigError("SeparatedState: grid weights do not match radii");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid.r[i] > 0.0) || (i > 0 && !(grid.r[i] > grid.r[i - 1]))) {
      throw ConfigError("SeparatedState: grid must be strictly increasing and positive");
    }
  }
  for (const auto& [j, f] : profiles) {
    if (j < 1) throw ConfigError("SeparatedState: angular mode indices are 1-based");
    if (f.size() != grid.size()) throw ConfigError("SeparatedState: profile length does not match the grid");
  }
}

}  // namespace schroflow
