#include <algorithm>
#include <cmath>
#include <numeric>

#include "schroflow/angular.hpp"
#include "schroflow/errors.hpp"

namespace schroflow::angular {

namespace {

constexpr int kMaxSweeps = 30;
constexpr double kHermitianTol = 1e-12;
constexpr double kClusterTol = 1e-9;

double off_norm(const HermitianMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) s += 2.0 * std::norm(a(i, j));
  return std::sqrt(s);
}

// Zero a(p, q): a phase on column q makes the pivot real, then a real plane rotation.
void rotate(HermitianMatrix& a, std::vector<cplx>& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.size();
  const cplx g = a(p, q);
  const double mag = std::abs(g);
  const cplx phase = std::conj(g / mag);
  for (std::size_t k = 0; k < n; ++k) {
    a(k, q) *= phase;
    v[k * n + q] *= phase;
  }
  for (std::size_t k = 0; k < n; ++k) a(q, k) *= std::conj(phase);

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v[k * n + p];
    const cplx vkq = v[k * n + q];
    v[k * n + p] = c * vkp - s * vkq;
    v[k * n + q] = s * vkp + c * vkq;
  }
}

std::size_t dominant_index(const std::vector<cplx>& vec) {
  double best = 0.0;
  for (const auto& c : vec) best = std::max(best, std::abs(c));
  for (std::size_t i = 0; i < vec.size(); ++i)
    if (std::abs(vec[i]) >= best * (1.0 - 1e-12)) return i;
  return 0;
}

void fix_phase(std::vector<cplx>& vec) {
  double best = 0.0;
  for (const auto& c : vec) best = std::max(best, std::abs(c));
  for (const auto& c : vec) {
    if (std::abs(c) > 1e-8 * best) {
      const cplx ph = std::conj(c) / std::abs(c);
      for (auto& x : vec) x *= ph;
      return;
    }
  }
}

}  // namespace

EigenResult eigensolve(const HermitianMatrix& matrix, double tol) {
  const std::size_t n = matrix.size();
  if (n == 0) return {};
  if (matrix.hermiticity_defect() > kHermitianTol * std::max(1.0, matrix.frobenius_norm())) {
    throw ConfigError("eigensolve: matrix is not Hermitian");
  }
  HermitianMatrix a = matrix;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  std::vector<cplx> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = matrix.frobenius_norm();
  const double target = std::max(1e-2 * tol, 1e-15) * norm;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > 0.0) rotate(a, v, p, q);
  }

  struct Pair {
    double value;
    std::vector<cplx> vec;
  };
  std::vector<Pair> pairs(n);
  for (std::size_t k = 0; k < n; ++k) {
    pairs[k].value = a(k, k).real();
    pairs[k].vec.resize(n);
    for (std::size_t i = 0; i < n; ++i) pairs[k].vec[i] = v[i * n + k];
    fix_phase(pairs[k].vec);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.value < y.value; });
  // order inside degenerate clusters by the basis index of the dominant coefficient
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    while (hi < n && pairs[hi].value - pairs[hi - 1].value <= kClusterTol * std::max(1.0, std::abs(pairs[hi].value))) ++hi;
    std::stable_sort(pairs.begin() + lo, pairs.begin() + hi,
                     [](const Pair& x, const Pair& y) { return dominant_index(x.vec) < dominant_index(y.vec); });
    lo = hi;
  }

  EigenResult out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (auto& p : pairs) {
    out.values.push_back(p.value);
    out.vectors.push_back(std::move(p.vec));
  }
  for (std::size_t k = 0; k < n; ++k) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += matrix(i, j) * out.vectors[k][j];
      r2 += std::norm(s - out.values[k] * out.vectors[k][i]);
    }
    out.residual = std::max(out.residual, std::sqrt(r2));
  }
  if (norm > 0.0) out.residual /= norm;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < n; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::conj(out.vectors[k][i]) * out.vectors[l][i];
      out.orthogonality_defect = std::max(out.orthogonality_defect, std::abs(s - (k == l ? 1.0 : 0.0)));
    }
  }
  if (out.residual > tol) {
    throw NumericError("eigensolve: Jacobi did not reach the requested residual", out.residual);
  }
  return out;
}

}  // namespace schroflow::angular
