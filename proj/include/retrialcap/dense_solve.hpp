#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "retrialcap/errors.hpp"
#include "retrialcap/generator.hpp"

namespace retrialcap {

/// Brute-force stationary solve for small instances: dense Gaussian
/// elimination with partial pivoting on Q^T x = 0 with the last equation
/// replaced by the normalization sum(x) = 1. Independent of the banded
/// and GTH production paths; verification use only.
inline std::vector<double> dense_null_space(const SparseGenerator& gen) {
  const std::int64_t n = gen.dim();
  if (n > 5000)
    throw capacity_error("dense_null_space is for small instances only");

  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (const auto& t : gen.triplets()) a[t.col][t.row] = t.value;
  for (std::int64_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;

  for (std::int64_t col = 0; col < n; ++col) {
    std::int64_t pivot = col;
    for (std::int64_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0)
      throw solver_error("dense elimination found a zero pivot");
    std::swap(a[col], a[pivot]);
    for (std::int64_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (std::int64_t cc = col; cc <= n; ++cc) a[r][cc] -= f * a[col][cc];
    }
  }

  std::vector<double> pi(n);
  for (std::int64_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
  return pi;
}

}  // namespace retrialcap
