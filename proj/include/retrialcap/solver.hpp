#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <lapacke.h>

#include "retrialcap/errors.hpp"
#include "retrialcap/generator.hpp"

namespace retrialcap {

enum class Method { replace_column, gth };

inline const char* method_name(Method m) {
  return m == Method::replace_column ? "replace-column" : "gth";
}

struct StationaryDistribution {
  std::vector<double> pi;
  double residual = 0.0;
  Method method = Method::replace_column;
};

/// Max over columns of |sum_i pi_i Q_{i,col}|.
inline double residual_norm(const std::vector<double>& pi,
                            const SparseGenerator& gen) {
  if (static_cast<std::int64_t>(pi.size()) != gen.dim())
    throw domain_error("pi dimension does not match generator");
  std::vector<double> col_sums(gen.dim(), 0.0);
  for (const auto& t : gen.triplets()) col_sums[t.col] += pi[t.row] * t.value;
  double worst = 0.0;
  for (double s : col_sums) worst = std::max(worst, std::abs(s));
  return worst;
}

namespace detail {

// Direct banded route. The transposed balance system Q^T x = 0 is closed
// by anchoring one state's probability at 1 and deleting its row and
// column: the remaining (n-1)x(n-1) minor of Q^T is nonsingular for an
// irreducible generator, and the banded structure (bandwidth m+1)
// survives, unlike appending the dense all-ones normalization row.
// Normalization is applied afterwards. The minor's conditioning scales
// with 1/pi(anchor), so the anchor should sit in a high-probability
// region of the state space.
inline std::vector<double> solve_replace_column(const SparseGenerator& gen,
                                                std::int64_t anchor) {
  const lapack_int n = static_cast<lapack_int>(gen.dim());
  if (n == 1) return {1.0};
  const lapack_int band = static_cast<lapack_int>(gen.level_width());
  const lapack_int nn = n - 1;
  const lapack_int kl = band, ku = band;
  const lapack_int ldab = 2 * kl + ku + 1;

  auto mapped = [anchor](std::int64_t s) { return s < anchor ? s : s - 1; };
  std::vector<double> ab(static_cast<std::size_t>(ldab) * nn, 0.0);
  std::vector<double> rhs(nn, 0.0);
  for (const auto& t : gen.triplets()) {
    // M(i,j) = Q(j,i) for j != anchor != i; rhs_i = -Q(anchor,i).
    if (t.row == anchor) {
      if (t.col != anchor) rhs[mapped(t.col)] -= t.value;
      continue;
    }
    if (t.col == anchor) continue;
    const std::int64_t i = mapped(t.col), j = mapped(t.row);
    ab[static_cast<std::size_t>(j) * ldab + (kl + ku + i - j)] = t.value;
  }

  std::vector<lapack_int> ipiv(std::max<lapack_int>(nn, 1));
  const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, nn, kl, ku, 1,
                                        ab.data(), ldab, ipiv.data(),
                                        rhs.data(), std::max<lapack_int>(nn, 1));
  if (info != 0)
    throw solver_error("banded LU failed (dgbsv info=" + std::to_string(info) +
                       (info > 0 ? ", singular pivot)" : ")"));

  std::vector<double> pi(n, 1.0);
  for (std::int64_t s = 0; s < n; ++s)
    if (s != anchor) pi[s] = rhs[mapped(s)];
  return pi;
}

// Deterministic anchor candidates spread over the state space. The busy-
// channel marginal peaks near the offered load, so moderate-to-high j at
// an empty orbit is tried first; orbit-heavy anchors cover saturated
// regimes.
inline std::vector<std::int64_t> anchor_candidates(const StateSpace& space) {
  const int c = space.channels();
  const int m = space.orbit_capacity();
  std::vector<std::int64_t> out;
  auto add = [&](int j, int k) {
    const std::int64_t idx = space.index({j, k});
    if (std::find(out.begin(), out.end(), idx) == out.end()) out.push_back(idx);
  };
  for (int k : {0, m / 2, m})
    for (int j : {3 * c / 4, c / 2, c, c / 4, 0}) add(j, k);
  return out;
}

// GTH state reduction, subtraction-free. Elimination from the last state
// down creates no fill outside the band, so the cost is O(n * band^2).
inline std::vector<double> solve_gth(const SparseGenerator& gen) {
  const std::int64_t n = gen.dim();
  const std::int64_t b = gen.level_width();
  const std::int64_t w = 2 * b + 1;

  std::vector<double> a(static_cast<std::size_t>(n) * w, 0.0);
  auto at = [&](std::int64_t i, std::int64_t j) -> double& {
    return a[static_cast<std::size_t>(i) * w + (j - i + b)];
  };
  for (const auto& t : gen.triplets())
    if (t.row != t.col) at(t.row, t.col) = t.value;

  std::vector<double> departure(n, 0.0);
  for (std::int64_t k = n - 1; k >= 1; --k) {
    const std::int64_t lo = std::max<std::int64_t>(0, k - b);
    double s = 0.0;
    for (std::int64_t j = lo; j < k; ++j) s += at(k, j);
    if (!(s > 0.0))
      throw solver_error("GTH reduction hit a zero departure rate at state " +
                         std::to_string(k));
    departure[k] = s;
    for (std::int64_t i = lo; i < k; ++i) {
      const double f = at(i, k) / s;
      if (f == 0.0) continue;
      for (std::int64_t j = lo; j < k; ++j)
        if (j != i) at(i, j) += f * at(k, j);
    }
  }

  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  for (std::int64_t k = 1; k < n; ++k) {
    const std::int64_t lo = std::max<std::int64_t>(0, k - b);
    double acc = 0.0;
    for (std::int64_t i = lo; i < k; ++i) acc += pi[i] * at(i, k);
    pi[k] = acc / departure[k];
    if (pi[k] > 1e250) {
      for (std::int64_t i = 0; i <= k; ++i) pi[i] *= 1e-250;
    }
  }
  return pi;
}

}  // namespace detail

inline constexpr double kNegativeClamp = 1e-14;
inline constexpr double kResidualTol = 1e-10;

namespace detail {

// Normalizes, clamps rounding negatives, and verifies the residual.
// Returns an empty string on success, else the contract violation.
inline std::string finalize_distribution(std::vector<double> pi,
                                         const SparseGenerator& gen,
                                         StationaryDistribution& out) {
  double sum = 0.0;
  for (double v : pi) sum += v;
  if (!(sum > 0.0) || !std::isfinite(sum))
    return "stationary solve produced a non-normalizable vector";
  for (double& v : pi) v /= sum;

  double worst_negative = 0.0;
  for (double& v : pi) {
    if (v < 0.0) {
      worst_negative = std::min(worst_negative, v);
      v = 0.0;
    }
  }
  if (worst_negative < -kNegativeClamp)
    return "stationary vector entry " + std::to_string(worst_negative) +
           " below the clamp threshold";
  if (worst_negative < 0.0) {
    sum = 0.0;
    for (double v : pi) sum += v;
    for (double& v : pi) v /= sum;
  }

  const double residual = residual_norm(pi, gen);
  if (residual > kResidualTol)
    return "stationary residual " + std::to_string(residual) +
           " exceeds tolerance (ill-conditioned system?)";
  out.pi = std::move(pi);
  out.residual = residual;
  return {};
}

}  // namespace detail

/// Stationary distribution of an irreducible generator: pi Q = 0, pi e = 1.
/// Deterministic for fixed inputs and method. The replace-column route
/// walks a fixed anchor-candidate list until the solution meets the
/// non-negativity and residual contract.
inline StationaryDistribution solve_stationary(const SparseGenerator& gen,
                                               Method method = Method::replace_column) {
  require_irreducible(gen);

  StationaryDistribution dist;
  dist.method = method;
  std::string error;
  if (method == Method::gth) {
    error = detail::finalize_distribution(detail::solve_gth(gen), gen, dist);
  } else {
    for (std::int64_t anchor : detail::anchor_candidates(gen.space())) {
      std::vector<double> pi;
      try {
        pi = detail::solve_replace_column(gen, anchor);
      } catch (const solver_error& e) {
        error = e.what();
        continue;
      }
      error = detail::finalize_distribution(std::move(pi), gen, dist);
      if (error.empty()) break;
    }
  }
  if (!error.empty()) throw solver_error(error);
  return dist;
}

}  // namespace retrialcap
