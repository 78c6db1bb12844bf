#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <vector>

#include "retrialcap/errors.hpp"
#include "retrialcap/model.hpp"

namespace retrialcap {

struct Triplet {
  std::int64_t row = 0;
  std::int64_t col = 0;
  double value = 0.0;
};

/// Small dense matrix used for level-block extraction and test oracles.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Infinitesimal generator in sparse triplet form. Level-major state
/// ordering confines every nonzero to the block-tridiagonal band
/// |level(row) - level(col)| <= 1 with blocks of order m+1.
class SparseGenerator {
public:
  SparseGenerator(StateSpace space, std::vector<Triplet> triplets)
      : space_(space), triplets_(std::move(triplets)) {}

  const StateSpace& space() const { return space_; }
  std::int64_t dim() const { return space_.size(); }
  int level_width() const { return space_.level_width(); }
  const std::vector<Triplet>& triplets() const { return triplets_; }

  /// Per-row entries sorted by column (diagonal included).
  std::vector<std::vector<std::pair<std::int64_t, double>>> rows() const {
    std::vector<std::vector<std::pair<std::int64_t, double>>> r(dim());
    for (const auto& t : triplets_) r[t.row].emplace_back(t.col, t.value);
    for (auto& row : r)
      std::sort(row.begin(), row.end());
    return r;
  }

  void write_coordinate(std::ostream& os) const {
    os << std::setprecision(17);
    for (const auto& t : triplets_)
      os << t.row << ' ' << t.col << ' ' << t.value << '\n';
  }

private:
  StateSpace space_;
  std::vector<Triplet> triplets_;
};

inline constexpr std::int64_t kDefaultStateCap = 10'000'000;

/// Assembles Q from the transition rules. Off-diagonals are merged rates;
/// each diagonal is the negative sum of its row's off-diagonals, so row
/// sums vanish by construction.
inline SparseGenerator build_generator(const ModelParams& params,
                                       std::int64_t state_cap = kDefaultStateCap) {
  params.validate();
  const StateSpace space(params);
  if (space.size() > state_cap)
    throw capacity_error("state space of size " + std::to_string(space.size()) +
                         " exceeds cap " + std::to_string(state_cap));

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(space.size()) * 5);
  for (std::int64_t idx = 0; idx < space.size(); ++idx) {
    const State s = space.state(idx);
    double outflow = 0.0;
    for (const Transition& t : enumerate_transitions(params, s)) {
      triplets.push_back({idx, space.index(t.to), t.rate});
      outflow += t.rate;
    }
    triplets.push_back({idx, idx, -outflow});
  }
  return SparseGenerator(space, std::move(triplets));
}

struct LevelBlocks {
  DenseMatrix lower;     // Q_{l,l-1}; empty at l = 0
  DenseMatrix diagonal;  // Q_{l,l}
  DenseMatrix upper;     // Q_{l,l+1}; empty at l = c
};

inline LevelBlocks extract_level_blocks(const SparseGenerator& gen, int level) {
  const StateSpace& space = gen.space();
  const int c = space.channels();
  if (level < 0 || level > c)
    throw domain_error("level out of range [0, c]");

  const int w = space.level_width();
  LevelBlocks blocks;
  if (level > 0) blocks.lower = DenseMatrix(w, w);
  blocks.diagonal = DenseMatrix(w, w);
  if (level < c) blocks.upper = DenseMatrix(w, w);

  const std::int64_t lo = static_cast<std::int64_t>(level) * w;
  for (const auto& t : gen.triplets()) {
    if (t.row < lo || t.row >= lo + w) continue;
    const int r = static_cast<int>(t.row - lo);
    const int col_level = static_cast<int>(t.col / w);
    const int k = static_cast<int>(t.col % w);
    if (col_level == level - 1)
      blocks.lower(r, k) = t.value;
    else if (col_level == level)
      blocks.diagonal(r, k) = t.value;
    else if (col_level == level + 1)
      blocks.upper(r, k) = t.value;
  }
  return blocks;
}

/// One strongly-connected-component test on the positive off-diagonal
/// graph (forward and reverse reachability from state 0).
inline bool is_irreducible(const SparseGenerator& gen) {
  const std::int64_t n = gen.dim();
  std::vector<std::vector<std::int64_t>> fwd(n), rev(n);
  for (const auto& t : gen.triplets()) {
    if (t.row == t.col || t.value <= 0.0) continue;
    fwd[t.row].push_back(t.col);
    rev[t.col].push_back(t.row);
  }
  auto reaches_all = [n](const std::vector<std::vector<std::int64_t>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<std::int64_t> stack{0};
    seen[0] = 1;
    std::int64_t count = 1;
    while (!stack.empty()) {
      const std::int64_t u = stack.back();
      stack.pop_back();
      for (std::int64_t v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(rev);
}

inline void require_irreducible(const SparseGenerator& gen) {
  if (!is_irreducible(gen))
    throw structure_error("generator is not irreducible; pi Q = 0 is underdetermined");
}

/// Largest absolute row-sum defect; 0 (to rounding) for a valid generator.
inline double max_row_sum_defect(const SparseGenerator& gen) {
  std::vector<double> sums(gen.dim(), 0.0);
  for (const auto& t : gen.triplets()) sums[t.row] += t.value;
  double worst = 0.0;
  for (double s : sums) worst = std::max(worst, std::abs(s));
  return worst;
}

}  // namespace retrialcap
