#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "retrialcap/errors.hpp"
#include "retrialcap/measures.hpp"

namespace retrialcap {

/// QoS bounds; each problem uses the subset it needs.
struct QosTargets {
  std::optional<double> P_d0;
  std::optional<double> P_b0;

  void validate() const {
    auto check = [](const std::optional<double>& v, const char* name) {
      if (v && !(*v > 0.0 && *v < 1.0))
        throw domain_error(std::string(name) + ": bound must lie in (0,1)");
    };
    check(P_d0, "P_d0");
    check(P_b0, "P_b0");
  }
};

struct TracePoint {
  int c = 0, g = 0, m = 0;
  double P_b = 0.0, P_d = 0.0;
};

struct OptimizationResult {
  bool feasible = false;
  int c = 0, g = 0, m = 0;
  PerformanceMeasures achieved;
  std::vector<TracePoint> trace;
};

struct SearchOptions {
  bool linear_scan = false;  // audit switch: disable monotone bisection
  int m_cap = -1;            // ceiling for orbit searches; -1 means 2c
  Method method = Method::replace_column;
};

inline int guard_from_percent(double x_percent, int c) {
  return static_cast<int>(std::ceil(x_percent * c / 100.0));
}

/// Memoizing evaluator over (c,g,m) at fixed rates; records a trace of
/// every point it actually solved.
class EvalCache {
public:
  EvalCache(ModelParams rates, Method method) : rates_(rates), method_(method) {}

  const PerformanceMeasures& at(int c, int g, int m) {
    const std::array<int, 3> key{c, g, m};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    ModelParams p = rates_;
    p.c = c;
    p.g = g;
    p.m = m;
    const PerformanceMeasures pm = evaluate(p, method_);
    trace_.push_back({c, g, m, pm.P_b, pm.P_d});
    return cache_.emplace(key, pm).first->second;
  }

  const std::vector<TracePoint>& trace() const { return trace_; }
  const ModelParams& rates() const { return rates_; }
  Method method() const { return method_; }

private:
  ModelParams rates_;
  Method method_;
  std::map<std::array<int, 3>, PerformanceMeasures> cache_;
  std::vector<TracePoint> trace_;
};

namespace detail {

// Feasible set assumed an up-set of [lo,hi] (false...false true...true).
template <class Pred>
std::optional<int> smallest_true(int lo, int hi, Pred pred, bool linear) {
  if (lo > hi) return std::nullopt;
  if (linear) {
    for (int v = lo; v <= hi; ++v)
      if (pred(v)) return v;
    return std::nullopt;
  }
  if (!pred(hi)) return std::nullopt;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// Feasible set assumed a down-set of [lo,hi] (true...true false...false).
template <class Pred>
std::optional<int> largest_true(int lo, int hi, Pred pred, bool linear) {
  if (lo > hi) return std::nullopt;
  if (linear) {
    std::optional<int> best;
    for (int v = lo; v <= hi; ++v)
      if (pred(v)) best = v;
    return best;
  }
  if (!pred(lo)) return std::nullopt;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (pred(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

inline OptimizationResult finish(EvalCache& cache, int c, int g, int m) {
  // Independent re-evaluation of the returned triple, outside the cache.
  ModelParams p = cache.rates();
  p.c = c;
  p.g = g;
  p.m = m;
  OptimizationResult res;
  res.feasible = true;
  res.c = c;
  res.g = g;
  res.m = m;
  res.achieved = evaluate(p, cache.method());
  res.trace = cache.trace();
  return res;
}

inline OptimizationResult infeasible(EvalCache& cache) {
  OptimizationResult res;
  res.feasible = false;
  res.trace = cache.trace();
  return res;
}

}  // namespace detail

/// O1 via the fixed-guard rule: g = ceil(x% of c); the largest orbit size
/// m in [0, m_cap] keeping P_d within the bound wins, and P_b(m*, g) is
/// the attained objective.
inline OptimizationResult solve_o1_alg1(const ModelParams& rates, int c,
                                        double x_percent, const QosTargets& targets,
                                        const SearchOptions& opts = {}) {
  targets.validate();
  if (!targets.P_d0) throw domain_error("O1 requires a P_d0 bound");
  const int g = guard_from_percent(x_percent, c);
  const int m_cap = opts.m_cap >= 0 ? opts.m_cap : 2 * c;
  EvalCache cache(rates, opts.method);

  auto feasible_m = [&](int m) { return cache.at(c, g, m).P_d <= *targets.P_d0; };
  const auto best = detail::largest_true(0, m_cap, feasible_m, opts.linear_scan);
  if (!best) return detail::infeasible(cache);
  return detail::finish(cache, c, g, *best);
}

/// O1 via the fixed-orbit rule: m = ceil(x% of c); the smallest guard
/// count g in [0, c] keeping P_d within the bound wins.
inline OptimizationResult solve_o1_alg2(const ModelParams& rates, int c,
                                        double x_percent, const QosTargets& targets,
                                        const SearchOptions& opts = {}) {
  targets.validate();
  if (!targets.P_d0) throw domain_error("O1 requires a P_d0 bound");
  const int m = guard_from_percent(x_percent, c);
  EvalCache cache(rates, opts.method);

  auto feasible_g = [&](int g) { return cache.at(c, g, m).P_d <= *targets.P_d0; };
  const auto best = detail::smallest_true(0, c, feasible_g, opts.linear_scan);
  if (!best) return detail::infeasible(cache);
  return detail::finish(cache, c, *best, m);
}

/// O2: g = ceil(x% of c); the smallest orbit size meeting the blocking
/// bound minimizes P_d.
inline OptimizationResult solve_o2_alg3(const ModelParams& rates, int c,
                                        double x_percent, const QosTargets& targets,
                                        const SearchOptions& opts = {}) {
  targets.validate();
  if (!targets.P_b0) throw domain_error("O2 requires a P_b0 bound");
  const int g = guard_from_percent(x_percent, c);
  const int m_cap = opts.m_cap >= 0 ? opts.m_cap : 2 * c;
  EvalCache cache(rates, opts.method);

  auto feasible_m = [&](int m) { return cache.at(c, g, m).P_b <= *targets.P_b0; };
  const auto best = detail::smallest_true(0, m_cap, feasible_m, opts.linear_scan);
  if (!best) return detail::infeasible(cache);
  return detail::finish(cache, c, g, *best);
}

enum class O3Strategy { exhaustive, paper_bracketing };

struct IntRange {
  int lo = 0;
  int hi = 0;
  bool empty() const { return lo > hi; }
};

/// O3: minimize c subject to both loss bounds.
///
/// exhaustive: plain ascending scans; ties among (g,m) broken by smallest
/// g, then smallest m. The correctness reference.
///
/// paper_bracketing: midpoint start between the two single-constraint
/// channel requirements at g = 0, then bracket g at each candidate c and
/// step c upward until the bracket [g_min, g_max] is non-empty.
inline OptimizationResult solve_o3(const ModelParams& rates, const QosTargets& targets,
                                   O3Strategy strategy, IntRange c_range,
                                   IntRange m_range, const SearchOptions& opts = {}) {
  targets.validate();
  if (!targets.P_d0 || !targets.P_b0)
    throw domain_error("O3 requires both P_d0 and P_b0 bounds");
  if (c_range.empty() || m_range.empty())
    throw domain_error("O3 requires non-empty c and m ranges");
  EvalCache cache(rates, opts.method);
  const double pd0 = *targets.P_d0, pb0 = *targets.P_b0;

  if (strategy == O3Strategy::exhaustive) {
    for (int c = std::max(1, c_range.lo); c <= c_range.hi; ++c) {
      for (int g = 0; g <= c; ++g) {
        for (int m = std::max(0, m_range.lo); m <= m_range.hi; ++m) {
          const auto& pm = cache.at(c, g, m);
          if (pm.P_d <= pd0 && pm.P_b <= pb0)
            return detail::finish(cache, c, g, m);
        }
      }
    }
    return detail::infeasible(cache);
  }

  OptimizationResult best;
  for (int m = std::max(0, m_range.lo); m <= m_range.hi; ++m) {
    auto pd_ok_c = [&](int c) { return cache.at(c, 0, m).P_d <= pd0; };
    auto pb_ok_c = [&](int c) { return cache.at(c, 0, m).P_b <= pb0; };
    const auto c_d0 = detail::smallest_true(std::max(1, c_range.lo), c_range.hi,
                                            pd_ok_c, opts.linear_scan);
    const auto c_b0 = detail::smallest_true(std::max(1, c_range.lo), c_range.hi,
                                            pb_ok_c, opts.linear_scan);
    if (!c_d0 || !c_b0) continue;
    int c_mid = (*c_d0 + *c_b0 + 1) / 2;
    for (; c_mid <= c_range.hi; ++c_mid) {
      auto pd_ok_g = [&](int g) { return cache.at(c_mid, g, m).P_d <= pd0; };
      auto pb_ok_g = [&](int g) { return cache.at(c_mid, g, m).P_b <= pb0; };
      const auto g_min = detail::smallest_true(0, c_mid, pd_ok_g, opts.linear_scan);
      const auto g_max = detail::largest_true(0, c_mid, pb_ok_g, opts.linear_scan);
      if (g_min && g_max && *g_min <= *g_max) {
        if (!best.feasible || c_mid < best.c) best = detail::finish(cache, c_mid, *g_min, m);
        break;
      }
    }
  }
  if (!best.feasible) return detail::infeasible(cache);
  best.trace = cache.trace();
  return best;
}

/// O4: minimize the orbit size. Scan c ascending with g = ceil(x% of c);
/// the first c admitting a feasible m in [0, c/2] yields the minimal m.
inline OptimizationResult solve_o4_alg5(const ModelParams& rates,
                                        const QosTargets& targets, double x_percent,
                                        IntRange c_range, const SearchOptions& opts = {}) {
  targets.validate();
  if (!targets.P_d0 || !targets.P_b0)
    throw domain_error("O4 requires both P_d0 and P_b0 bounds");
  if (c_range.empty()) throw domain_error("O4 requires a non-empty c range");
  EvalCache cache(rates, opts.method);

  for (int c = std::max(1, c_range.lo); c <= c_range.hi; ++c) {
    const int g = guard_from_percent(x_percent, c);
    if (g > c) continue;
    for (int m = 0; m <= c / 2; ++m) {
      const auto& pm = cache.at(c, g, m);
      if (pm.P_d <= *targets.P_d0 && pm.P_b <= *targets.P_b0)
        return detail::finish(cache, c, g, m);
    }
  }
  return detail::infeasible(cache);
}

}  // namespace retrialcap
