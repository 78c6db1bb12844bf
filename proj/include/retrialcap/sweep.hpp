#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "retrialcap/errors.hpp"
#include "retrialcap/measures.hpp"

namespace retrialcap {

/// One numeric axis over a named model parameter. Integer parameters
/// (c, g, m) take rounded values.
struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  std::vector<double> values() const {
    if (!(step > 0.0)) throw domain_error("sweep axis step must be > 0");
    std::vector<double> out;
    for (double v = start; v <= stop + step * 1e-9; v += step) out.push_back(v);
    if (out.empty()) throw domain_error("sweep axis '" + name + "' yields an empty grid");
    return out;
  }
};

struct SweepRow {
  ModelParams params;
  PerformanceMeasures measures;
};

inline void apply_axis_value(ModelParams& p, const std::string& name, double v) {
  auto as_int = [&] { return static_cast<int>(std::llround(v)); };
  if (name == "c")
    p.c = as_int();
  else if (name == "g")
    p.g = as_int();
  else if (name == "m")
    p.m = as_int();
  else if (name == "lambda_n")
    p.lambda_n = v;
  else if (name == "lambda_h")
    p.lambda_h = v;
  else if (name == "nu")
    p.nu = v;
  else if (name == "p")
    p.p = v;
  else if (name == "mu_r")
    p.mu_r = v;
  else
    throw domain_error("unknown sweep parameter '" + name + "'");
}

/// Evaluates the grid spanned by one or two axes over a base parameter
/// set. Rows come back in lexicographic axis order regardless of how many
/// worker threads ran.
inline std::vector<SweepRow> run_sweep(const ModelParams& base,
                                       const std::vector<SweepAxis>& axes,
                                       int jobs = 1,
                                       Method method = Method::replace_column) {
  if (axes.empty() || axes.size() > 2)
    throw domain_error("sweep needs one or two axes");

  std::vector<ModelParams> grid;
  const std::vector<double> outer = axes[0].values();
  const std::vector<double> inner =
      axes.size() == 2 ? axes[1].values() : std::vector<double>{};
  for (double a : outer) {
    ModelParams p = base;
    apply_axis_value(p, axes[0].name, a);
    if (axes.size() == 1) {
      grid.push_back(p);
    } else {
      for (double b : inner) {
        ModelParams q = p;
        apply_axis_value(q, axes[1].name, b);
        grid.push_back(q);
      }
    }
  }

  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size() || failed.load()) return;
      try {
        rows[i] = {grid[i], evaluate(grid[i], method)};
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(error);
  return rows;
}

}  // namespace retrialcap
