#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

#include "retrialcap/errors.hpp"
#include "retrialcap/model.hpp"

namespace retrialcap {

struct Estimate {
  double value = 0.0;
  double half_width = 0.0;  // 95% confidence interval half-width
};

struct SimulationResult {
  Estimate P_b, P_d, M_b, M_o;
  double simulated_time = 0.0;
  std::uint64_t event_count = 0;
  std::uint64_t seed = 0;
};

struct SimulationConfig {
  double horizon = 1e6;
  double warmup = 0.0;
  std::uint64_t seed = 1;
  int batches = 20;
  std::ostream* event_trace = nullptr;  // CSV: time,event,j,k
};

namespace detail {

// 97.5% Student-t quantile, Cornish-Fisher expansion around the normal.
inline double t_quantile_975(int df) {
  const double z = 1.959963984540054;
  const double z3 = z * z * z, z5 = z3 * z * z;
  return z + (z3 + z) / (4.0 * df) +
         (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * df * df);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in (0,1); fixed bit path for reproducibility across platforms.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Event-driven simulation of the six transition rules. The aggregate
/// orbit clock at occupancy k fires at rate k*mu_r; each firing succeeds
/// with probability p (a success at j = c is a no-op attempt and the call
/// stays in orbit) and abandons otherwise. Time-average estimates after
/// warmup; confidence intervals by batch means.
inline SimulationResult simulate(const ModelParams& params,
                                 const SimulationConfig& config) {
  params.validate();
  if (!(config.horizon > config.warmup) || config.warmup < 0.0)
    throw domain_error("simulate: need horizon > warmup >= 0");
  if (config.batches < 20)
    throw domain_error("simulate: need at least 20 batches");
  const double batch_span = (config.horizon - config.warmup) / config.batches;
  if (!(batch_span > 0.0))
    throw domain_error("simulate: horizon too short for the batch count");

  detail::Rng rng(config.seed);
  int j = 0, k = 0;
  double now = 0.0;
  std::uint64_t events = 0;

  const int nstats = 4;  // blocked-state indicator, full indicator, j, k
  std::vector<std::vector<double>> batch_sums(
      config.batches, std::vector<double>(nstats, 0.0));

  auto accumulate = [&](double from, double to) {
    // Spread the sojourn [from,to) over the batches it overlaps.
    if (to <= config.warmup) return;
    from = std::max(from, config.warmup);
    while (from < to) {
      int b = static_cast<int>((from - config.warmup) / batch_span);
      if (b >= config.batches) b = config.batches - 1;
      const double end = std::min(to, config.warmup + (b + 1) * batch_span);
      const double dt = end - from;
      batch_sums[b][0] += dt * ((j >= params.threshold() && k == params.m) ? 1.0 : 0.0);
      batch_sums[b][1] += dt * (j == params.c ? 1.0 : 0.0);
      batch_sums[b][2] += dt * j;
      batch_sums[b][3] += dt * k;
      from = end;
    }
  };

  while (now < config.horizon) {
    const double rate_new = params.lambda_n;
    const double rate_handoff = params.lambda_h;
    const double rate_service = j * params.nu;
    const double rate_retrial = k * params.mu_r;
    const double total = rate_new + rate_handoff + rate_service + rate_retrial;

    const double dt = rng.exponential(total);
    const double next = std::min(now + dt, config.horizon);
    accumulate(now, next);
    now += dt;
    if (now >= config.horizon) break;
    ++events;

    double u = rng.uniform() * total;
    const char* label = "";
    if ((u -= rate_new) < 0.0) {
      if (j < params.threshold()) {
        ++j;
        label = "new-admit";
      } else if (k < params.m) {
        ++k;
        label = "new-orbit";
      } else {
        label = "new-blocked";
      }
    } else if ((u -= rate_handoff) < 0.0) {
      if (j < params.c) {
        ++j;
        label = "handoff-admit";
      } else {
        label = "handoff-dropped";
      }
    } else if ((u -= rate_service) < 0.0) {
      --j;
      label = "service";
    } else {
      if (rng.uniform() < params.p) {
        if (j < params.c) {
          ++j;
          --k;
          label = "retrial-success";
        } else {
          label = "retrial-noop";
        }
      } else {
        --k;
        label = "retrial-abandon";
      }
    }
    if (config.event_trace)
      *config.event_trace << now << ',' << label << ',' << j << ',' << k << '\n';
  }

  const double t_crit = detail::t_quantile_975(config.batches - 1);
  auto reduce = [&](int stat) {
    double mean = 0.0;
    std::vector<double> means(config.batches);
    for (int b = 0; b < config.batches; ++b) {
      means[b] = batch_sums[b][stat] / batch_span;
      mean += means[b];
    }
    mean /= config.batches;
    double var = 0.0;
    for (double v : means) var += (v - mean) * (v - mean);
    var /= (config.batches - 1);
    Estimate e;
    e.value = mean;
    e.half_width = t_crit * std::sqrt(var / config.batches);
    return e;
  };

  SimulationResult result;
  result.P_b = reduce(0);
  result.P_d = reduce(1);
  result.M_b = reduce(2);
  result.M_o = reduce(3);
  result.simulated_time = config.horizon;
  result.event_count = events;
  result.seed = config.seed;
  return result;
}

}  // namespace retrialcap
