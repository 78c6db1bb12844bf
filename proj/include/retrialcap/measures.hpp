#pragma once

#include <cstdint>
#include <vector>

#include "retrialcap/generator.hpp"
#include "retrialcap/model.hpp"
#include "retrialcap/solver.hpp"

namespace retrialcap {

/// The five stationary performance measures.
struct PerformanceMeasures {
  double P_b = 0.0;  // new-call blocking probability
  double P_d = 0.0;  // handoff dropping probability
  double M_b = 0.0;  // mean busy channels
  double M_o = 0.0;  // mean orbit occupancy
  double M_s = 0.0;  // M_b + M_o
};

/// P_b = sum of pi over {(j,m) : c-g <= j <= c}: a new call is lost only
/// when the orbit is full and no direct channel is available.
inline double blocking_probability(const StationaryDistribution& dist,
                                   const StateSpace& space,
                                   const ModelParams& params) {
  const int m = space.orbit_capacity();
  double sum = 0.0;
  for (int j = params.threshold(); j <= space.channels(); ++j)
    sum += dist.pi[space.index({j, m})];
  return sum;
}

/// P_d = sum of pi over the full level j = c.
inline double dropping_probability(const StationaryDistribution& dist,
                                   const StateSpace& space) {
  double sum = 0.0;
  const int c = space.channels();
  for (int k = 0; k <= space.orbit_capacity(); ++k)
    sum += dist.pi[space.index({c, k})];
  return sum;
}

inline double mean_busy_channels(const StationaryDistribution& dist,
                                 const StateSpace& space) {
  double sum = 0.0;
  for (std::int64_t idx = 0; idx < space.size(); ++idx)
    sum += space.state(idx).j * dist.pi[idx];
  return sum;
}

/// E[k] under pi. The j = 0 column is included: states (0, k>0) carry
/// positive mass. Pass literal_outer_sum = true to start the outer sum at
/// j = 1 instead (comparison switch only).
inline double mean_orbit_occupancy(const StationaryDistribution& dist,
                                   const StateSpace& space,
                                   bool literal_outer_sum = false) {
  double sum = 0.0;
  for (std::int64_t idx = 0; idx < space.size(); ++idx) {
    const State s = space.state(idx);
    if (literal_outer_sum && s.j == 0) continue;
    sum += s.k * dist.pi[idx];
  }
  return sum;
}

inline double mean_system_size(double mean_busy, double mean_orbit) {
  return mean_busy + mean_orbit;
}

inline PerformanceMeasures measures_from(const StationaryDistribution& dist,
                                         const StateSpace& space,
                                         const ModelParams& params) {
  PerformanceMeasures pm;
  pm.P_b = blocking_probability(dist, space, params);
  pm.P_d = dropping_probability(dist, space);
  pm.M_b = mean_busy_channels(dist, space);
  pm.M_o = mean_orbit_occupancy(dist, space);
  pm.M_s = mean_system_size(pm.M_b, pm.M_o);
  return pm;
}

/// Full pipeline: assemble Q, solve, reduce to measures.
inline PerformanceMeasures evaluate(const ModelParams& params,
                                    Method method = Method::replace_column) {
  const SparseGenerator gen = build_generator(params);
  const StationaryDistribution dist = solve_stationary(gen, method);
  return measures_from(dist, gen.space(), params);
}

}  // namespace retrialcap
