#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "retrialcap/errors.hpp"

namespace retrialcap {

/// Scalar inputs of the guard-channel retrial model.
///
/// c      total channels in the pool
/// g      guard channels reserved for handoff and retrial calls
/// m      orbit capacity (maximum number of retrial calls)
/// lambda_n / lambda_h   new-call / handoff Poisson arrival rates
/// nu     per-call service (channel holding) rate
/// p      per-attempt retrial success probability (1-p abandons)
/// mu_r   per-customer retrial rate
struct ModelParams {
  int c = 0;
  int g = 0;
  int m = 0;
  double lambda_n = 0.0;
  double lambda_h = 0.0;
  double nu = 0.0;
  double p = 0.0;
  double mu_r = 0.0;

  double lambda_total() const { return lambda_n + lambda_h; }

  /// Admission threshold: new calls take a channel directly only while
  /// fewer than c-g channels are busy.
  int threshold() const { return c - g; }

  // Throws domain_error naming the offending field.
  void validate() const {
    if (c < 1) throw domain_error("c: must be a positive integer");
    if (g < 0 || g > c) throw domain_error("g: must satisfy 0 <= g <= c");
    if (m < 0) throw domain_error("m: must be non-negative");
    if (!(lambda_n > 0.0)) throw domain_error("lambda_n: must be positive");
    if (!(lambda_h > 0.0)) throw domain_error("lambda_h: must be positive");
    if (!(nu > 0.0)) throw domain_error("nu: must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("p: must lie in [0,1]");
    if (!(mu_r > 0.0)) throw domain_error("mu_r: must be positive");
  }
};

/// A point (j,k) of the state space: j busy channels, k calls in orbit.
struct State {
  int j = 0;
  int k = 0;

  friend bool operator==(const State&, const State&) = default;
};

/// Rectangular state space {(j,k) : 0<=j<=c, 0<=k<=m} with level-major
/// linear indexing: states sharing j form one contiguous "level".
class StateSpace {
public:
  explicit StateSpace(const ModelParams& params)
      : c_(params.c), m_(params.m) {}

  int channels() const { return c_; }
  int orbit_capacity() const { return m_; }
  int level_width() const { return m_ + 1; }
  std::int64_t size() const {
    return static_cast<std::int64_t>(c_ + 1) * (m_ + 1);
  }

  bool contains(State s) const {
    return s.j >= 0 && s.j <= c_ && s.k >= 0 && s.k <= m_;
  }

  std::int64_t index(State s) const {
    check(s);
    return static_cast<std::int64_t>(s.j) * (m_ + 1) + s.k;
  }

  State state(std::int64_t idx) const {
    if (idx < 0 || idx >= size())
      throw domain_error("state index out of range");
    return State{static_cast<int>(idx / (m_ + 1)),
                 static_cast<int>(idx % (m_ + 1))};
  }

  int level_of(std::int64_t idx) const { return state(idx).j; }

private:
  void check(State s) const {
    if (!contains(s))
      throw domain_error("state (" + std::to_string(s.j) + "," +
                         std::to_string(s.k) + ") outside state space");
  }

  int c_;
  int m_;
};

struct Transition {
  State to;
  double rate = 0.0;
};

/// All outgoing transitions from state s, with parallel edges (direct
/// admission of a new call and a handoff both moving j -> j+1) merged by
/// summing their rates. No self-loops; every rate is strictly positive.
inline std::vector<Transition> enumerate_transitions(const ModelParams& params,
                                                     State s) {
  params.validate();
  const StateSpace space(params);
  if (!space.contains(s))
    throw domain_error("state outside the state space");

  const int j = s.j;
  const int k = s.k;
  std::vector<Transition> out;
  out.reserve(4);

  // Call arrivals. A handoff always advances j while a channel is free;
  // a new call does so only below the guard threshold, otherwise it
  // diverts to the orbit (or is lost when the orbit is full).
  double up = 0.0;
  if (j < params.c) up += params.lambda_h;
  if (j < params.threshold()) up += params.lambda_n;
  if (up > 0.0) out.push_back({State{j + 1, k}, up});

  if (j >= params.threshold() && k < params.m && params.lambda_n > 0.0)
    out.push_back({State{j, k + 1}, params.lambda_n});

  if (j >= 1) out.push_back({State{j - 1, k}, j * params.nu});

  // Retrials: a success seizes any free channel, guard ones included.
  if (k >= 1) {
    const double success = k * params.p * params.mu_r;
    if (j < params.c && success > 0.0)
      out.push_back({State{j + 1, k - 1}, success});
    const double abandon = k * (1.0 - params.p) * params.mu_r;
    if (abandon > 0.0) out.push_back({State{j, k - 1}, abandon});
  }
  return out;
}

/// Uniformization bound: lambda_n + lambda_h + c*nu + m*mu_r dominates the
/// total outflow rate of every state.
inline double uniformization_constant(const ModelParams& params) {
  params.validate();
  return params.lambda_total() + params.c * params.nu + params.m * params.mu_r;
}

}  // namespace retrialcap
