#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>

#include "retrialcap/generator.hpp"
#include "retrialcap/model.hpp"

using namespace retrialcap;

namespace {

const ModelParams kDefaults{100, 5, 5, 40.0, 40.0, 1.0, 0.8, 0.5};

ModelParams with_shape(int c, int g, int m) {
  ModelParams p = kDefaults;
  p.c = c;
  p.g = g;
  p.m = m;
  return p;
}

double rate_to(const std::vector<Transition>& ts, State target) {
  for (const auto& t : ts)
    if (t.to == target) return t.rate;
  return 0.0;
}

}  // namespace

TEST_CASE("parameter validation names the offending field") {
  ModelParams p = kDefaults;
  p.g = 101;
  CHECK_THROWS_WITH_AS(p.validate(), "g: must satisfy 0 <= g <= c", domain_error);
  p = kDefaults;
  p.p = 1.5;
  CHECK_THROWS_AS(p.validate(), domain_error);
  p = kDefaults;
  p.nu = 0.0;
  CHECK_THROWS_AS(p.validate(), domain_error);
  CHECK_NOTHROW(kDefaults.validate());
}

TEST_CASE("state space indexing is a level-major bijection") {
  const StateSpace space(with_shape(4, 1, 2));
  CHECK(space.size() == 15);
  CHECK(space.level_width() == 3);
  std::vector<char> seen(space.size(), 0);
  for (int j = 0; j <= 4; ++j)
    for (int k = 0; k <= 2; ++k) {
      const auto idx = space.index({j, k});
      CHECK(space.state(idx) == State{j, k});
      CHECK(!seen[idx]);
      seen[idx] = 1;
    }
  // levels are contiguous
  CHECK(space.index({2, 0}) == 6);
  CHECK(space.index({2, 2}) == 8);
  CHECK_THROWS_AS(space.index({5, 0}), domain_error);
  CHECK_THROWS_AS(space.state(15), domain_error);
}

TEST_CASE("empty-system state merges both arrival streams") {
  const auto ts = enumerate_transitions(kDefaults, {0, 0});
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].to == State{1, 0});
  CHECK(ts[0].rate == doctest::Approx(80.0));
}

TEST_CASE("full system emits only departures and abandonments") {
  const auto ts = enumerate_transitions(kDefaults, {100, 5});
  REQUIRE(ts.size() == 2);
  CHECK(rate_to(ts, {99, 5}) == doctest::Approx(100.0));
  CHECK(rate_to(ts, {100, 4}) == doctest::Approx(5 * 0.2 * 0.5));
}

TEST_CASE("at the guard threshold new calls divert to the orbit") {
  const auto ts = enumerate_transitions(kDefaults, {95, 0});
  REQUIRE(ts.size() == 3);
  CHECK(rate_to(ts, {96, 0}) == doctest::Approx(40.0));   // handoff only
  CHECK(rate_to(ts, {95, 1}) == doctest::Approx(40.0));   // new call to orbit
  CHECK(rate_to(ts, {94, 0}) == doctest::Approx(95.0));
}

TEST_CASE("hand-enumerated 6-state instance, state (1,1)") {
  const ModelParams p{2, 1, 1, 1.0, 1.0, 1.0, 0.8, 0.5};
  const auto ts = enumerate_transitions(p, {1, 1});
  REQUIRE(ts.size() == 4);
  CHECK(rate_to(ts, {2, 1}) == doctest::Approx(1.0));    // handoff
  CHECK(rate_to(ts, {1, 0}) == doctest::Approx(0.1));    // abandonment
  CHECK(rate_to(ts, {2, 0}) == doctest::Approx(0.4));    // retrial success
  CHECK(rate_to(ts, {0, 1}) == doctest::Approx(1.0));    // service
}

TEST_CASE("transition lists have no self-loops or duplicate targets") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    ModelParams p;
    p.c = 1 + static_cast<int>(rng() % 12);
    p.g = static_cast<int>(rng() % (p.c + 1));
    p.m = static_cast<int>(rng() % 6);
    p.lambda_n = 0.1 + (rng() % 50) / 10.0;
    p.lambda_h = 0.1 + (rng() % 50) / 10.0;
    p.nu = 0.2 + (rng() % 20) / 10.0;
    p.p = (rng() % 101) / 100.0;
    p.mu_r = 0.1 + (rng() % 30) / 10.0;
    const StateSpace space(p);
    for (std::int64_t idx = 0; idx < space.size(); ++idx) {
      const State s = space.state(idx);
      std::map<std::pair<int, int>, int> targets;
      for (const auto& t : enumerate_transitions(p, s)) {
        CHECK(t.rate > 0.0);
        CHECK(!(t.to == s));
        CHECK(space.contains(t.to));
        ++targets[{t.to.j, t.to.k}];
      }
      for (const auto& [_, count] : targets) CHECK(count == 1);
    }
  }
}

TEST_CASE("rule gating at the boundaries") {
  // no transition increases j at the full level, for any k
  for (int k = 0; k <= 5; ++k)
    for (const auto& t : enumerate_transitions(kDefaults, {100, k}))
      CHECK(t.to.j <= 100);

  // full orbit above the threshold: lambda_n contributes nothing
  double outflow = 0.0;
  for (const auto& t : enumerate_transitions(kDefaults, {95, 5})) outflow += t.rate;
  CHECK(outflow == doctest::Approx(40.0 + 95.0 + 5 * 0.5));  // lambda_h + j nu + k mu_r
}

TEST_CASE("m = 0 collapses to a birth-death process on j") {
  const ModelParams p = with_shape(10, 2, 0);
  const StateSpace space(p);
  for (std::int64_t idx = 0; idx < space.size(); ++idx) {
    const State s = space.state(idx);
    for (const auto& t : enumerate_transitions(p, s)) {
      CHECK(t.to.k == 0);
      CHECK(std::abs(t.to.j - s.j) == 1);
    }
  }
}

TEST_CASE("out-of-range state is rejected") {
  CHECK_THROWS_AS(enumerate_transitions(kDefaults, {101, 0}), domain_error);
  CHECK_THROWS_AS(enumerate_transitions(kDefaults, {0, 6}), domain_error);
}

TEST_CASE("uniformization constant formula and bound") {
  CHECK(uniformization_constant({1, 0, 0, 1.0, 1.0, 1.0, 0.8, 0.5}) ==
        doctest::Approx(3.0));
  CHECK(uniformization_constant({100, 5, 5, 40.0, 40.0, 1.0, 0.8, 0.5}) ==
        doctest::Approx(182.5));

  // dominates every |diagonal| of the assembled generator
  const ModelParams p{20, 4, 6, 7.0, 5.0, 1.3, 0.6, 0.9};
  const double bound = uniformization_constant(p);
  for (const auto& t : build_generator(p).triplets())
    if (t.row == t.col) CHECK(-t.value <= bound + 1e-12);
}
