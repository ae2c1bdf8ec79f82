#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "mpmd/errors.hpp"
#include "mpmd/generators.hpp"
#include "mpmd/oracles.hpp"

using namespace mpmd;
using namespace mpmd::oracles;

namespace {

// Plain recursive enumeration of every perfect matching.
double enumerate_min(std::vector<std::size_t> free, const std::vector<std::vector<double>>& c) {
  if (free.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < free.size(); ++k) {
    std::vector<std::size_t> rest;
    for (std::size_t r = 1; r < free.size(); ++r)
      if (r != k) rest.push_back(free[r]);
    best = std::min(best, c[free[0]][free[k]] + enumerate_min(rest, c));
  }
  return best;
}

Instance four_point_fixture() {
  Instance inst;
  inst.metric = MetricSpace::four_point(1.0, 100.0);
  inst.requests = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}, {4, 2, 2}, {5, 3, 2}};
  inst.horizon = 2;
  std::vector<Cost> t0(64, Cost(0.0));
  std::vector<Cost> t1(64, Cost(0.0));
  for (std::size_t mask = 0; mask < 64; ++mask) {
    if (mask & 1U) t0[mask] = t1[mask] = Cost::infinite();
    if (mask & 2U) t1[mask] = Cost::infinite();
  }
  inst.delay = DelayModel::set_table(6, {{0, 0, t0}, {1, 1, t1}});
  validate(inst);
  return inst;
}

}  // namespace

TEST_CASE("min-cost perfect matching") {
  CHECK(min_cost_perfect_matching({{0, 3}, {3, 0}}).cost == 3.0);
  const std::vector<std::vector<double>> four = {{0, 1, 10, 10}, {1, 0, 10, 10}, {10, 10, 0, 1}, {10, 10, 1, 0}};
  const auto pm = min_cost_perfect_matching(four);
  CHECK(pm.cost == 2.0);
  CHECK(pm.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}});
  CHECK_THROWS_AS(min_cost_perfect_matching({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), ValidationError);

  Rng rng(17);
  std::uniform_real_distribution<double> w(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> c(8, std::vector<double>(8, 0.0));
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = i + 1; j < 8; ++j) c[i][j] = c[j][i] = w(rng);
    std::vector<std::size_t> all(8);
    std::iota(all.begin(), all.end(), 0);
    const auto got = min_cost_perfect_matching(c);
    CHECK(got.cost == doctest::Approx(enumerate_min(all, c)).epsilon(1e-12));
    double sum = 0.0;
    for (const auto& [i, j] : got.pairs) sum += c[i][j];
    CHECK(sum == doctest::Approx(got.cost).epsilon(1e-12));
  }
}

TEST_CASE("brute force on the four-point instance") {
  const auto sol = brute_force_opt(four_point_fixture());
  CHECK(sol.total == Cost(1.0));
  CHECK(sol.edges == std::vector<MatchedPair>{{0, 1, 0}, {2, 4, 2}, {3, 5, 2}});
}

TEST_CASE("brute force on a single pair") {
  Instance inst;
  inst.metric = MetricSpace({"a", "b"}, {{0, 2.5}, {2.5, 0}});
  inst.requests = {{0, 0, 0}, {1, 1, 1}};
  inst.horizon = 3;
  CHECK(brute_force_opt(inst).total == Cost(2.5));
}

TEST_CASE("brute force agrees with matching on zero-delay instances") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = random_size_based_instance(6, 5, 4, rng);
    inst.delay = DelayModel::size_based({});
    std::vector<std::vector<double>> d(6, std::vector<double>(6));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) d[i][j] = inst.distance(i, j);
    CHECK(brute_force_opt(inst).total.raw() == doctest::Approx(min_cost_perfect_matching(d).cost).epsilon(1e-12));
  }
}

TEST_CASE("brute force agrees with matching in the concave time-augmented metric") {
  Rng rng(29);
  for (const auto& f : {ConcaveFn::sqrt(), ConcaveFn::log()}) {
    for (int trial = 0; trial < 5; ++trial) {
      Instance inst = random_concave_instance(4, 4, 5, f, rng);
      inst.horizon = 12;
      std::vector<std::vector<double>> d(4, std::vector<double>(4));
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) d[i][j] = concave_time_dist(inst.metric, inst.requests[i], inst.requests[j], f);
      CHECK(brute_force_opt(inst).total.raw() == doctest::Approx(min_cost_perfect_matching(d).cost).epsilon(1e-12));
    }
  }
}

TEST_CASE("subset DP agrees with brute force") {
  Rng rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_size_based_instance(trial % 2 == 0 ? 6 : 8, 4, 5, rng);
    const Cost bf = brute_force_opt(inst).total;
    CHECK(approx_equal(offline_opt_dp(inst), bf));
  }
  CHECK(approx_equal(offline_opt_dp(four_point_fixture()), Cost(1.0)));
}

TEST_CASE("oracle limits") {
  Rng rng(1);
  CHECK_THROWS_AS(brute_force_opt(random_size_based_instance(10, 4, 5, rng)), ScaleError);
  CHECK_THROWS_AS(exhaustive_mts_opt(random_mts_space(9, rng), {}), ScaleError);
}

TEST_CASE("explicit transition graph") {
  Rng rng(41);
  const Instance inst = random_size_based_instance(6, 6, 3, rng);
  const auto metric = reduction::RequestMetric::from_instance(inst, inst.all());
  CHECK(dijkstra_transition_cost({0, 3}, {0, 3}, metric) == 0.0);
  CHECK(dijkstra_transition_cost({}, {1, 4}, metric) == doctest::Approx(inst.distance(1, 4)));
}

TEST_CASE("exhaustive MTS") {
  Rng rng(43);
  const auto space = random_mts_space(3, rng);
  CHECK(exhaustive_mts_opt(space, {}) == Cost(0.0));
  const mts::ExplicitSpace one(std::vector<std::vector<double>>{{0.0}});
  CHECK(exhaustive_mts_opt(one, {{Cost(1.5)}, {Cost(2.0)}}) == Cost(3.5));
}
