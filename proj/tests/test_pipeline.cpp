#include "doctest.h"
#include "mpmd/errors.hpp"
#include "mpmd/generators.hpp"
#include "mpmd/oracles.hpp"
#include "mpmd/pipeline.hpp"

using namespace mpmd;

TEST_CASE("co-located pair waits for its deadline") {
  Instance inst;
  inst.metric = MetricSpace::uniform(2);
  inst.requests = {{0, 0, 0}, {1, 0, 1}};
  inst.horizon = 4;
  const auto sol = solve_nonclairvoyant(inst);
  REQUIRE(sol.edges.size() == 1);
  CHECK(sol.total == Cost(0.0));
  CHECK(verify_solution(sol, inst).ok);
}

TEST_CASE("pipeline solutions verify on random instances") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + 2 * static_cast<std::size_t>(trial % 4);
    const Instance inst = random_size_based_instance(m, 4, 6, rng);
    NonclairvoyantMatcher matcher(inst.metric);
    const auto run = run_online(matcher, inst, true);
    const auto& sol = run.solution;
    const auto report = verify_solution(sol, inst);
    CHECK(report.ok);
    CHECK(sol.edges.size() == m / 2);
    CHECK(sol.total.is_finite());
    CHECK(matcher.worst_claim_gap() <= kTolerance);
    CHECK(sol.distance_cost.raw() == doctest::Approx(matcher.converted_transition_cost()).epsilon(1e-12));
    for (std::size_t t = 1; t < sol.trace.size(); ++t) {
      CHECK(sol.trace[t - 1].matched.subset_of(sol.trace[t].matched));
      CHECK(sol.trace[t].mts_state.size() <= sol.trace[t].matched.size());
    }
    if (m <= 8) CHECK(approx_le(oracles::brute_force_opt(inst).total, sol.total));
  }
}

TEST_CASE("nonclairvoyant solver rejects other delay kinds") {
  Instance inst;
  inst.metric = MetricSpace::uniform(2);
  inst.requests = {{0, 0, 0}, {1, 1, 0}};
  inst.horizon = 3;
  inst.delay = DelayModel::uniform_concave(ConcaveFn::sqrt());
  CHECK_THROWS_AS(solve_nonclairvoyant(inst), ValidationError);
}

TEST_CASE("verify_solution") {
  Instance inst;
  inst.metric = MetricSpace::uniform(4);
  inst.requests = {{0, 0, 0}, {1, 1, 0}, {2, 2, 1}, {3, 3, 1}};
  inst.horizon = 3;
  inst.delay = DelayModel::size_based({{0, 2, {Cost(0), Cost(1)}}});
  const auto good = make_solution(inst, {{0, 1, 0}, {2, 3, 2}});
  CHECK(verify_solution(good, inst).ok);
  CHECK(good.delay_cost == Cost(1.0));

  SUBCASE("request in two edges") {
    const auto bad = make_solution(inst, {{0, 1, 0}, {1, 2, 1}, {2, 3, 2}});
    const auto rep = verify_solution(bad, inst);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failures.front().find("not a matching") == 0);
  }
  SUBCASE("tampered delay cost") {
    auto bad = good;
    bad.delay_cost = Cost(0.5);
    const auto rep = verify_solution(bad, inst);
    CHECK_FALSE(rep.ok);
    CHECK(rep.delay_cost == Cost(1.0));
    CHECK(rep.failures.front().find("recomputed 1") != std::string::npos);
  }
  SUBCASE("missing request") {
    const auto bad = make_solution(inst, {{0, 1, 0}});
    CHECK_FALSE(verify_solution(bad, inst).ok);
  }
  SUBCASE("match before arrival") {
    const auto bad = make_solution(inst, {{0, 1, 0}, {2, 3, 0}});
    CHECK_FALSE(verify_solution(bad, inst).ok);
  }
}

TEST_CASE("future perturbation does not change past decisions") {
  Rng rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst = random_size_based_instance(6, 4, 6, rng);
    const Instance other = perturb_future(inst, 2, 7);
    CHECK(instantaneous_delay(inst, 1, RequestSet{0}) == instantaneous_delay(other, 1, RequestSet{0}));
    const auto audit = audit_nonclairvoyance(inst, 2, static_cast<std::uint64_t>(trial));
    CHECK(audit.ok);
  }
}

TEST_CASE("greedy baseline respects deadlines") {
  Rng rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_size_based_instance(6, 4, 5, rng);
    GreedyMatcher greedy(inst.metric);
    const auto sol = run_online(greedy, inst).solution;
    CHECK(verify_solution(sol, inst).ok);
    CHECK(sol.total.is_finite());
  }
}
