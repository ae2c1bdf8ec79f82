#include "doctest.h"
#include "mpmd/delay.hpp"
#include "mpmd/errors.hpp"
#include "mpmd/generators.hpp"
#include "mpmd/instance.hpp"

using namespace mpmd;

namespace {

// Phase i of the uniform phase construction on n points: more than n - i
// unmatched requests are forbidden.
DelayModel phase_model(std::size_t n, std::size_t i, Timestep t) {
  return DelayModel::deadline_phases({{t, t, n - i}});
}

}  // namespace

TEST_CASE("empty set costs nothing") {
  CHECK(DelayModel::size_based({{0, 5, {Cost(0), Cost(3)}}}).evaluate(2, {}, {}) == Cost(0.0));
  CHECK(phase_model(5, 1, 0).evaluate(0, {}, {}) == Cost(0.0));
  CHECK(DelayModel::uniform_concave(ConcaveFn::sqrt()).evaluate(3, {}, {}) == Cost(0.0));
}

TEST_CASE("phase model forbids one request too many") {
  const auto m = phase_model(5, 1, 0);
  CHECK(m.evaluate(0, RequestSet::first(5), {}).is_infinite());
  CHECK(m.evaluate(0, RequestSet::first(4), {}) == Cost(0.0));
  CHECK(m.kind() == DelayModel::Kind::deadline_phase);
  CHECK(m.is_size_based());
}

TEST_CASE("size-based table lookup") {
  const auto m = DelayModel::size_based({{0, 9, {Cost(0), Cost(1), Cost(2), Cost(3)}}});
  CHECK(m.evaluate(4, RequestSet{1, 4, 6}, {}) == Cost(3.0));
  CHECK(m.evaluate(4, RequestSet{1, 4, 6, 7, 8}, {}) == Cost(3.0));
  CHECK(m.evaluate(10, RequestSet{1}, {}) == Cost(0.0));
  CHECK_THROWS_AS(DelayModel::size_based({{0, 1, {Cost(0), Cost(2), Cost(1)}}}), ValidationError);
  CHECK_THROWS_AS(DelayModel::size_based({{0, 3, {Cost(0)}}, {3, 4, {Cost(0)}}}), ValidationError);
}

TEST_CASE("set table must be monotone") {
  std::vector<Cost> values(4, Cost(0.0));
  values[1] = Cost(5.0);
  CHECK_THROWS_AS(DelayModel::set_table(2, {{0, 0, values}}), ValidationError);
  values[3] = Cost::infinite();
  const auto m = DelayModel::set_table(2, {{0, 0, values}});
  CHECK(m.evaluate(0, RequestSet{0}, {}) == Cost(5.0));
  CHECK(m.evaluate(0, RequestSet{1}, {}) == Cost(0.0));
  CHECK(m.evaluate(0, RequestSet{0, 1}, {}).is_infinite());
  CHECK_THROWS_AS(DelayModel::set_table(13, {}), ValidationError);
}

TEST_CASE("uniform concave instantaneous delay telescopes") {
  const auto f = ConcaveFn::sqrt();
  const auto m = DelayModel::uniform_concave(f);
  const std::vector<Request> reqs = {{0, 0, 0}, {1, 0, 2}};
  Cost total(0.0);
  for (Timestep t = 0; t < 6; ++t) total += m.evaluate(t, RequestSet{0, 1}, reqs);
  CHECK(total.raw() == doctest::Approx(f(6.0) + f(4.0)));
  CHECK(m.evaluate(1, RequestSet{1}, reqs) == Cost(0.0));
}

TEST_CASE("task vectors") {
  Instance inst;
  inst.metric = MetricSpace::uniform(4);
  inst.requests = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}};
  inst.horizon = 5;
  inst.delay = DelayModel::size_based({{0, 4, {Cost(0), Cost(1), Cost(4), Cost(9), Cost(16)}}});
  const RequestSet all = inst.all();
  const auto v = mts_task_vector(inst, 1, all, {all, {}, {0, 1}, {2, 3}});
  CHECK(v[0] == Cost(0.0));
  CHECK(v[1] == Cost(16.0));
  CHECK(v[2] == v[3]);
  CHECK_THROWS(mts_task_vector(inst, 1, RequestSet{0, 1}, {RequestSet{2, 3}}));

  SUBCASE("phase instance: zero up to n - i unmatched, infinite beyond") {
    inst.delay = phase_model(4, 2, 1);
    const auto w = mts_task_vector(inst, 1, all, {{}, {0, 1}, all});
    CHECK(w[0].is_infinite());
    CHECK(w[1] == Cost(0.0));
    CHECK(w[2] == Cost(0.0));
  }
  SUBCASE("forcing at the horizon") {
    CHECK(instantaneous_delay(inst, 5, RequestSet{0}).is_infinite());
    CHECK(instantaneous_delay(inst, 5, {}) == Cost(0.0));
  }
}

TEST_CASE("size-based task vectors are nonincreasing in state size") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_size_based_instance(6, 4, 5, rng);
    const RequestSet all = inst.all();
    std::vector<RequestSet> states;
    for (RequestSet::Bits b = 0; b < 64; ++b)
      if (std::popcount(b) % 2 == 0) states.push_back(RequestSet(b));
    for (Timestep t = 0; t < inst.horizon; ++t) {
      const auto v = mts_task_vector(inst, t, all, states);
      for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < states.size(); ++j)
          if (states[i].size() <= states[j].size()) CHECK(v[j] <= v[i]);
    }
  }
}
