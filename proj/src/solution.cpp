#include "mpmd/solution.hpp"

#include <algorithm>
#include <limits>

#include "mpmd/io.hpp"

namespace mpmd {

namespace {

constexpr Timestep kNever = std::numeric_limits<Timestep>::max();

// Match time per request; kNever for unmatched. Ignores out-of-range ids.
std::vector<Timestep> match_times(const Instance& instance, const std::vector<MatchedPair>& edges) {
  std::vector<Timestep> out(instance.size(), kNever);
  for (const auto& e : edges)
    for (RequestId r : {e.a, e.b})
      if (r < out.size()) out[r] = std::min(out[r], e.t);
  return out;
}

}  // namespace

Cost matching_distance_cost(const Instance& instance, const std::vector<MatchedPair>& edges) {
  Cost total(0.0);
  for (const auto& e : edges) total += Cost(instance.distance(e.a, e.b));
  return total;
}

Cost matching_delay_cost(const Instance& instance, const std::vector<MatchedPair>& edges) {
  const auto when = match_times(instance, edges);
  if (const ConcaveFn* f = instance.delay.concave()) {
    Cost total(0.0);
    for (const auto& r : instance.requests) {
      if (when[r.id] == kNever || when[r.id] > instance.horizon) return Cost::infinite();
      total += Cost((*f)(static_cast<double>(when[r.id] - r.arrival)));
    }
    return total;
  }
  Cost total(0.0);
  for (Timestep t = 0; t <= instance.horizon; ++t) {
    RequestSet unmatched;
    for (const auto& r : instance.requests)
      if (r.arrival <= t && when[r.id] > t) unmatched = unmatched.with(r.id);
    total += instantaneous_delay(instance, t, unmatched);
  }
  return total;
}

MatchingSolution make_solution(const Instance& instance, std::vector<MatchedPair> edges) {
  for (auto& e : edges)
    if (e.a > e.b) std::swap(e.a, e.b);
  std::sort(edges.begin(), edges.end(), [](const MatchedPair& x, const MatchedPair& y) {
    return std::tie(x.t, x.a, x.b) < std::tie(y.t, y.a, y.b);
  });
  MatchingSolution sol;
  sol.edges = std::move(edges);
  sol.distance_cost = matching_distance_cost(instance, sol.edges);
  sol.delay_cost = matching_delay_cost(instance, sol.edges);
  sol.total = sol.distance_cost + sol.delay_cost;
  return sol;
}

VerificationReport verify_solution(const MatchingSolution& sol, const Instance& instance) {
  VerificationReport rep;
  const auto fail = [&rep](std::string msg) {
    rep.ok = false;
    rep.failures.push_back(std::move(msg));
  };
  std::vector<int> seen(instance.size(), 0);
  bool ids_valid = true;
  for (const auto& e : sol.edges) {
    const std::string name = "(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
    if (e.a >= instance.size() || e.b >= instance.size() || e.a == e.b) {
      fail("not a matching: invalid edge " + name);
      ids_valid = false;
      continue;
    }
    ++seen[e.a];
    ++seen[e.b];
    if (e.t < instance.requests[e.a].arrival || e.t < instance.requests[e.b].arrival)
      fail("edge " + name + " matched at t=" + std::to_string(e.t) + " before an arrival");
    if (e.t > instance.horizon) fail("edge " + name + " matched after the horizon");
  }
  for (std::size_t r = 0; r < seen.size(); ++r) {
    if (seen[r] > 1) fail("not a matching: request " + std::to_string(r) + " is in " + std::to_string(seen[r]) + " edges");
    if (seen[r] == 0) fail("not perfect: request " + std::to_string(r) + " is unmatched");
  }
  if (!ids_valid) return rep;

  rep.distance_cost = matching_distance_cost(instance, sol.edges);
  rep.delay_cost = matching_delay_cost(instance, sol.edges);
  if (!approx_equal(rep.distance_cost, sol.distance_cost))
    fail("distance_cost mismatch: reported " + sol.distance_cost.to_string() + ", recomputed " +
         rep.distance_cost.to_string());
  if (!approx_equal(rep.delay_cost, sol.delay_cost))
    fail("delay_cost mismatch: reported " + sol.delay_cost.to_string() + ", recomputed " + rep.delay_cost.to_string());
  if (!approx_equal(rep.distance_cost + rep.delay_cost, sol.total))
    fail("total mismatch: reported " + sol.total.to_string() + ", recomputed " +
         (rep.distance_cost + rep.delay_cost).to_string());
  return rep;
}

nlohmann::json solution_to_json(const MatchingSolution& sol) {
  json edges = json::array();
  for (const auto& e : sol.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"t", e.t}});
  json out = {{"edges", edges},
              {"distance_cost", cost_to_json(sol.distance_cost)},
              {"delay_cost", cost_to_json(sol.delay_cost)},
              {"total", cost_to_json(sol.total)}};
  if (!sol.trace.empty()) {
    json trace = json::array();
    for (const auto& e : sol.trace)
      trace.push_back({{"t", e.t}, {"mts_state", e.mts_state.members()}, {"matched", e.matched.members()}});
    out["schedule_trace"] = trace;
  }
  return out;
}

nlohmann::json report_to_json(const VerificationReport& report) {
  return {{"ok", report.ok},
          {"failures", report.failures},
          {"distance_cost", cost_to_json(report.distance_cost)},
          {"delay_cost", cost_to_json(report.delay_cost)}};
}

}  // namespace mpmd
