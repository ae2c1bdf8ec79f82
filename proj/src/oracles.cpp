#include "mpmd/oracles.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>

#include "mpmd/errors.hpp"

namespace mpmd::oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MatchingSearch {
  const std::vector<std::vector<double>>& w;
  std::vector<double> cheapest;  // min edge per vertex, for the lower bound
  std::vector<std::pair<std::size_t, std::size_t>> current;
  PerfectMatching best{{}, kInf};

  void run(std::vector<std::size_t>& free, double cost) {
    if (free.empty()) {
      if (cost < best.cost - kTolerance || best.cost == kInf) best = {current, cost};
      return;
    }
    double bound = 0.0;
    for (std::size_t v : free) bound += cheapest[v];
    if (best.cost != kInf && cost + bound / 2.0 >= best.cost - kTolerance) return;
    const std::size_t i = free.front();
    for (std::size_t k = 1; k < free.size(); ++k) {
      const std::size_t j = free[k];
      std::vector<std::size_t> rest;
      rest.reserve(free.size() - 2);
      for (std::size_t r = 1; r < free.size(); ++r)
        if (r != k) rest.push_back(free[r]);
      current.emplace_back(i, j);
      run(rest, cost + w[i][j]);
      current.pop_back();
    }
  }
};

std::vector<std::vector<RequestId>> all_pairings(std::vector<RequestId> ids) {
  std::vector<std::vector<RequestId>> out;
  std::vector<RequestId> acc;
  auto rec = [&](auto&& self, std::vector<RequestId>& free) -> void {
    if (free.empty()) {
      out.push_back(acc);
      return;
    }
    for (std::size_t k = 1; k < free.size(); ++k) {
      std::vector<RequestId> rest;
      for (std::size_t r = 1; r < free.size(); ++r)
        if (r != k) rest.push_back(free[r]);
      acc.push_back(free[0]);
      acc.push_back(free[k]);
      self(self, rest);
      acc.resize(acc.size() - 2);
    }
  };
  rec(rec, ids);
  return out;
}

}  // namespace

PerfectMatching min_cost_perfect_matching(const std::vector<std::vector<double>>& costs) {
  const std::size_t n = costs.size();
  if (n % 2 != 0) throw ValidationError("perfect matching needs an even dimension (got " + std::to_string(n) + ")");
  if (n > 16) throw ScaleError("oracle scale: matching dimension " + std::to_string(n) + " > 16");
  MatchingSearch search{costs, std::vector<double>(n, kInf), {}, {{}, kInf}};
  for (std::size_t i = 0; i < n; ++i) {
    if (costs[i].size() != n) throw ValidationError("cost matrix must be square");
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) search.cheapest[i] = std::min(search.cheapest[i], costs[i][j]);
  }
  if (n == 0) return {{}, 0.0};
  std::vector<std::size_t> free(n);
  for (std::size_t i = 0; i < n; ++i) free[i] = i;
  search.run(free, 0.0);
  return search.best;
}

MatchingSolution brute_force_opt(const Instance& instance) {
  validate(instance);
  const std::size_t m = instance.size();
  if (m > 8 || instance.horizon > 16)
    throw ScaleError("oracle scale: brute force needs m <= 8 and horizon <= 16");
  const bool concave = instance.delay.concave() != nullptr;
  const auto change_points = instance.delay.change_points();

  std::vector<RequestId> ids(m);
  for (std::size_t i = 0; i < m; ++i) ids[i] = i;
  const auto pairings = all_pairings(ids);

  Cost best = Cost::infinite();
  std::vector<MatchedPair> best_edges;
  std::vector<MatchedPair> edges(m / 2);
  for (const auto& pairing : pairings) {
    std::vector<std::vector<Timestep>> candidates(m / 2);
    for (std::size_t k = 0; k < m / 2; ++k) {
      const RequestId a = pairing[2 * k];
      const RequestId b = pairing[2 * k + 1];
      edges[k] = {a, b, 0};
      const Timestep ready = std::max(instance.requests[a].arrival, instance.requests[b].arrival);
      auto& c = candidates[k];
      if (concave) {
        for (Timestep t = ready; t <= instance.horizon; ++t) c.push_back(t);
      } else {
        c.push_back(ready);
        for (Timestep p : change_points)
          if (p > ready && p < instance.horizon) c.push_back(p);
        if (instance.horizon > ready) c.push_back(instance.horizon);
      }
    }
    std::vector<std::size_t> choice(m / 2, 0);
    for (bool done = false; !done;) {
      for (std::size_t k = 0; k < m / 2; ++k) edges[k].t = candidates[k][choice[k]];
      const Cost total = matching_distance_cost(instance, edges) + matching_delay_cost(instance, edges);
      if (total.is_finite() && (best.is_infinite() || total.raw() < best.raw() - kTolerance)) {
        best = total;
        best_edges = edges;
      }
      std::size_t k = 0;
      for (; k < m / 2; ++k) {
        if (++choice[k] < candidates[k].size()) break;
        choice[k] = 0;
      }
      done = k == m / 2;
    }
  }
  if (best.is_infinite()) throw InfeasibleError("no finite-cost offline solution");
  return make_solution(instance, best_edges);
}

Cost offline_opt_dp(const Instance& instance) {
  validate(instance);
  const std::size_t m = instance.size();
  if (m > 16 || instance.horizon > 256)
    throw ScaleError("oracle scale: subset DP needs m <= 16 and horizon <= 256");
  const std::size_t full = (std::size_t{1} << m) - 1;

  // mwpm[S] for every even subset S.
  std::vector<double> mwpm(full + 1, kInf);
  mwpm[0] = 0.0;
  for (std::size_t s = 1; s <= full; ++s) {
    if (std::popcount(s) % 2 != 0) continue;
    const auto i = static_cast<std::size_t>(std::countr_zero(s));
    for (std::size_t j = i + 1; j < m; ++j)
      if (s >> j & 1U) {
        const std::size_t rest = s & ~(std::size_t{1} << i) & ~(std::size_t{1} << j);
        mwpm[s] = std::min(mwpm[s], instance.distance(i, j) + mwpm[rest]);
      }
  }

  std::vector<Cost> value(full + 1, Cost::infinite());
  value[0] = Cost(0.0);
  for (Timestep t = 0; t <= instance.horizon; ++t) {
    const std::size_t arrived = instance.arrived_by(t).bits();
    std::vector<Cost> next(full + 1, Cost::infinite());
    std::vector<Cost> delay(full + 1, Cost::infinite());
    std::vector<bool> delay_known(full + 1, false);
    for (std::size_t matched = 0; matched <= full; ++matched) {
      if (value[matched].is_infinite()) continue;
      const std::size_t open = arrived & ~matched;
      // Every subset of the open requests, including the empty one.
      for (std::size_t add = open;; add = (add - 1) & open) {
        if (std::popcount(add) % 2 == 0) {
          const std::size_t after = matched | add;
          if (!delay_known[after]) {
            delay[after] = instantaneous_delay(instance, t, RequestSet(arrived & ~after));
            delay_known[after] = true;
          }
          const Cost c = value[matched] + Cost(mwpm[add]) + delay[after];
          if (c < next[after]) next[after] = c;
        }
        if (add == 0) break;
      }
    }
    value = std::move(next);
  }
  return value[full];
}

double dijkstra_transition_cost(RequestSet a, RequestSet b, const reduction::RequestMetric& metric) {
  const auto universe = metric.universe().members();
  if (universe.size() > 12) throw ScaleError("oracle scale: explicit transition graph needs <= 12 requests");
  if (!a.subset_of(metric.universe()) || !b.subset_of(metric.universe()))
    throw std::invalid_argument("states must lie inside the request universe");

  std::vector<RequestSet> nodes;
  std::unordered_map<RequestSet::Bits, std::size_t> index;
  const std::size_t k = universe.size();
  for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
    if (std::popcount(bits) % 2 != 0) continue;
    RequestSet s;
    for (std::size_t i = 0; i < k; ++i)
      if (bits >> i & 1U) s = s.with(universe[i]);
    index[s.bits()] = nodes.size();
    nodes.push_back(s);
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const RequestId p = universe[i];
        const RequestId q = universe[j];
        if (nodes[v].contains(p) != nodes[v].contains(q)) continue;
        const RequestSet u = nodes[v] ^ RequestSet{p, q};
        adj[v].emplace_back(index.at(u.bits()), metric.d(p, q));
      }

  std::vector<double> dist(nodes.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[index.at(a.bits())] = 0.0;
  heap.emplace(0.0, index.at(a.bits()));
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& [u, w] : adj[v])
      if (d + w < dist[u]) {
        dist[u] = d + w;
        heap.emplace(dist[u], u);
      }
  }
  return dist[index.at(b.bits())];
}

Cost exhaustive_mts_opt(const mts::MtsSpace& space, const std::vector<mts::Values>& tasks) {
  const std::size_t n = space.size();
  if (n > 8 || tasks.size() > 5) throw ScaleError("oracle scale: exhaustive MTS needs N <= 8 and T <= 5");
  std::vector<mts::Values> padded;
  for (const auto& t : tasks) padded.push_back(mts::pad_task(t, n));
  Cost best = Cost::infinite();
  std::vector<mts::StateIndex> seq(tasks.size(), 0);
  while (true) {
    Cost total(0.0);
    mts::StateIndex prev = 0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
      total += Cost(space.distance(prev, seq[t])) + padded[t][seq[t]];
      prev = seq[t];
    }
    if (total < best) best = total;
    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  return tasks.empty() ? Cost(0.0) : best;
}

}  // namespace mpmd::oracles
