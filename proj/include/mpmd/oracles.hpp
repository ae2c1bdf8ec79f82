#pragma once

#include <utility>
#include <vector>

#include "mpmd/cost.hpp"
#include "mpmd/instance.hpp"
#include "mpmd/mts.hpp"
#include "mpmd/reduction.hpp"
#include "mpmd/solution.hpp"

namespace mpmd::oracles {

struct PerfectMatching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< (i, j), i < j, sorted by i
  double cost = 0.0;
};

/// Exact minimum-cost perfect matching by branch and bound over pairings
/// (lowest free index paired first, partners in increasing order; the first
/// optimum found wins ties). Even dimension <= 16.
PerfectMatching min_cost_perfect_matching(const std::vector<std::vector<double>>& costs);

/// Offline optimum by enumerating every perfect matching and every candidate
/// match time per pair. For table-driven delay the candidates are the pair's
/// ready time, the delay change points after it, and the horizon; for uniform
/// concave delay every timestep up to the horizon. m <= 8, horizon <= 16.
MatchingSolution brute_force_opt(const Instance& instance);

/// Offline optimum by dynamic programming over the matched set per timestep,
/// each timestep matching its newly matched requests by a min-cost perfect
/// matching. m <= 16, horizon <= 256.
Cost offline_opt_dp(const Instance& instance);

/// Shortest path in the explicitly built transition graph on the even subsets
/// of metric.universe(). |universe| <= 12.
double dijkstra_transition_cost(RequestSet a, RequestSet b, const reduction::RequestMetric& metric);

/// Minimum over all N^T state sequences from the start state. N <= 8, T <= 5.
Cost exhaustive_mts_opt(const mts::MtsSpace& space, const std::vector<mts::Values>& tasks);

}  // namespace mpmd::oracles
