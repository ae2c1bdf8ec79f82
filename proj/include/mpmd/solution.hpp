#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mpmd/cost.hpp"
#include "mpmd/instance.hpp"

namespace mpmd {

struct MatchedPair {
  RequestId a = 0;
  RequestId b = 0;
  Timestep t = 0;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
  friend auto operator<=>(const MatchedPair&, const MatchedPair&) = default;
};

/// Online solver state after a timestep, for diagnostics.
struct TraceEntry {
  Timestep t = 0;
  RequestSet mts_state;
  RequestSet matched;
};

struct MatchingSolution {
  std::vector<MatchedPair> edges;
  Cost distance_cost;
  Cost delay_cost;
  Cost total;
  std::vector<TraceEntry> trace;
};

/// Sum of d(a, b) over the edges.
Cost matching_distance_cost(const Instance& instance, const std::vector<MatchedPair>& edges);

/// Sum over t = 0..horizon of f_t(U_t), U_t = arrived by t and not matched at
/// or before t. For uniform concave delay the per-request telescoped form
/// f(t_match - arrival) is used; unmatched requests make the cost infinite.
Cost matching_delay_cost(const Instance& instance, const std::vector<MatchedPair>& edges);

/// Normalizes edges (a < b, sorted by time then ids) and fills in the costs.
MatchingSolution make_solution(const Instance& instance, std::vector<MatchedPair> edges);

struct VerificationReport {
  bool ok = true;
  std::vector<std::string> failures;
  Cost distance_cost;
  Cost delay_cost;
};

/// Checks that the edges form a perfect matching, match times respect
/// arrivals and the horizon, and the reported costs agree with an independent
/// recomputation within 1e-9.
VerificationReport verify_solution(const MatchingSolution& sol, const Instance& instance);

nlohmann::json solution_to_json(const MatchingSolution& sol);
nlohmann::json report_to_json(const VerificationReport& report);

}  // namespace mpmd
