#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpmd/instance.hpp"
#include "mpmd/solution.hpp"

namespace mpmd::adversary {

struct TranscriptStep {
  Timestep t = 0;
  std::vector<Request> arrivals;
  std::string delay;  ///< human-readable f_t
  std::vector<MatchedPair> matched;
};

/// Everything an adversary run produced: the realized instance, the
/// interaction log and the cost comparison.
struct Transcript {
  std::string kind;
  std::string algorithm;
  std::uint64_t seed = 0;
  Instance instance;
  std::vector<TranscriptStep> steps;
  std::vector<MatchedPair> edges;
  bool feasible = true;
  std::string infeasibility;
  Cost alg_cost;
  Cost alg_distance;
  std::size_t cross_matches = 0;  ///< matched pairs at distinct points
  Cost opt_cost;
  std::optional<Cost> opt_oracle;  ///< exact offline optimum when within oracle limits
  double ratio = 0.0;              ///< alg_cost / opt_cost, +inf when infeasible
};

/// Four-point construction: p1..p3 pairwise eps apart, p4 at distance D.
/// r1..r4 arrive at t=0 on p1..p4 and r1 has deadline 0. At t=1 the
/// smallest-id unmatched request among r2, r3 gets a deadline. At t=2 r5
/// arrives on the point of the other one of r2, r3 (p3 if neither is
/// unmatched) and r6 on p4, both due immediately. The adversary sees only
/// the published matches. OPT comes from the brute-force oracle.
Transcript four_point_adversary(double D, double eps, const std::string& algo);

/// Phase adversary on the uniform n-point metric (n >= 3). Phase 1 places one
/// request per point at t=0; phase i allows at most n-i unmatched requests
/// and ends at the first timestep in which the algorithm matches; each later
/// phase starts the next timestep with one new request. Deterministic mode
/// uses the smallest inactive unsaturated point, randomized mode a uniform
/// unsaturated point. opt_cost is the closed form 1, cross-checked by the
/// DP oracle when the instance is small enough.
Transcript uniform_phase_adversary(std::size_t n, const std::string& algo, bool randomized, std::uint64_t seed);

/// Line-oriented transcript text.
std::string transcript_to_text(const Transcript& transcript);

}  // namespace mpmd::adversary
