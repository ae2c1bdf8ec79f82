#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mpmd/instance.hpp"
#include "mpmd/mts.hpp"
#include "mpmd/reduction.hpp"
#include "mpmd/solution.hpp"

namespace mpmd {

/// f_t restricted to the current timestep: all an online matcher may learn about delay.
using InstantDelay = std::function<Cost(RequestSet unmatched)>;

/// Online matcher driven one timestep at a time.
class OnlineMatcher {
 public:
  virtual ~OnlineMatcher() = default;
  virtual std::string name() const = 0;
  /// Timesteps are fed in increasing order starting at 0. `arrivals` are the
  /// requests arriving at t (ids continue the previous ones). Returns the
  /// pairs matched at t.
  virtual std::vector<MatchedPair> step(Timestep t, const std::vector<Request>& arrivals, const InstantDelay& delay) = 0;
};

/// The MTS pipeline: transition-graph space, guess-and-double work-function
/// solver, densification and Sensible-ALG conversion. Every pair the converter
/// adds is matched at the current timestep.
class NonclairvoyantMatcher : public OnlineMatcher {
 public:
  explicit NonclairvoyantMatcher(const MetricSpace& space);

  std::string name() const override { return "nonclairvoyant"; }
  std::vector<MatchedPair> step(Timestep t, const std::vector<Request>& arrivals, const InstantDelay& delay) override;

  RequestSet mts_state() const { return reduction::TransitionGraphSpace::state(solver_.state()); }
  RequestSet matched() const { return converter_.current(); }
  const mts::GuessAndDouble& solver() const { return solver_; }
  /// Largest observed c(S'_{i-1}, S'_i) - [c(S_{i-1}, S_i) - (phi_i - phi_{i-1})].
  double worst_claim_gap() const { return worst_claim_gap_; }
  /// Transition cost of the converted schedule, summed step by step.
  double converted_transition_cost() const { return converted_transition_; }

 private:
  reduction::TransitionGraphSpace space_;
  mts::GuessAndDouble solver_;
  reduction::MonotoneConverter converter_;
  double worst_claim_gap_ = -std::numeric_limits<double>::infinity();
  double converted_transition_ = 0.0;
};

/// Deadline-driven baseline: while the unmatched set is infinitely expensive,
/// matches the pair minimizing (f_t of the rest, distance, ids).
class GreedyMatcher : public OnlineMatcher {
 public:
  explicit GreedyMatcher(const MetricSpace& space) : space_(&space) {}
  std::string name() const override { return "greedy"; }
  std::vector<MatchedPair> step(Timestep t, const std::vector<Request>& arrivals, const InstantDelay& delay) override;

 private:
  const MetricSpace* space_;
  std::vector<Request> requests_;
  RequestSet unmatched_;
};

std::unique_ptr<OnlineMatcher> make_matcher(const std::string& name, const MetricSpace& space);

struct OnlineRun {
  MatchingSolution solution;
  std::vector<std::vector<MatchedPair>> per_step;  ///< pairs matched at each t
  /// Delay lookups as (timestep, count) runs, in call order.
  std::vector<std::pair<Timestep, std::size_t>> delay_queries;
};

/// Feeds an instance to a matcher for t = 0..horizon. The matcher sees only
/// arrivals and the current f_t; every lookup is logged. Throws
/// InfeasibleError("forcing horizon too small") if requests stay unmatched.
OnlineRun run_online(OnlineMatcher& matcher, const Instance& instance, bool record_trace = false);

/// solve_nonclairvoyant: the pipeline on a size-based instance.
MatchingSolution solve_nonclairvoyant(const Instance& instance, bool record_trace = false);

/// Copy of `instance` whose delay values after `cutoff` are perturbed
/// (size-based costs rescaled by random factors, order preserved).
Instance perturb_future(const Instance& instance, Timestep cutoff, std::uint64_t seed);

struct AuditResult {
  bool ok = true;
  bool queries_in_order = true;
  Timestep first_divergence = -1;
};

/// Non-clairvoyance audit: runs the pipeline on the instance and on a future
/// perturbation after `cutoff`; decisions up to the cutoff must coincide and
/// every delay lookup must be for the current timestep.
AuditResult audit_nonclairvoyance(const Instance& instance, Timestep cutoff, std::uint64_t seed);

}  // namespace mpmd
