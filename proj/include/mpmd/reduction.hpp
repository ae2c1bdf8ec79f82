#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mpmd/cost.hpp"
#include "mpmd/instance.hpp"
#include "mpmd/mts.hpp"
#include "mpmd/request_set.hpp"

namespace mpmd::reduction {

/// Request-to-request distances together with the requests usable as
/// intermediates ("witnesses") on cross pairs.
class RequestMetric {
 public:
  RequestMetric() = default;
  RequestMetric(std::vector<std::vector<double>> dist, RequestSet universe);
  static RequestMetric from_instance(const Instance& instance, RequestSet arrived);

  double d(RequestId p, RequestId q) const { return dist_[p * n_ + q]; }
  RequestSet universe() const { return universe_; }

  struct Cross {
    double cost;
    std::optional<RequestId> witness;  ///< unset when no intermediate exists
  };
  /// min over s in universe \ {p, q} of d(p, s) + d(s, q), smallest s on ties.
  const Cross& cross(RequestId p, RequestId q) const { return cross_[p * n_ + q]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
  std::vector<Cross> cross_;
  RequestSet universe_;
};

enum class Side { a_only, b_only, cross };

struct DecompositionEntry {
  RequestId p = 0;  ///< for cross entries, the endpoint in A \ B
  RequestId q = 0;  ///< for cross entries, the endpoint in B \ A
  std::optional<RequestId> witness;
  Side side = Side::a_only;
  double cost = 0.0;
};

struct CanonicalDecomposition {
  std::vector<DecompositionEntry> entries;
  double total_cost = 0.0;
};

/// Minimum-cost pairing of A △ B: same-side pairs cost d(p, q), cross pairs go
/// through the best witness. Entries are ordered by their smaller endpoint.
/// Throws InfeasibleError("no intermediate request exists") if a needed cross
/// pair has no witness.
CanonicalDecomposition canonical_decomposition(RequestSet a, RequestSet b, const RequestMetric& metric);

/// Shortest-path distance between A and B in the transition graph.
double transition_cost(RequestSet a, RequestSet b, const RequestMetric& metric);

/// True when A and B differ by exactly one added or removed pair.
bool are_neighbors(RequestSet a, RequestSet b);

/// Transition-graph path from `from` realizing the decomposition; excludes
/// `from`, ends at `to`, consecutive states are neighbors.
std::vector<RequestSet> realize(RequestSet from, RequestSet to, const RequestMetric& metric);

struct ScheduleStep {
  RequestSet state;
  bool synthetic = false;  ///< inserted by densification; pays no processing cost
  Timestep t = 0;
};

/// Expands each jump between consecutive states into a neighbor path through
/// synthetic intermediates. The first state is kept as is.
std::vector<ScheduleStep> densify_schedule(std::span<const ScheduleStep> raw, const RequestMetric& metric);

struct ScheduleBreakdown {
  Cost transition;
  Cost processing;
  Cost total;
};

/// Cost of a schedule: every step pays the transition from its predecessor
/// (none for the first) in `metric_at(step.t)`, and non-synthetic steps also
/// pay processing(step.t, step.state). Schedules that start at the empty
/// state should begin with a synthetic empty step.
ScheduleBreakdown schedule_cost(std::span<const ScheduleStep> schedule,
                                const std::function<Cost(Timestep, RequestSet)>& processing,
                                const std::function<const RequestMetric&(Timestep)>& metric_at);

/// Sensible-ALG: turns a neighbor-step schedule into a monotone one whose
/// state is never smaller than the input state.
class MonotoneConverter {
 public:
  struct Step {
    RequestSet output;
    std::optional<std::pair<RequestId, RequestId>> added;
    double potential = 0.0;   ///< c(S_i, S'_i)
    double claim_lhs = 0.0;   ///< c(S'_{i-1}, S'_i)
    double claim_rhs = 0.0;   ///< c(S_{i-1}, S_i) - (phi_i - phi_{i-1})
  };

  explicit MonotoneConverter(RequestSet start = {}) : input_(start), current_(start) {}

  /// `next_input` must be a neighbor of the previous input (or equal to it).
  /// Distances and potentials are measured in `metric`.
  Step step(RequestSet next_input, const RequestMetric& metric);

  RequestSet current() const { return current_; }
  RequestSet input() const { return input_; }
  const std::vector<std::pair<RequestId, RequestId>>& added_pairs() const { return added_; }

 private:
  RequestSet input_;
  RequestSet current_;
  std::vector<std::pair<RequestId, RequestId>> added_;
};

/// MTS space of all even subsets of the first k arrived requests, with the
/// transition-graph shortest-path metric.
///
/// State i is the subset with mask (i << 1) | parity(i); indices therefore
/// follow mask order and growing k only appends states. version() is the
/// arrived count, since new requests can act as witnesses and shorten paths.
class TransitionGraphSpace : public mts::MtsSpace {
 public:
  static constexpr std::size_t kMaxRequests = 20;

  /// Empty space over `space`, which must outlive this object.
  explicit TransitionGraphSpace(const MetricSpace& space) : space_(&space) {}
  /// Space over the first k requests of `instance`.
  TransitionGraphSpace(const Instance& instance, std::size_t k);

  /// Reveals the next request (its id must equal arrived()). Throws ScaleError
  /// past kMaxRequests.
  void add_request(const Request& r);
  std::size_t arrived() const { return points_.size(); }
  const RequestMetric& metric() const { return metric_; }

  static RequestSet state(mts::StateIndex i) {
    const auto bits = static_cast<RequestSet::Bits>(i);
    return RequestSet(bits << 1 | static_cast<RequestSet::Bits>(std::popcount(bits) & 1));
  }
  static mts::StateIndex index_of(RequestSet s) { return static_cast<mts::StateIndex>(s.bits() >> 1); }

  std::size_t size() const override { return arrived() <= 1 ? 1 : std::size_t{1} << (arrived() - 1); }
  double distance(mts::StateIndex a, mts::StateIndex b) const override;
  std::vector<double> distances_from(mts::StateIndex s) const override;
  mts::Values envelope(const mts::Values& v) const override;
  std::uint64_t version() const override { return arrived(); }

 private:
  std::vector<double> dijkstra(std::vector<double> dist) const;

  const MetricSpace* space_;
  std::vector<PointId> points_;
  RequestMetric metric_;
  std::vector<std::pair<RequestSet::Bits, double>> edges_;
};

}  // namespace mpmd::reduction
