#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpmd/concave_fn.hpp"
#include "mpmd/instance.hpp"
#include "mpmd/solution.hpp"

namespace mpmd::concave {

struct DualSet {
  RequestSet members;
  double y = 0.0;
  bool active = true;
};

struct Event {
  enum class Kind { arrival, growth, tight, match };
  Kind kind = Kind::arrival;
  Timestep t = 0;
  RequestId u = 0;      ///< arrival: the request; tight/match: first endpoint
  RequestId v = 0;      ///< tight/match: second endpoint
  std::size_t set = 0;  ///< growth: the set; tight: the merged set
  double amount = 0.0;  ///< growth: the increase of y
};

/// Moat-growing primal-dual state for uniform concave delay.
///
/// Time advances in integer timesteps. Within a timestep the system
/// alternates between processing tight cut edges (mark, merge, match) and
/// growing all odd active sets by a common slice, capped so that no cut edge
/// overshoots and no set exceeds its budget min over members of
/// f(t - atime(x)) - load(x). A timestep ends when no odd active set has
/// budget left.
class DualSystem {
 public:
  DualSystem(const MetricSpace& space, ConcaveFn f);

  /// Adds a request arriving at the current clock as a singleton active set.
  void arrive(const Request& r);
  /// Runs the event loop of timestep t (>= clock); arrivals for t first.
  void run_timestep(Timestep t);
  /// First timestep in (clock, limit] at which growing every odd active set
  /// by its full budget would make a cut edge tight, if any.
  std::optional<Timestep> next_event_time(Timestep limit) const;
  /// Applies full-budget growth for timesteps (clock, until]; requires that no
  /// cut edge becomes tight before `until`.
  void fast_forward(Timestep until);

  /// Called after every growth slice, tight event and fast-forward.
  std::function<void(const DualSystem&)> on_slice;

  const ConcaveFn& f() const { return f_; }
  const MetricSpace& space() const { return *space_; }
  const std::vector<Request>& requests() const { return requests_; }
  const std::vector<DualSet>& sets() const { return sets_; }
  std::size_t active_set(RequestId u) const { return active_of_[u]; }
  double load(RequestId u) const { return load_[u]; }
  double optcost(RequestId u, RequestId v) const;
  const std::vector<std::pair<RequestId, RequestId>>& marked_edges() const { return marked_; }
  const std::vector<MatchedPair>& matching() const { return matching_; }
  RequestSet unmatched() const { return unmatched_; }
  Timestep clock() const { return clock_; }
  const std::vector<Event>& events() const { return events_; }
  bool growing(std::size_t set) const { return sets_[set].active && sets_[set].members.size() % 2 == 1; }

  /// Test hook: overwrite a dual value.
  void set_dual(std::size_t set, double y);

 private:
  double budget(std::size_t set, Timestep t) const;
  double slack(RequestId u, RequestId v) const { return optcost(u, v) - load_[u] - load_[v]; }
  bool process_tight_edge();
  void merge(RequestId u, RequestId v);
  void grow(std::size_t set, double amount);
  void notify() const;

  const MetricSpace* space_;
  ConcaveFn f_;
  std::vector<Request> requests_;
  std::vector<DualSet> sets_;
  std::vector<std::size_t> active_of_;
  std::vector<double> load_;
  std::vector<std::pair<RequestId, RequestId>> marked_;
  std::vector<MatchedPair> matching_;
  RequestSet unmatched_;
  Timestep clock_ = 0;
  std::vector<Event> events_;
};

/// Runs timestep t on `sys` and returns the events it produced.
std::vector<Event> advance(DualSystem& sys, Timestep t);

/// f(t - atime(u)) - load(u), clamped at 0; throws InvariantViolation if the
/// raw value is below -1e-9 (dual overshoot).
double req_growth(const DualSystem& sys, RequestId u, Timestep t);

struct AuditReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Checks dual feasibility on every pair, that marked edges form a forest
/// spanning each active set without crossing between active sets, that every
/// matched pair is joined by a marked path, and that each such path crosses
/// the cut of every positive-dual set at most twice.
AuditReport audit_dual(const DualSystem& sys);

/// Growing sets without a request x satisfying load(x) = f(clock - atime(x)).
std::vector<std::string> witness_gaps(const DualSystem& sys);

struct DualReport {
  std::vector<DualSet> sets;  ///< sets with positive dual value
  std::vector<std::pair<RequestId, RequestId>> marked_edges;
  std::vector<MatchedPair> matching;
  double dual_objective = 0.0;  ///< sum of y_S over odd S
};

DualReport dual_report(const DualSystem& sys);
nlohmann::json dual_report_to_json(const DualReport& report);

struct ConcaveResult {
  MatchingSolution solution;
  DualReport dual;
  std::vector<Event> events;
  std::size_t slices_audited = 0;
  std::vector<std::string> audit_failures;  ///< first failures found during the run
};

/// Runs the primal-dual algorithm on an instance with uniform concave delay
/// until every request is matched. With `audit_every_slice`, audit_dual runs
/// after each event slice and witness_gaps at every timestep end.
ConcaveResult solve_concave(const Instance& instance, bool audit_every_slice = false);

}  // namespace mpmd::concave
