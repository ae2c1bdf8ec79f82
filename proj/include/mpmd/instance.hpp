#pragma once

#include <vector>

#include "mpmd/cost.hpp"
#include "mpmd/delay.hpp"
#include "mpmd/metric.hpp"
#include "mpmd/request_set.hpp"

namespace mpmd {

/// A complete offline description of an MPMD input.
///
/// Requests are sorted by arrival and request i has id i. The horizon is the
/// forcing time: every request must be matched by then.
struct Instance {
  MetricSpace metric;
  std::vector<Request> requests;
  DelayModel delay;
  Timestep horizon = 0;

  std::size_t size() const { return requests.size(); }
  RequestSet all() const { return RequestSet::first(requests.size()); }
  /// Requests with arrival <= t.
  RequestSet arrived_by(Timestep t) const;
  /// Requests with arrival == t.
  RequestSet arriving_at(Timestep t) const;
  /// Distance between the positions of two requests; throws for unknown ids.
  double distance(RequestId u, RequestId v) const;
};

/// Checks ids, ordering, point references, arrival <= horizon, even size and
/// delay/instance consistency. Throws ValidationError.
void validate(const Instance& instance);

/// Same checks as validate() except the even-size requirement; used while an
/// adversary is still emitting requests.
void validate_prefix(const Instance& instance);

/// f_t(U) including the forcing rule: at t >= horizon any nonempty U costs infinity.
Cost instantaneous_delay(const Instance& instance, Timestep t, RequestSet unmatched);

/// v[i] = f_t(arrived \ states[i]). Throws if a state contains an unarrived request.
std::vector<Cost> mts_task_vector(const Instance& instance, Timestep t, RequestSet arrived,
                                  const std::vector<RequestSet>& states);

}  // namespace mpmd
