#include "mpmd/instance.hpp"

#include "mpmd/errors.hpp"

namespace mpmd {

RequestSet Instance::arrived_by(Timestep t) const {
  RequestSet s;
  for (const auto& r : requests)
    if (r.arrival <= t) s = s.with(r.id);
  return s;
}

RequestSet Instance::arriving_at(Timestep t) const {
  RequestSet s;
  for (const auto& r : requests)
    if (r.arrival == t) s = s.with(r.id);
  return s;
}

double Instance::distance(RequestId u, RequestId v) const {
  if (u >= requests.size() || v >= requests.size())
    throw std::out_of_range("unknown request id " + std::to_string(u >= requests.size() ? u : v));
  return metric.distance(requests[u].point, requests[v].point);
}

void validate_prefix(const Instance& instance) {
  const auto& reqs = instance.requests;
  if (reqs.size() > RequestSet::kCapacity)
    throw ValidationError("at most " + std::to_string(RequestSet::kCapacity) + " requests are supported");
  if (instance.horizon < 0) throw ValidationError("horizon must be nonnegative");
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const Request& r = reqs[i];
    if (r.id != i) throw ValidationError("request ids must be 0..m-1 in arrival order (found id " +
                                         std::to_string(r.id) + " at position " + std::to_string(i) + ")");
    if (r.point >= instance.metric.size()) throw ValidationError("request " + std::to_string(i) + " names an unknown point");
    if (r.arrival < 0) throw ValidationError("request arrivals must be nonnegative");
    if (i > 0 && r.arrival < reqs[i - 1].arrival) throw ValidationError("requests must be sorted by arrival");
    if (r.arrival > instance.horizon)
      throw ValidationError("request " + std::to_string(i) + " arrives after the horizon");
  }
  if (instance.delay.kind() == DelayModel::Kind::general_table &&
      instance.delay.table_request_count() < reqs.size())
    throw ValidationError("set_table delay covers fewer requests than the instance has");
}

void validate(const Instance& instance) {
  validate_prefix(instance);
  if (instance.requests.size() % 2 != 0)
    throw ValidationError("perfect matching impossible: odd number of requests (" +
                          std::to_string(instance.requests.size()) + ")");
}

Cost instantaneous_delay(const Instance& instance, Timestep t, RequestSet unmatched) {
  if (t > instance.horizon) throw std::out_of_range("timestep past the horizon");
  if (unmatched.empty()) return Cost(0.0);
  if (t >= instance.horizon) return Cost::infinite();
  return instance.delay.evaluate(t, unmatched, instance.requests);
}

std::vector<Cost> mts_task_vector(const Instance& instance, Timestep t, RequestSet arrived,
                                  const std::vector<RequestSet>& states) {
  std::vector<Cost> out;
  out.reserve(states.size());
  for (RequestSet s : states) {
    if (!s.subset_of(arrived)) throw std::invalid_argument("state " + s.to_string() + " contains unarrived requests");
    out.push_back(instantaneous_delay(instance, t, arrived - s));
  }
  return out;
}

}  // namespace mpmd
