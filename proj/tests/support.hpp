#pragma once

#include <random>
#include <vector>

#include "mpmd/generators.hpp"
#include "mpmd/instance.hpp"
#include "mpmd/reduction.hpp"

namespace mpmd::testing {

/// Random schedule for an MPMD-Size instance: one even subset of the arrived
/// requests per timestep 0..horizon, with finite processing cost, ending at
/// the full set. Starts with a synthetic empty step.
inline std::vector<reduction::ScheduleStep> random_schedule(const Instance& inst, Rng& rng) {
  std::vector<reduction::ScheduleStep> out{{RequestSet(), true, 0}};
  std::bernoulli_distribution keep(0.3);
  for (Timestep t = 0; t <= inst.horizon; ++t) {
    const auto arrived = inst.arrived_by(t).members();
    RequestSet s = out.back().state;
    if (t == inst.horizon) {
      s = inst.all();
    } else if (!keep(rng) || instantaneous_delay(inst, t, inst.arrived_by(t) - s).is_infinite()) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        RequestSet cand;
        for (RequestId r : arrived)
          if (rng() & 1U) cand = cand.with(r);
        if (cand.size() % 2 != 0) cand = cand.without(cand.members().back());
        s = cand;
        if (instantaneous_delay(inst, t, inst.arrived_by(t) - s).is_finite()) break;
      }
      if (instantaneous_delay(inst, t, inst.arrived_by(t) - s).is_infinite()) {
        s = RequestSet::of(arrived);
        if (s.size() % 2 != 0) s = s.without(arrived.back());
      }
    }
    out.push_back({s, false, t});
  }
  return out;
}

/// Request metrics per timestep, witnesses restricted to arrived requests.
inline std::vector<reduction::RequestMetric> metrics_by_time(const Instance& inst) {
  std::vector<reduction::RequestMetric> out;
  for (Timestep t = 0; t <= inst.horizon; ++t)
    out.push_back(reduction::RequestMetric::from_instance(inst, inst.arrived_by(t)));
  return out;
}

/// Densifies each timestep's jump in that timestep's metric.
inline std::vector<reduction::ScheduleStep> densify_by_time(const std::vector<reduction::ScheduleStep>& raw,
                                                            const std::vector<reduction::RequestMetric>& metrics) {
  std::vector<reduction::ScheduleStep> out{raw.front()};
  for (std::size_t i = 1; i < raw.size(); ++i) {
    const reduction::ScheduleStep pair[2] = {raw[i - 1], raw[i]};
    const auto dense = reduction::densify_schedule(pair, metrics[static_cast<std::size_t>(raw[i].t)]);
    out.insert(out.end(), dense.begin() + 1, dense.end());
  }
  return out;
}

}  // namespace mpmd::testing
