#include "mpmd/pipeline.hpp"

#include <algorithm>
#include <random>

#include "mpmd/errors.hpp"

namespace mpmd {

using reduction::TransitionGraphSpace;

NonclairvoyantMatcher::NonclairvoyantMatcher(const MetricSpace& space) : space_(space), solver_(space_) {}

std::vector<MatchedPair> NonclairvoyantMatcher::step(Timestep t, const std::vector<Request>& arrivals,
                                                     const InstantDelay& delay) {
  for (const auto& r : arrivals) space_.add_request(r);
  const RequestSet arrived = RequestSet::first(space_.arrived());

  mts::Values task(space_.size());
  for (mts::StateIndex i = 0; i < task.size(); ++i) task[i] = delay(arrived - TransitionGraphSpace::state(i));

  const RequestSet from = mts_state();
  solver_.step(std::move(task));
  const RequestSet to = mts_state();

  std::vector<MatchedPair> out;
  if (from == to) return out;
  for (RequestSet x : reduction::realize(from, to, space_.metric())) {
    const auto st = converter_.step(x, space_.metric());
    worst_claim_gap_ = std::max(worst_claim_gap_, st.claim_lhs - st.claim_rhs);
    converted_transition_ += st.claim_lhs;
    if (st.added) out.push_back({st.added->first, st.added->second, t});
  }
  return out;
}

std::vector<MatchedPair> GreedyMatcher::step(Timestep t, const std::vector<Request>& arrivals,
                                             const InstantDelay& delay) {
  for (const auto& r : arrivals) {
    requests_.push_back(r);
    unmatched_ = unmatched_.with(r.id);
  }
  std::vector<MatchedPair> out;
  while (unmatched_.size() >= 2 && delay(unmatched_).is_infinite()) {
    const auto ids = unmatched_.members();
    std::tuple<Cost, double, RequestId, RequestId> best{Cost::infinite(), 0.0, 0, 0};
    bool found = false;
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const RequestId p = ids[i];
        const RequestId q = ids[j];
        const std::tuple<Cost, double, RequestId, RequestId> cand{
            delay(unmatched_.without(p).without(q)),
            space_->distance(requests_[p].point, requests_[q].point), p, q};
        if (!found || cand < best) {
          best = cand;
          found = true;
        }
      }
    const auto [rest, d, p, q] = best;
    unmatched_ = unmatched_.without(p).without(q);
    out.push_back({p, q, t});
  }
  return out;
}

std::unique_ptr<OnlineMatcher> make_matcher(const std::string& name, const MetricSpace& space) {
  if (name == "nonclairvoyant") return std::make_unique<NonclairvoyantMatcher>(space);
  if (name == "greedy") return std::make_unique<GreedyMatcher>(space);
  throw ValidationError("unknown online algorithm '" + name + "' (expected nonclairvoyant or greedy)");
}

OnlineRun run_online(OnlineMatcher& matcher, const Instance& instance, bool record_trace) {
  validate(instance);
  OnlineRun run;
  RequestSet matched;
  std::vector<MatchedPair> edges;
  std::size_t next = 0;
  for (Timestep t = 0; t <= instance.horizon; ++t) {
    std::vector<Request> arrivals;
    while (next < instance.size() && instance.requests[next].arrival == t) arrivals.push_back(instance.requests[next++]);
    const RequestSet arrived = instance.arrived_by(t);
    const InstantDelay delay = [&](RequestSet unmatched) {
      if (run.delay_queries.empty() || run.delay_queries.back().first != t) run.delay_queries.emplace_back(t, 0);
      ++run.delay_queries.back().second;
      return instantaneous_delay(instance, t, unmatched);
    };
    auto pairs = matcher.step(t, arrivals, delay);
    for (const auto& e : pairs) {
      if (!arrived.contains(e.a) || !arrived.contains(e.b) || matched.contains(e.a) || matched.contains(e.b) ||
          e.a == e.b || e.t != t)
        throw InvariantViolation(matcher.name() + " emitted an invalid pair at t=" + std::to_string(t));
      matched = matched.with(e.a).with(e.b);
      edges.push_back(e);
    }
    run.per_step.push_back(std::move(pairs));
    if (record_trace) {
      const auto* nc = dynamic_cast<const NonclairvoyantMatcher*>(&matcher);
      run.solution.trace.push_back({t, nc ? nc->mts_state() : matched, matched});
    }
  }
  if (matched != instance.all()) throw InfeasibleError("forcing horizon too small");
  auto trace = std::move(run.solution.trace);
  run.solution = make_solution(instance, std::move(edges));
  run.solution.trace = std::move(trace);
  return run;
}

MatchingSolution solve_nonclairvoyant(const Instance& instance, bool record_trace) {
  if (!instance.delay.is_size_based())
    throw ValidationError("the nonclairvoyant solver needs size-based delay (got " +
                          std::string(kind_name(instance.delay.kind())) + ")");
  NonclairvoyantMatcher matcher(instance.metric);
  return run_online(matcher, instance, record_trace).solution;
}

Instance perturb_future(const Instance& instance, Timestep cutoff, std::uint64_t seed) {
  if (!instance.delay.is_size_based()) throw ValidationError("future perturbation needs size-based delay");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.25, 4.0);
  std::uniform_real_distribution<double> extra(0.0, 1.0);
  std::bernoulli_distribution add(0.5);

  std::vector<SizePhase> phases;
  for (auto p : instance.delay.size_phases()) {
    if (p.from > cutoff) continue;
    p.to = std::min(p.to, cutoff);
    phases.push_back(std::move(p));
  }
  const std::size_t m = instance.size();
  for (Timestep t = std::max<Timestep>(cutoff + 1, 0); t < instance.horizon; ++t) {
    SizePhase p{t, t, {Cost(0.0)}};
    for (std::size_t k = 1; k <= m; ++k) {
      const Cost prev_old = instance.delay.size_cost(t, k - 1);
      const Cost old = instance.delay.size_cost(t, k);
      if (old.is_infinite() || p.costs.back().is_infinite()) {
        p.costs.push_back(Cost::infinite());
        continue;
      }
      const double inc = (old.raw() - prev_old.raw()) * scale(rng) + (add(rng) ? extra(rng) : 0.0);
      p.costs.push_back(p.costs.back() + Cost(inc));
    }
    phases.push_back(std::move(p));
  }
  Instance out = instance;
  out.delay = DelayModel::size_based(std::move(phases));
  return out;
}

AuditResult audit_nonclairvoyance(const Instance& instance, Timestep cutoff, std::uint64_t seed) {
  const Instance perturbed = perturb_future(instance, cutoff, seed);
  NonclairvoyantMatcher a(instance.metric);
  NonclairvoyantMatcher b(perturbed.metric);
  const OnlineRun ra = run_online(a, instance);
  const OnlineRun rb = run_online(b, perturbed);
  AuditResult res;
  for (const auto* run : {&ra, &rb}) {
    Timestep last = -1;
    for (const auto& [t, count] : run->delay_queries) {
      if (t <= last) res.queries_in_order = false;
      last = t;
    }
  }
  for (Timestep t = 0; t <= std::min(cutoff, instance.horizon); ++t) {
    if (ra.per_step[static_cast<std::size_t>(t)] != rb.per_step[static_cast<std::size_t>(t)]) {
      res.first_divergence = t;
      break;
    }
  }
  res.ok = res.queries_in_order && res.first_divergence < 0;
  return res;
}

}  // namespace mpmd
