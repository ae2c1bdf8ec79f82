#include "mpmd/adversaries.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mpmd/errors.hpp"
#include "mpmd/generators.hpp"
#include "mpmd/oracles.hpp"
#include "mpmd/pipeline.hpp"

namespace mpmd::adversary {

namespace {

/// Shared driver state: feeds one timestep to the matcher and checks the
/// published pairs.
class Session {
 public:
  Session(Transcript& out, OnlineMatcher& matcher) : out_(&out), matcher_(&matcher) {}

  /// Runs timestep t; returns the pairs the matcher published.
  std::vector<MatchedPair> step(Timestep t, std::vector<Request> arrivals, const InstantDelay& delay,
                                std::string description) {
    for (const Request& r : arrivals) {
      requests_.push_back(r);
      unmatched_ = unmatched_.with(r.id);
    }
    std::vector<MatchedPair> pairs = matcher_->step(t, arrivals, delay);
    for (const MatchedPair& e : pairs) {
      if (!unmatched_.contains(e.a) || !unmatched_.contains(e.b) || e.a == e.b || e.t != t)
        throw InvariantViolation(matcher_->name() + " emitted an invalid pair at t=" + std::to_string(t));
      unmatched_ = unmatched_.without(e.a).without(e.b);
      out_->edges.push_back(e);
    }
    if (out_->feasible && delay(unmatched_).is_infinite()) {
      out_->feasible = false;
      out_->infeasibility = "unmatched set " + unmatched_.to_string() + " has infinite delay at t=" + std::to_string(t);
    }
    out_->steps.push_back(TranscriptStep{t, std::move(arrivals), std::move(description), pairs});
    return pairs;
  }

  RequestSet unmatched() const { return unmatched_; }
  const std::vector<Request>& requests() const { return requests_; }

 private:
  Transcript* out_;
  OnlineMatcher* matcher_;
  std::vector<Request> requests_;
  RequestSet unmatched_;
};

void finish(Transcript& tr) {
  if (tr.feasible && tr.edges.size() * 2 != tr.instance.size()) {
    tr.feasible = false;
    tr.infeasibility = "requests left unmatched at the end";
  }
  tr.alg_distance = matching_distance_cost(tr.instance, tr.edges);
  tr.cross_matches = 0;
  for (const MatchedPair& e : tr.edges) {
    if (tr.instance.requests[e.a].point != tr.instance.requests[e.b].point) ++tr.cross_matches;
  }
  if (tr.feasible) {
    const MatchingSolution sol = make_solution(tr.instance, tr.edges);
    const VerificationReport report = verify_solution(sol, tr.instance);
    if (!report.ok) throw InvariantViolation("adversary transcript does not verify: " + report.failures.front());
    tr.alg_cost = sol.total;
  } else {
    tr.alg_cost = Cost::infinite();
  }
  if (tr.alg_cost.is_infinite()) {
    tr.ratio = std::numeric_limits<double>::infinity();
  } else {
    tr.ratio = tr.alg_cost.raw() / tr.opt_cost.finite();
  }
}

std::string set_rule(const std::string& prefix, RequestSet due) {
  return prefix + "inf if unmatched meets " + due.to_string() + ", else 0";
}

}  // namespace

Transcript four_point_adversary(double D, double eps, const std::string& algo) {
  if (!(D > eps && eps > 0.0)) throw ValidationError("four-point adversary needs D > eps > 0");
  Transcript tr;
  tr.kind = "four_point";
  tr.algorithm = algo;
  tr.instance.metric = MetricSpace::four_point(eps, D);
  tr.instance.horizon = 2;
  const MetricSpace& space = tr.instance.metric;
  auto matcher = make_matcher(algo, space);
  Session session(tr, *matcher);

  auto due_rule = [](RequestSet due) {
    return InstantDelay([due](RequestSet u) { return (u & due).empty() ? Cost(0.0) : Cost::infinite(); });
  };

  const RequestSet due0{0};
  session.step(0, {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}}, due_rule(due0), set_rule("", due0));

  std::optional<RequestId> deadlined;
  for (RequestId r : {RequestId{1}, RequestId{2}}) {
    if (session.unmatched().contains(r)) {
      deadlined = r;
      break;
    }
  }
  const RequestSet due1 = deadlined ? due0.with(*deadlined) : due0;
  session.step(1, {}, due_rule(due1), set_rule("", due1));

  PointId r5_point = 2;
  if (deadlined) r5_point = *deadlined == 1 ? 2 : 1;
  const RequestSet due2 = RequestSet::first(6);
  session.step(2, {{4, r5_point, 2}, {5, 3, 2}}, due_rule(due2), "inf for any nonempty unmatched set (horizon)");

  tr.instance.requests = session.requests();
  std::vector<SetTablePhase> rows;
  for (auto [t, due] : {std::pair{Timestep{0}, due0}, std::pair{Timestep{1}, due1}, std::pair{Timestep{2}, due2}}) {
    SetTablePhase row{t, t, std::vector<Cost>(64, Cost(0.0))};
    for (std::size_t mask = 0; mask < 64; ++mask) {
      if ((RequestSet(mask) & due) != RequestSet()) row.values[mask] = Cost::infinite();
    }
    rows.push_back(std::move(row));
  }
  tr.instance.delay = DelayModel::set_table(6, std::move(rows));
  validate(tr.instance);

  tr.opt_oracle = oracles::brute_force_opt(tr.instance).total;
  tr.opt_cost = *tr.opt_oracle;
  finish(tr);
  return tr;
}

Transcript uniform_phase_adversary(std::size_t n, const std::string& algo, bool randomized, std::uint64_t seed) {
  if (n < 3) throw ValidationError("phase adversary needs n >= 3");
  Transcript tr;
  tr.kind = randomized ? "rand_phase" : "det_phase";
  tr.algorithm = algo;
  tr.seed = seed;
  tr.instance.metric = MetricSpace::uniform(n);
  const MetricSpace& space = tr.instance.metric;
  auto matcher = make_matcher(algo, space);
  Session session(tr, *matcher);
  Rng rng(seed);

  std::vector<int> received(n, 0);
  std::vector<std::tuple<Timestep, Timestep, std::size_t>> phases;
  std::vector<Request> arrivals;
  for (PointId p = 0; p < n; ++p) {
    arrivals.push_back(Request{p, p, 0});
    received[p] = 1;
  }
  const Timestep idle_cap = static_cast<Timestep>(n) + 2;
  std::size_t phase = 1;
  Timestep phase_start = 0;
  Timestep t = 0;
  while (true) {
    const std::size_t limit = n - phase;
    const InstantDelay delay = [limit](RequestSet u) { return u.size() <= limit ? Cost(0.0) : Cost::infinite(); };
    const auto pairs =
        session.step(t, std::move(arrivals), delay, "inf if more than " + std::to_string(limit) + " unmatched, else 0");
    arrivals.clear();
    if (!tr.feasible) {
      phases.emplace_back(phase_start, t, limit);
      break;
    }
    if (pairs.empty()) {
      if (t - phase_start >= idle_cap) {
        throw InfeasibleError(algo + " stopped matching in phase " + std::to_string(phase) + " of the phase adversary");
      }
      ++t;
      continue;
    }
    phases.emplace_back(phase_start, t, limit);
    if (phase == n - 1) break;
    ++phase;
    ++t;
    phase_start = t;

    std::vector<bool> active(n, false);
    session.unmatched().for_each([&](RequestId r) { active[session.requests()[r].point] = true; });
    std::vector<PointId> unsaturated;
    std::vector<PointId> inactive_unsaturated;
    for (PointId p = 0; p < n; ++p) {
      if (received[p] >= 2) continue;
      unsaturated.push_back(p);
      if (!active[p]) inactive_unsaturated.push_back(p);
    }
    if (inactive_unsaturated.size() < 2) {
      throw InvariantViolation("phase adversary: fewer than two inactive unsaturated points before phase " +
                               std::to_string(phase));
    }
    PointId target = inactive_unsaturated.front();
    if (randomized) {
      std::uniform_int_distribution<std::size_t> pick(0, unsaturated.size() - 1);
      target = unsaturated[pick(rng)];
    }
    ++received[target];
    arrivals.push_back(Request{session.requests().size(), target, t});
  }

  tr.instance.requests = session.requests();
  tr.instance.horizon = t;
  tr.instance.delay = DelayModel::deadline_phases(phases);
  if (tr.feasible && tr.instance.size() % 2 == 1) {
    tr.feasible = false;
    tr.infeasibility = "odd number of requests emitted";
  }
  tr.opt_cost = Cost(1.0);
  if (tr.feasible && tr.instance.size() <= 16) {
    tr.opt_oracle = oracles::offline_opt_dp(tr.instance);
    if (!approx_equal(*tr.opt_oracle, tr.opt_cost)) {
      throw InvariantViolation("phase adversary: oracle optimum " + tr.opt_oracle->to_string() + " differs from 1");
    }
  }
  finish(tr);
  return tr;
}

std::string transcript_to_text(const Transcript& tr) {
  std::ostringstream out;
  out << "adversary " << tr.kind << " algo=" << tr.algorithm << " seed=" << tr.seed << '\n';
  out << "points";
  for (const std::string& label : tr.instance.metric.labels()) out << ' ' << label;
  out << '\n';
  for (const TranscriptStep& s : tr.steps) {
    out << "t=" << s.t;
    if (!s.arrivals.empty()) {
      out << " arrive";
      for (const Request& r : s.arrivals) out << " r" << r.id << '@' << tr.instance.metric.label(r.point);
    }
    out << " | delay: " << s.delay << " | match";
    if (s.matched.empty()) out << " none";
    for (const MatchedPair& e : s.matched) out << " (r" << e.a << ",r" << e.b << ")";
    out << '\n';
  }
  if (!tr.feasible) out << "infeasible: " << tr.infeasibility << '\n';
  out << "alg_cost=" << tr.alg_cost.to_string() << " alg_distance=" << tr.alg_distance.to_string()
      << " cross_matches=" << tr.cross_matches << '\n';
  out << "opt_cost=" << tr.opt_cost.to_string();
  if (tr.opt_oracle) out << " oracle=" << tr.opt_oracle->to_string();
  out << '\n';
  out << "ratio=" << (std::isinf(tr.ratio) ? std::string("inf") : format_number(tr.ratio)) << '\n';
  return out.str();
}

}  // namespace mpmd::adversary
