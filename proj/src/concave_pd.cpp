#include "mpmd/concave_pd.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "mpmd/errors.hpp"

namespace mpmd::concave {

namespace {

double elapsed(const ConcaveFn& f, Timestep t, const Request& r) { return f(static_cast<double>(t - r.arrival)); }

}  // namespace

DualSystem::DualSystem(const MetricSpace& space, ConcaveFn f) : space_(&space), f_(std::move(f)) {}

double DualSystem::optcost(RequestId u, RequestId v) const {
  return concave_time_dist(*space_, requests_[u], requests_[v], f_);
}

void DualSystem::set_dual(std::size_t set, double y) {
  double delta = y - sets_[set].y;
  sets_[set].members.for_each([&](RequestId x) { load_[x] += delta; });
  sets_[set].y = y;
}

void DualSystem::notify() const {
  if (on_slice) on_slice(*this);
}

void DualSystem::arrive(const Request& r) {
  if (r.id != requests_.size()) throw ValidationError("request ids must be dense and in arrival order");
  if (r.arrival < clock_) throw ValidationError("request arrives before the current clock");
  if (requests_.size() >= RequestSet::kCapacity) throw ScaleError("at most 64 requests supported");
  if (r.point >= space_->size()) throw ValidationError("request point out of range");
  clock_ = r.arrival;
  requests_.push_back(r);
  sets_.push_back(DualSet{RequestSet{r.id}, 0.0, true});
  active_of_.push_back(sets_.size() - 1);
  load_.push_back(0.0);
  unmatched_ = unmatched_.with(r.id);
  events_.push_back(Event{Event::Kind::arrival, clock_, r.id, r.id, sets_.size() - 1, 0.0});
}

double DualSystem::budget(std::size_t set, Timestep t) const {
  double b = std::numeric_limits<double>::infinity();
  sets_[set].members.for_each([&](RequestId x) { b = std::min(b, elapsed(f_, t, requests_[x]) - load_[x]); });
  return b;
}

void DualSystem::grow(std::size_t set, double amount) {
  sets_[set].y += amount;
  sets_[set].members.for_each([&](RequestId x) { load_[x] += amount; });
}

bool DualSystem::process_tight_edge() {
  const std::size_t m = requests_.size();
  for (RequestId u = 0; u < m; ++u) {
    for (RequestId v = u + 1; v < m; ++v) {
      if (active_of_[u] == active_of_[v]) continue;
      if (slack(u, v) <= kTolerance) {
        merge(u, v);
        return true;
      }
    }
  }
  return false;
}

void DualSystem::merge(RequestId u, RequestId v) {
  std::size_t a = active_of_[u];
  std::size_t b = active_of_[v];
  marked_.emplace_back(u, v);
  RequestSet merged = sets_[a].members | sets_[b].members;
  sets_[a].active = false;
  sets_[b].active = false;
  sets_.push_back(DualSet{merged, 0.0, true});
  std::size_t id = sets_.size() - 1;
  merged.for_each([&](RequestId x) { active_of_[x] = id; });
  events_.push_back(Event{Event::Kind::tight, clock_, u, v, id, 0.0});

  std::vector<RequestId> free = (unmatched_ & merged).members();
  if (free.size() > 2) throw InvariantViolation("merged set holds more than two unmatched requests");
  if (free.size() == 2) {
    matching_.push_back(MatchedPair{free[0], free[1], clock_});
    unmatched_ = unmatched_.without(free[0]).without(free[1]);
    events_.push_back(Event{Event::Kind::match, clock_, free[0], free[1], id, 0.0});
  }
}

void DualSystem::run_timestep(Timestep t) {
  if (t < clock_) throw ValidationError("timesteps must not go backwards");
  clock_ = t;
  const std::size_t m = requests_.size();
  while (true) {
    if (process_tight_edge()) {
      notify();
      continue;
    }
    std::vector<char> grows(sets_.size(), 0);
    double delta = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      if (!growing(s)) continue;
      double b = budget(s, t);
      if (b > kTolerance) {
        grows[s] = 1;
        delta = std::min(delta, b);
      }
    }
    if (std::isinf(delta)) break;
    for (RequestId u = 0; u < m; ++u) {
      for (RequestId v = u + 1; v < m; ++v) {
        std::size_t a = active_of_[u];
        std::size_t b = active_of_[v];
        if (a == b) continue;
        int rate = grows[a] + grows[b];
        if (rate > 0) delta = std::min(delta, std::max(0.0, slack(u, v)) / rate);
      }
    }
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      if (!grows[s]) continue;
      grow(s, delta);
      events_.push_back(Event{Event::Kind::growth, t, 0, 0, s, delta});
    }
    notify();
  }
}

std::optional<Timestep> DualSystem::next_event_time(Timestep limit) const {
  if (limit <= clock_) return std::nullopt;
  const std::size_t m = requests_.size();
  auto tight_at = [&](Timestep tau) {
    std::vector<double> y_at(sets_.size(), 0.0);
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      if (!growing(s)) continue;
      double y = std::numeric_limits<double>::infinity();
      sets_[s].members.for_each(
          [&](RequestId x) { y = std::min(y, elapsed(f_, tau, requests_[x]) - (load_[x] - sets_[s].y)); });
      y_at[s] = std::max(sets_[s].y, y);
    }
    auto load_at = [&](RequestId x) {
      std::size_t s = active_of_[x];
      return growing(s) ? load_[x] - sets_[s].y + y_at[s] : load_[x];
    };
    for (RequestId u = 0; u < m; ++u) {
      for (RequestId v = u + 1; v < m; ++v) {
        if (active_of_[u] == active_of_[v]) continue;
        if (optcost(u, v) - load_at(u) - load_at(v) <= kTolerance) return true;
      }
    }
    return false;
  };
  if (!tight_at(limit)) return std::nullopt;
  Timestep lo = clock_ + 1;
  Timestep hi = limit;
  while (lo < hi) {
    Timestep mid = lo + (hi - lo) / 2;
    if (tight_at(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

void DualSystem::fast_forward(Timestep until) {
  if (until <= clock_) return;
  for (std::size_t s = 0; s < sets_.size(); ++s) {
    if (!growing(s)) continue;
    double y = std::numeric_limits<double>::infinity();
    sets_[s].members.for_each(
        [&](RequestId x) { y = std::min(y, elapsed(f_, until, requests_[x]) - (load_[x] - sets_[s].y)); });
    if (y > sets_[s].y) {
      double amount = y - sets_[s].y;
      grow(s, amount);
      events_.push_back(Event{Event::Kind::growth, until, 0, 0, s, amount});
    }
  }
  clock_ = until;
  const std::size_t m = requests_.size();
  for (RequestId u = 0; u < m; ++u) {
    for (RequestId v = u + 1; v < m; ++v) {
      if (active_of_[u] != active_of_[v] && slack(u, v) < -kTolerance) {
        throw InvariantViolation("fast-forward overshot the cut of edge (" + std::to_string(u) + ", " +
                                 std::to_string(v) + ")");
      }
    }
  }
  notify();
}

std::vector<Event> advance(DualSystem& sys, Timestep t) {
  const std::size_t before = sys.events().size();
  sys.run_timestep(t);
  return {sys.events().begin() + static_cast<std::ptrdiff_t>(before), sys.events().end()};
}

double req_growth(const DualSystem& sys, RequestId u, Timestep t) {
  const Request& r = sys.requests().at(u);
  if (t < r.arrival) throw ValidationError("req_growth before arrival");
  double raw = sys.f()(static_cast<double>(t - r.arrival)) - sys.load(u);
  if (raw < -kTolerance) {
    throw InvariantViolation("dual overshoot at request " + std::to_string(u) + ": reqGrowth " + format_number(raw));
  }
  return std::max(0.0, raw);
}

namespace {

struct Forest {
  std::vector<std::vector<RequestId>> adj;

  /// Edges of the unique path from a to b, empty if disconnected.
  std::optional<std::vector<std::pair<RequestId, RequestId>>> path(RequestId a, RequestId b) const {
    std::vector<RequestId> parent(adj.size(), adj.size());
    std::vector<RequestId> stack{a};
    parent[a] = a;
    while (!stack.empty()) {
      RequestId x = stack.back();
      stack.pop_back();
      for (RequestId y : adj[x]) {
        if (parent[y] != adj.size()) continue;
        parent[y] = x;
        stack.push_back(y);
      }
    }
    if (parent[b] == adj.size()) return std::nullopt;
    std::vector<std::pair<RequestId, RequestId>> edges;
    for (RequestId x = b; x != a; x = parent[x]) edges.emplace_back(parent[x], x);
    return edges;
  }
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

AuditReport audit_dual(const DualSystem& sys) {
  AuditReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.failures.push_back(std::move(msg));
  };
  const std::size_t m = sys.requests().size();
  const auto& sets = sys.sets();

  for (RequestId u = 0; u < m; ++u) {
    for (RequestId v = u + 1; v < m; ++v) {
      double cut = 0.0;
      for (const DualSet& s : sets) {
        if (s.members.contains(u) != s.members.contains(v)) cut += s.y;
      }
      double cap = sys.optcost(u, v);
      if (cut > cap + kTolerance) {
        fail("dual constraint violated on (" + std::to_string(u) + ", " + std::to_string(v) + "): " +
             format_number(cut) + " > " + format_number(cap));
      }
    }
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].y < -kTolerance) fail("negative dual on set " + sets[i].members.to_string());
  }

  std::vector<std::size_t> uf(m);
  std::iota(uf.begin(), uf.end(), 0);
  Forest forest{std::vector<std::vector<RequestId>>(m)};
  for (auto [u, v] : sys.marked_edges()) {
    if (sys.active_set(u) != sys.active_set(v)) {
      fail("marked edge (" + std::to_string(u) + ", " + std::to_string(v) + ") crosses active sets");
    }
    std::size_t a = find_root(uf, u);
    std::size_t b = find_root(uf, v);
    if (a == b) {
      fail("marked edges contain a cycle through (" + std::to_string(u) + ", " + std::to_string(v) + ")");
      continue;
    }
    uf[a] = b;
    forest.adj[u].push_back(v);
    forest.adj[v].push_back(u);
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!sets[i].active) continue;
    std::vector<RequestId> members = sets[i].members.members();
    for (RequestId x : members) {
      if (find_root(uf, x) != find_root(uf, members.front())) {
        fail("active set " + sets[i].members.to_string() + " is not spanned by marked edges");
        break;
      }
    }
  }

  for (const MatchedPair& e : sys.matching()) {
    auto path = forest.path(e.a, e.b);
    std::string pair = "(" + std::to_string(e.a) + ", " + std::to_string(e.b) + ")";
    if (!path) {
      fail("no marked path joins matched pair " + pair);
      continue;
    }
    for (const DualSet& s : sets) {
      if (s.y <= kTolerance) continue;
      int crossings = 0;
      for (auto [x, y] : *path) crossings += s.members.contains(x) != s.members.contains(y) ? 1 : 0;
      if (crossings > 2) {
        fail("path of matched pair " + pair + " crosses the cut of " + s.members.to_string() + " " +
             std::to_string(crossings) + " times");
      }
    }
  }
  return report;
}

std::vector<std::string> witness_gaps(const DualSystem& sys) {
  std::vector<std::string> gaps;
  const auto& sets = sys.sets();
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (!sys.growing(s)) continue;
    double best = std::numeric_limits<double>::infinity();
    sets[s].members.for_each([&](RequestId x) {
      const Request& r = sys.requests()[x];
      best = std::min(best, std::abs(sys.f()(static_cast<double>(sys.clock() - r.arrival)) - sys.load(x)));
    });
    if (best > kTolerance) {
      gaps.push_back("growing set " + sets[s].members.to_string() + " has no saturated member at t=" +
                     std::to_string(sys.clock()) + " (closest gap " + format_number(best) + ")");
    }
  }
  return gaps;
}

DualReport dual_report(const DualSystem& sys) {
  DualReport report;
  for (const DualSet& s : sys.sets()) {
    if (s.y <= 0.0) continue;
    report.sets.push_back(s);
    if (s.members.size() % 2 == 1) report.dual_objective += s.y;
  }
  report.marked_edges = sys.marked_edges();
  report.matching = sys.matching();
  return report;
}

nlohmann::json dual_report_to_json(const DualReport& report) {
  nlohmann::json sets = nlohmann::json::array();
  for (const DualSet& s : report.sets) sets.push_back({{"members", s.members.members()}, {"y", s.y}});
  nlohmann::json marked = nlohmann::json::array();
  for (auto [u, v] : report.marked_edges) marked.push_back({u, v});
  nlohmann::json matching = nlohmann::json::array();
  for (const MatchedPair& e : report.matching) matching.push_back({{"a", e.a}, {"b", e.b}, {"t", e.t}});
  return {{"sets", sets}, {"marked_edges", marked}, {"matching", matching}, {"dual_objective", report.dual_objective}};
}

ConcaveResult solve_concave(const Instance& instance, bool audit_every_slice) {
  const ConcaveFn* f = instance.delay.concave();
  if (f == nullptr) throw ValidationError("the primal-dual algorithm requires uniform concave delay");
  validate(instance);

  ConcaveResult result;
  DualSystem sys(instance.metric, *f);
  auto record = [&](const std::vector<std::string>& failures) {
    for (const std::string& msg : failures) {
      if (result.audit_failures.size() < 32) {
        result.audit_failures.push_back("t=" + std::to_string(sys.clock()) + ": " + msg);
      }
    }
  };
  if (audit_every_slice) {
    sys.on_slice = [&](const DualSystem& s) {
      ++result.slices_audited;
      record(audit_dual(s).failures);
    };
  }

  const auto& requests = instance.requests;
  std::size_t next = 0;
  Timestep t = requests.empty() ? 0 : requests.front().arrival;
  while (next < requests.size() || !sys.unmatched().empty()) {
    while (next < requests.size() && requests[next].arrival == t) sys.arrive(requests[next++]);
    sys.run_timestep(t);
    if (audit_every_slice) record(witness_gaps(sys));
    if (next == requests.size() && sys.unmatched().empty()) break;

    Timestep limit = next < requests.size() ? requests[next].arrival - 1 : instance.horizon;
    std::optional<Timestep> event = sys.next_event_time(limit);
    if (event) {
      sys.fast_forward(*event - 1);
      t = *event;
      continue;
    }
    sys.fast_forward(limit);
    if (audit_every_slice) record(witness_gaps(sys));
    if (next == requests.size()) {
      std::ostringstream msg;
      msg << "requests unmatched at horizon " << instance.horizon << "; active sets:";
      for (const DualSet& s : sys.sets()) {
        if (s.active && s.members.size() % 2 == 1) msg << ' ' << s.members.to_string() << " y=" << format_number(s.y);
      }
      throw InfeasibleError(msg.str());
    }
    t = requests[next].arrival;
  }

  result.solution = make_solution(instance, sys.matching());
  result.dual = dual_report(sys);
  result.events = sys.events();
  return result;
}

}  // namespace mpmd::concave
