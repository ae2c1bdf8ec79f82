#include "mpmd/reduction.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "mpmd/errors.hpp"

namespace mpmd::reduction {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kExhaustiveLimit = 8;

struct Pairing {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into the element list
  double cost = kInf;
};

// Enumerates pairings with the smallest remaining element paired first and
// partners in increasing order, i.e. lexicographically; keeps the first strict improvement.
void enumerate(std::vector<std::size_t>& remaining, std::vector<std::pair<std::size_t, std::size_t>>& current,
               double cost, const std::vector<std::vector<double>>& w, Pairing& best) {
  if (cost >= best.cost) return;
  if (remaining.empty()) {
    if (cost < best.cost - kTolerance || best.pairs.empty()) best = {current, cost};
    return;
  }
  const std::size_t i = remaining.front();
  for (std::size_t k = 1; k < remaining.size(); ++k) {
    const std::size_t j = remaining[k];
    if (w[i][j] == kInf) continue;
    std::vector<std::size_t> rest;
    rest.reserve(remaining.size() - 2);
    for (std::size_t r = 1; r < remaining.size(); ++r)
      if (r != k) rest.push_back(remaining[r]);
    current.emplace_back(i, j);
    enumerate(rest, current, cost + w[i][j], w, best);
    current.pop_back();
  }
}

Pairing dp_pairing(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> f(full + 1, kInf);
  std::vector<std::uint8_t> partner(full + 1, 0);
  f[0] = 0.0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const auto i = static_cast<std::size_t>(std::countr_zero(mask));
    double best = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(mask >> j & 1U) || w[i][j] == kInf) continue;
      const double v = w[i][j] + f[mask & ~(std::size_t{1} << i) & ~(std::size_t{1} << j)];
      if (v < best - kTolerance || best == kInf) {
        best = v;
        partner[mask] = static_cast<std::uint8_t>(j);
      }
    }
    f[mask] = best;
  }
  Pairing out;
  out.cost = f[full];
  if (out.cost == kInf) return out;
  for (std::size_t mask = full; mask != 0;) {
    const auto i = static_cast<std::size_t>(std::countr_zero(mask));
    const std::size_t j = partner[mask];
    out.pairs.emplace_back(i, j);
    mask &= ~(std::size_t{1} << i) & ~(std::size_t{1} << j);
  }
  return out;
}

}  // namespace

RequestMetric::RequestMetric(std::vector<std::vector<double>> dist, RequestSet universe)
    : n_(dist.size()), universe_(universe) {
  dist_.resize(n_ * n_);
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t q = 0; q < n_; ++q) dist_[p * n_ + q] = dist[p][q];
  cross_.assign(n_ * n_, Cross{kInf, std::nullopt});
  const auto witnesses = universe.members();
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t q = 0; q < n_; ++q) {
      if (p == q) continue;
      Cross& c = cross_[p * n_ + q];
      for (RequestId s : witnesses) {
        if (s == p || s == q || s >= n_) continue;
        const double v = d(p, s) + d(s, q);
        if (v < c.cost) c = {v, s};
      }
    }
}

RequestMetric RequestMetric::from_instance(const Instance& instance, RequestSet arrived) {
  const std::size_t m = instance.size();
  std::vector<std::vector<double>> dist(m, std::vector<double>(m));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) dist[p][q] = instance.distance(p, q);
  return RequestMetric(std::move(dist), arrived);
}

CanonicalDecomposition canonical_decomposition(RequestSet a, RequestSet b, const RequestMetric& metric) {
  const auto elems = (a ^ b).members();
  const std::size_t n = elems.size();
  if (n % 2 != 0) throw std::invalid_argument("states of different parity");
  std::vector<std::vector<double>> w(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const RequestId x = elems[i];
      const RequestId y = elems[j];
      if (a.contains(x) == a.contains(y)) {
        w[i][j] = metric.d(x, y);
      } else {
        const auto& c = a.contains(x) ? metric.cross(x, y) : metric.cross(y, x);
        w[i][j] = c.cost;
      }
      w[j][i] = w[i][j];
    }

  Pairing best;
  if (n == 0) {
    best.cost = 0.0;
  } else if (n <= kExhaustiveLimit) {
    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
    std::vector<std::pair<std::size_t, std::size_t>> current;
    enumerate(remaining, current, 0.0, w, best);
  } else {
    best = dp_pairing(w);
  }
  if (best.cost == kInf) throw InfeasibleError("no intermediate request exists");

  CanonicalDecomposition out;
  out.total_cost = best.cost;
  for (const auto& [i, j] : best.pairs) {
    const RequestId x = elems[i];
    const RequestId y = elems[j];
    DecompositionEntry e;
    e.cost = w[i][j];
    if (a.contains(x) == a.contains(y)) {
      e.p = x;
      e.q = y;
      e.side = a.contains(x) ? Side::a_only : Side::b_only;
    } else {
      e.p = a.contains(x) ? x : y;
      e.q = a.contains(x) ? y : x;
      e.side = Side::cross;
      e.witness = metric.cross(e.p, e.q).witness;
    }
    out.entries.push_back(e);
  }
  return out;
}

double transition_cost(RequestSet a, RequestSet b, const RequestMetric& metric) {
  if (a == b) return 0.0;
  return canonical_decomposition(a, b, metric).total_cost;
}

bool are_neighbors(RequestSet a, RequestSet b) {
  const RequestSet diff = a ^ b;
  return diff.size() == 2 && (diff.subset_of(a) || diff.subset_of(b));
}

std::vector<RequestSet> realize(RequestSet from, RequestSet to, const RequestMetric& metric) {
  std::vector<RequestSet> path;
  RequestSet x = from;
  for (const auto& e : canonical_decomposition(from, to, metric).entries) {
    switch (e.side) {
      case Side::a_only:
        x = x.without(e.p).without(e.q);
        path.push_back(x);
        break;
      case Side::b_only:
        x = x.with(e.p).with(e.q);
        path.push_back(x);
        break;
      case Side::cross: {
        const RequestId s = *e.witness;
        if (x.contains(s)) {
          x = x.without(e.p).without(s);
          path.push_back(x);
          x = x.with(s).with(e.q);
        } else {
          x = x.with(s).with(e.q);
          path.push_back(x);
          x = x.without(e.p).without(s);
        }
        path.push_back(x);
        break;
      }
    }
  }
  if (x != to) throw InvariantViolation("decomposition replay did not reach the target state");
  return path;
}

std::vector<ScheduleStep> densify_schedule(std::span<const ScheduleStep> raw, const RequestMetric& metric) {
  std::vector<ScheduleStep> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i > 0 && raw[i].state != raw[i - 1].state) {
      const auto path = realize(raw[i - 1].state, raw[i].state, metric);
      for (std::size_t k = 0; k + 1 < path.size(); ++k) out.push_back({path[k], true, raw[i].t});
    }
    out.push_back(raw[i]);
  }
  return out;
}

ScheduleBreakdown schedule_cost(std::span<const ScheduleStep> schedule,
                                const std::function<Cost(Timestep, RequestSet)>& processing,
                                const std::function<const RequestMetric&(Timestep)>& metric_at) {
  ScheduleBreakdown out{Cost(0.0), Cost(0.0), Cost(0.0)};
  RequestSet prev = schedule.empty() ? RequestSet() : schedule.front().state;
  for (const auto& step : schedule) {
    out.transition += Cost(transition_cost(prev, step.state, metric_at(step.t)));
    if (!step.synthetic) out.processing += processing(step.t, step.state);
    prev = step.state;
  }
  out.total = out.transition + out.processing;
  return out;
}

MonotoneConverter::Step MonotoneConverter::step(RequestSet next_input, const RequestMetric& metric) {
  if (next_input != input_ && !are_neighbors(input_, next_input))
    throw std::invalid_argument("converter input must move by one transition-graph edge");
  const double phi_prev = transition_cost(input_, current_, metric);
  const double input_move = transition_cost(input_, next_input, metric);
  const RequestSet before = current_;

  Step st;
  if (next_input.size() > current_.size()) {
    const auto dec = canonical_decomposition(next_input, current_, metric);
    const auto it = std::find_if(dec.entries.begin(), dec.entries.end(),
                                 [](const DecompositionEntry& e) { return e.side == Side::a_only; });
    if (it == dec.entries.end())
      throw InvariantViolation("no single-edge pair on a canonical path from " + next_input.to_string() + " to " +
                               current_.to_string());
    current_ = current_.with(it->p).with(it->q);
    added_.emplace_back(it->p, it->q);
    st.added = std::make_pair(it->p, it->q);
  }
  input_ = next_input;
  st.output = current_;
  st.potential = transition_cost(input_, current_, metric);
  st.claim_lhs = transition_cost(before, current_, metric);
  st.claim_rhs = input_move - (st.potential - phi_prev);
  return st;
}

TransitionGraphSpace::TransitionGraphSpace(const Instance& instance, std::size_t k) : space_(&instance.metric) {
  for (std::size_t i = 0; i < k; ++i) add_request(instance.requests.at(i));
}

void TransitionGraphSpace::add_request(const Request& r) {
  const std::size_t k = points_.size();
  if (r.id != k) throw std::invalid_argument("requests must be added in id order");
  if (k + 1 > kMaxRequests)
    throw ScaleError("transition graph is limited to " + std::to_string(kMaxRequests) + " arrived requests");
  points_.push_back(r.point);
  std::vector<std::vector<double>> dist(k + 1, std::vector<double>(k + 1));
  for (std::size_t p = 0; p <= k; ++p)
    for (std::size_t q = 0; q <= k; ++q) dist[p][q] = space_->distance(points_[p], points_[q]);
  for (std::size_t p = 0; p < k; ++p)
    edges_.emplace_back(RequestSet::Bits{1} << p | RequestSet::Bits{1} << k, dist[p][k]);
  metric_ = RequestMetric(std::move(dist), RequestSet::first(k + 1));
}

double TransitionGraphSpace::distance(mts::StateIndex a, mts::StateIndex b) const {
  return transition_cost(state(a), state(b), metric_);
}

std::vector<double> TransitionGraphSpace::dijkstra(std::vector<double> dist) const {
  using Item = std::pair<double, mts::StateIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (mts::StateIndex s = 0; s < dist.size(); ++s)
    if (dist[s] < kInf) heap.emplace(dist[s], s);
  while (!heap.empty()) {
    const auto [d, s] = heap.top();
    heap.pop();
    if (d > dist[s]) continue;
    const RequestSet::Bits mask = state(s).bits();
    for (const auto& [pair, w] : edges_) {
      const RequestSet::Bits inter = mask & pair;
      if (inter != 0 && inter != pair) continue;
      const mts::StateIndex t = index_of(RequestSet(mask ^ pair));
      if (d + w < dist[t]) {
        dist[t] = d + w;
        heap.emplace(dist[t], t);
      }
    }
  }
  return dist;
}

std::vector<double> TransitionGraphSpace::distances_from(mts::StateIndex s) const {
  std::vector<double> init(size(), kInf);
  init[s] = 0.0;
  return dijkstra(std::move(init));
}

mts::Values TransitionGraphSpace::envelope(const mts::Values& v) const {
  std::vector<double> init(size());
  for (std::size_t s = 0; s < init.size(); ++s) init[s] = v[s].raw();
  const auto d = dijkstra(std::move(init));
  return mts::Values(d.begin(), d.end());
}

}  // namespace mpmd::reduction
