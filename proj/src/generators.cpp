#include "mpmd/generators.hpp"

#include <algorithm>
#include <cmath>

namespace mpmd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::vector<std::vector<double>> random_points(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::vector<std::vector<double>> pts(n);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  return pts;
}

std::vector<Request> random_requests(std::size_t m, std::size_t n, Timestep max_arrival, Rng& rng) {
  std::uniform_int_distribution<std::size_t> point(0, n - 1);
  std::uniform_int_distribution<Timestep> arrival(0, max_arrival);
  std::vector<Timestep> times(m);
  for (auto& t : times) t = arrival(rng);
  std::sort(times.begin(), times.end());
  std::vector<Request> reqs(m);
  for (std::size_t i = 0; i < m; ++i) reqs[i] = {i, point(rng), times[i]};
  return reqs;
}

SizePhase random_phase(Timestep from, Timestep to, std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> step(0.0, 3.0);
  std::bernoulli_distribution cap(0.2);
  SizePhase p{from, to, {Cost(0.0)}};
  double level = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    level += step(rng);
    p.costs.push_back(Cost(level));
  }
  if (m >= 3 && cap(rng)) {
    std::uniform_int_distribution<std::size_t> where(2, m);
    std::fill(p.costs.begin() + static_cast<std::ptrdiff_t>(where(rng)), p.costs.end(), Cost::infinite());
  }
  return p;
}

}  // namespace

MetricSpace random_euclidean_metric(std::size_t n, Rng& rng) {
  return MetricSpace::euclidean(default_labels(n), random_points(n, rng));
}

Instance random_size_based_instance(std::size_t m, std::size_t n, Timestep horizon, Rng& rng) {
  Instance inst;
  inst.metric = random_euclidean_metric(n, rng);
  inst.requests = random_requests(m, n, horizon - 1, rng);
  inst.horizon = horizon;
  std::vector<SizePhase> phases;
  std::bernoulli_distribution split(0.5);
  if (horizon >= 2 && split(rng)) {
    std::uniform_int_distribution<Timestep> mid(0, horizon - 2);
    const Timestep cut = mid(rng);
    phases.push_back(random_phase(0, cut, m, rng));
    phases.push_back(random_phase(cut + 1, horizon - 1, m, rng));
  } else {
    phases.push_back(random_phase(0, std::max<Timestep>(horizon - 1, 0), m, rng));
  }
  inst.delay = DelayModel::size_based(std::move(phases));
  validate(inst);
  return inst;
}

Instance random_concave_instance(std::size_t m, std::size_t n, Timestep max_arrival, const ConcaveFn& f, Rng& rng) {
  Instance inst;
  inst.metric = random_euclidean_metric(n, rng);
  inst.requests = random_requests(m, n, max_arrival, rng);
  inst.horizon = 1'000'000'000;
  inst.delay = DelayModel::uniform_concave(f);
  validate(inst);
  return inst;
}

mts::ExplicitSpace random_mts_space(std::size_t n, Rng& rng) {
  const auto pts = random_points(n, rng);
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
  return mts::ExplicitSpace(std::move(d));
}

std::vector<mts::Values> random_tasks(std::size_t n, std::size_t t, Rng& rng) {
  std::uniform_real_distribution<double> value(0.0, 4.0);
  std::bernoulli_distribution zero(0.25);
  std::vector<mts::Values> out(t, mts::Values(n));
  for (auto& task : out)
    for (auto& c : task) c = zero(rng) ? Cost(0.0) : Cost(value(rng));
  return out;
}

}  // namespace mpmd
