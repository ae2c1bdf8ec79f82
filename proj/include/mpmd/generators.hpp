#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mpmd/concave_fn.hpp"
#include "mpmd/instance.hpp"
#include "mpmd/mts.hpp"

namespace mpmd {

using Rng = std::mt19937_64;

/// Counter-based seed expansion: trial i of a run with global seed g uses
/// splitmix64(g + i).
std::uint64_t splitmix64(std::uint64_t x);

/// n points with uniform coordinates in [0, 10)^2 under the Euclidean metric.
MetricSpace random_euclidean_metric(std::size_t n, Rng& rng);

/// m requests on a random n-point metric with arrivals in [0, horizon - 1] and
/// one or two random size-based phases (finite costs, occasionally an
/// infinite cap on the unmatched count). The horizon forces everything.
Instance random_size_based_instance(std::size_t m, std::size_t n, Timestep horizon, Rng& rng);

/// m requests on a random n-point metric with arrivals in [0, max_arrival]
/// and uniform concave delay f. The horizon is far enough out never to bind.
Instance random_concave_instance(std::size_t m, std::size_t n, Timestep max_arrival, const ConcaveFn& f, Rng& rng);

/// N random planar points as an explicit MTS space.
mts::ExplicitSpace random_mts_space(std::size_t n, Rng& rng);

/// T task vectors over N states with entries in [0, 4), a quarter of them zero.
std::vector<mts::Values> random_tasks(std::size_t n, std::size_t t, Rng& rng);

}  // namespace mpmd
