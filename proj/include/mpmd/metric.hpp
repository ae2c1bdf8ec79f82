#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpmd/concave_fn.hpp"
#include "mpmd/request_set.hpp"

namespace mpmd {

using PointId = std::size_t;
using Timestep = std::int64_t;

/// Finite metric space over labelled points, stored as a dense matrix.
class MetricSpace {
 public:
  MetricSpace() = default;

  /// Validates symmetry, zero diagonal, positivity (unless `allow_zero_distance`)
  /// and the triangle inequality; throws ValidationError naming the offending entry.
  MetricSpace(std::vector<std::string> labels, const std::vector<std::vector<double>>& matrix,
              bool allow_zero_distance = false);

  /// n points, all pairwise distances equal to `d`. Labels p0..p{n-1}.
  static MetricSpace uniform(std::size_t n, double d = 1.0);
  static MetricSpace euclidean(std::vector<std::string> labels, const std::vector<std::vector<double>>& coords,
                               bool allow_zero_distance = false);
  /// Three points pairwise `eps` apart plus a fourth at distance `D` from each.
  static MetricSpace four_point(double eps, double D);

  std::size_t size() const { return labels_.size(); }
  double distance(PointId a, PointId b) const;
  const std::string& label(PointId p) const { return labels_.at(p); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<PointId> find(std::string_view label) const;
  bool allows_zero_distance() const { return allow_zero_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  bool allow_zero_ = false;
};

/// Largest pairwise distance over the smallest positive one.
double aspect_ratio(const MetricSpace& space);

std::vector<std::string> default_labels(std::size_t n);

struct Request {
  RequestId id = 0;
  PointId point = 0;
  Timestep arrival = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

/// d(pos(u), pos(v)) + |atime(u) - atime(v)|.
double time_augmented_dist(const MetricSpace& space, const Request& u, const Request& v);

/// d(pos(u), pos(v)) + f(|atime(u) - atime(v)|).
double concave_time_dist(const MetricSpace& space, const Request& u, const Request& v, const ConcaveFn& f);

}  // namespace mpmd
