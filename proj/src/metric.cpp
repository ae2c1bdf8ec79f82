#include "mpmd/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "mpmd/cost.hpp"
#include "mpmd/errors.hpp"

namespace mpmd {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return labels;
}

MetricSpace::MetricSpace(std::vector<std::string> labels, const std::vector<std::vector<double>>& matrix,
                         bool allow_zero_distance)
    : labels_(std::move(labels)), allow_zero_(allow_zero_distance) {
  const std::size_t n = labels_.size();
  if (n == 0) throw ValidationError("metric space has no points");
  if (matrix.size() != n) throw ValidationError("distance matrix has " + std::to_string(matrix.size()) +
                                                " rows, expected " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j)
      if (labels_[i] == labels_[j]) throw ValidationError("duplicate point id '" + labels_[i] + "'");
  }
  dist_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw ValidationError("distance matrix row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v) || v < 0.0)
        throw ValidationError("distance (" + labels_[i] + "," + labels_[j] + ") must be finite and nonnegative");
      dist_[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_[i * n + i] != 0.0) throw ValidationError("nonzero diagonal at " + labels_[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(dist_[i * n + j] - dist_[j * n + i]) > kTolerance)
        throw ValidationError("asymmetric distance between " + labels_[i] + " and " + labels_[j]);
      dist_[j * n + i] = dist_[i * n + j];
      if (!allow_zero_ && dist_[i * n + j] <= 0.0)
        throw ValidationError("zero distance between distinct points " + labels_[i] + " and " + labels_[j] +
                              " (set allow_zero_distance to permit)");
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const double direct = dist_[a * n + c];
        const double via = dist_[a * n + b] + dist_[b * n + c];
        if (direct > via + kTolerance)
          throw ValidationError("triangle inequality violated on (" + labels_[a] + ", " + labels_[b] + ", " +
                                labels_[c] + "): d(" + labels_[a] + "," + labels_[c] + ")=" + format_number(direct) +
                                " > " + format_number(via));
      }
}

MetricSpace MetricSpace::uniform(std::size_t n, double d) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, d));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  return MetricSpace(default_labels(n), m);
}

MetricSpace MetricSpace::euclidean(std::vector<std::string> labels, const std::vector<std::vector<double>>& coords,
                                   bool allow_zero_distance) {
  const std::size_t n = coords.size();
  if (labels.size() != n) throw ValidationError("coords count does not match points count");
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (coords[i].size() != coords[0].size()) throw ValidationError("coords have inconsistent dimension");
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) s += (coords[i][k] - coords[j][k]) * (coords[i][k] - coords[j][k]);
      m[i][j] = std::sqrt(s);
    }
  }
  return MetricSpace(std::move(labels), m, allow_zero_distance);
}

MetricSpace MetricSpace::four_point(double eps, double D) {
  if (!(eps > 0.0) || !(D > eps)) throw ValidationError("four-point space needs D > eps > 0");
  return MetricSpace({"p1", "p2", "p3", "p4"},
                     {{0, eps, eps, D}, {eps, 0, eps, D}, {eps, eps, 0, D}, {D, D, D, 0}});
}

double MetricSpace::distance(PointId a, PointId b) const {
  const std::size_t n = size();
  if (a >= n || b >= n) throw std::out_of_range("MetricSpace: unknown point");
  return dist_[a * n + b];
}

std::optional<PointId> MetricSpace::find(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<PointId>(it - labels_.begin());
}

double aspect_ratio(const MetricSpace& space) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (PointId a = 0; a < space.size(); ++a)
    for (PointId b = a + 1; b < space.size(); ++b) {
      const double d = space.distance(a, b);
      hi = std::max(hi, d);
      if (d > 0.0) lo = std::min(lo, d);
    }
  if (!std::isfinite(lo)) throw ValidationError("aspect ratio undefined");
  return hi / lo;
}

double time_augmented_dist(const MetricSpace& space, const Request& u, const Request& v) {
  return space.distance(u.point, v.point) + static_cast<double>(std::llabs(u.arrival - v.arrival));
}

double concave_time_dist(const MetricSpace& space, const Request& u, const Request& v, const ConcaveFn& f) {
  return space.distance(u.point, v.point) + f(static_cast<double>(std::llabs(u.arrival - v.arrival)));
}

}  // namespace mpmd
