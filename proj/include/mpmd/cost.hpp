#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace mpmd {

/// Absolute tolerance used for every cost comparison in the library.
inline constexpr double kTolerance = 1e-9;

/// Nonnegative extended real: a finite double or a symbolic infinity.
///
/// Infinity is absorbing under addition and compares strictly greater than
/// every finite value. Subtraction is deliberately not provided.
class Cost {
 public:
  constexpr Cost() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  Cost(double value) : value_(value) {
    if (std::isnan(value)) throw std::invalid_argument("Cost: NaN");
  }

  static Cost infinite() { return Cost(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(value_); }
  bool is_finite() const { return !is_infinite(); }

  /// The finite value; throws for infinity so callers never do float math on it.
  double finite() const {
    if (is_infinite()) throw std::logic_error("Cost: finite() on infinite cost");
    return value_;
  }
  /// Raw double (+inf for infinity), for ordering and serialization.
  double raw() const { return value_; }

  Cost& operator+=(Cost other) {
    value_ += other.value_;
    return *this;
  }
  friend Cost operator+(Cost a, Cost b) { return a += b; }

  friend bool operator==(Cost a, Cost b) { return a.value_ == b.value_; }
  friend std::partial_ordering operator<=>(Cost a, Cost b) { return a.value_ <=> b.value_; }

  std::string to_string() const;

 private:
  double value_ = 0.0;
};

/// Equal within `tol`; two infinities are equal, infinity never equals a finite value.
inline bool approx_equal(Cost a, Cost b, double tol = kTolerance) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return std::abs(a.raw() - b.raw()) <= tol;
}

/// a <= b + tol, with infinity handled exactly.
inline bool approx_le(Cost a, Cost b, double tol = kTolerance) {
  if (b.is_infinite()) return true;
  if (a.is_infinite()) return false;
  return a.raw() <= b.raw() + tol;
}

/// Shortest round-trippable-enough decimal form used in CSV and JSON output.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string Cost::to_string() const {
  return is_infinite() ? std::string("inf") : format_number(value_);
}

}  // namespace mpmd
