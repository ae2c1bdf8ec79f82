#include "mpmd/concave_fn.hpp"

#include <cmath>

#include "mpmd/cost.hpp"
#include "mpmd/errors.hpp"

namespace mpmd {

ConcaveFn ConcaveFn::power(double c, double p) {
  if (!(c > 0.0) || !(p > 0.0) || p > 1.0)
    throw ValidationError("power delay needs c > 0 and 0 < p <= 1");
  ConcaveFn f;
  f.family_ = Family::power;
  f.c_ = c;
  f.p_ = p;
  f.check_on_grid();
  return f;
}

ConcaveFn ConcaveFn::log(double c) {
  if (!(c > 0.0)) throw ValidationError("log delay needs c > 0");
  ConcaveFn f;
  f.family_ = Family::log;
  f.c_ = c;
  f.check_on_grid();
  return f;
}

ConcaveFn ConcaveFn::piecewise_linear(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.size() < 2) throw ValidationError("piecewise-linear delay needs at least two breakpoints");
  if (breakpoints.front() != std::pair<double, double>{0.0, 0.0})
    throw ValidationError("piecewise-linear delay must start at (0, 0)");
  double last_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const auto [x0, y0] = breakpoints[i - 1];
    const auto [x1, y1] = breakpoints[i];
    if (!(x1 > x0)) throw ValidationError("piecewise-linear breakpoints must have increasing x");
    const double slope = (y1 - y0) / (x1 - x0);
    if (slope < 0.0) throw ValidationError("piecewise-linear delay must be nondecreasing");
    if (slope > last_slope + kTolerance) throw ValidationError("piecewise-linear delay must be concave");
    last_slope = slope;
  }
  ConcaveFn f;
  f.family_ = Family::piecewise_linear;
  f.breakpoints_ = std::move(breakpoints);
  f.check_on_grid();
  return f;
}

double ConcaveFn::operator()(double x) const {
  if (x < 0.0) throw std::invalid_argument("ConcaveFn: negative argument");
  switch (family_) {
    case Family::power:
      return c_ * std::pow(x, p_);
    case Family::log:
      return c_ * std::log1p(x);
    case Family::piecewise_linear: {
      std::size_t i = 1;
      while (i + 1 < breakpoints_.size() && x > breakpoints_[i].first) ++i;
      const auto [x0, y0] = breakpoints_[i - 1];
      const auto [x1, y1] = breakpoints_[i];
      return y0 + (y1 - y0) / (x1 - x0) * (x - x0);
    }
  }
  return 0.0;
}

std::string ConcaveFn::name() const {
  switch (family_) {
    case Family::power:
      if (c_ == 1.0 && p_ == 0.5) return "sqrt";
      if (c_ == 1.0 && p_ == 1.0) return "identity";
      return format_number(c_) + "*x^" + format_number(p_);
    case Family::log:
      return c_ == 1.0 ? "log1p" : format_number(c_) + "*log1p";
    case Family::piecewise_linear:
      return "piecewise_linear";
  }
  return "?";
}

// f(0) = 0, monotone, concave (second differences <= 0) and subadditive on a
// half-integer grid. The families above satisfy this analytically; the grid
// guards the piecewise-linear constructor against rounding surprises.
void ConcaveFn::check_on_grid() const {
  constexpr int kGrid = 64;
  const auto at = [this](int i) { return (*this)(0.5 * i); };
  if (std::abs(at(0)) > kTolerance) throw ValidationError("delay function must satisfy f(0) = 0");
  for (int i = 1; i <= kGrid; ++i) {
    if (at(i) < at(i - 1) - kTolerance) throw ValidationError("delay function must be nondecreasing");
    if (i >= 2 && at(i) - 2 * at(i - 1) + at(i - 2) > kTolerance)
      throw ValidationError("delay function must be concave");
  }
  for (int a = 0; a <= kGrid / 2; ++a)
    for (int b = 0; b <= kGrid / 2; ++b)
      if (at(a + b) > at(a) + at(b) + kTolerance) throw ValidationError("delay function must be subadditive");
}

}  // namespace mpmd
