#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mpmd {

/// Nonnegative, nondecreasing concave delay function with f(0) = 0.
///
/// Three families are supported: c*x^p (0 < p <= 1), c*log(1+x), and a
/// piecewise-linear function given by breakpoints starting at (0, 0) whose
/// slopes are nonnegative and nonincreasing; past the last breakpoint the
/// last slope continues.
class ConcaveFn {
 public:
  enum class Family { power, log, piecewise_linear };

  static ConcaveFn power(double c, double p);
  static ConcaveFn sqrt() { return power(1.0, 0.5); }
  static ConcaveFn identity() { return power(1.0, 1.0); }
  static ConcaveFn log(double c = 1.0);
  static ConcaveFn piecewise_linear(std::vector<std::pair<double, double>> breakpoints);

  /// Evaluates f(x); x must be >= 0.
  double operator()(double x) const;

  Family family() const { return family_; }
  double c() const { return c_; }
  double p() const { return p_; }
  const std::vector<std::pair<double, double>>& breakpoints() const { return breakpoints_; }
  std::string name() const;

 private:
  ConcaveFn() = default;
  void check_on_grid() const;

  Family family_ = Family::power;
  double c_ = 1.0;
  double p_ = 1.0;
  std::vector<std::pair<double, double>> breakpoints_;
};

}  // namespace mpmd
