#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lawprice/prob_core.hpp"

namespace lawprice {

/// Declared shape of a distortion. A concave distortion yields a sublinear
/// Choquet functional.
enum class DistortionShape { Linear, Concave, Convex, General };

/// Nondecreasing g: [0,1] -> [0,1] with g(0) = 0 and g(1) = 1. The capacity on
/// the equal-atom space is g o P.
class Distortion {
 public:
  /// Validates endpoints and monotonicity on a grid of 1001 points.
  Distortion(std::string name, std::function<double(double)> g, DistortionShape shape);

  static Distortion identity();
  /// g(u) = u^gamma; concave for gamma <= 1, convex for gamma >= 1.
  static Distortion power(double gamma);
  /// g(u) = min(u / (1 - beta), 1), beta in [0, 1).
  static Distortion expected_shortfall(double beta);
  /// g(u) = 1 for u > 0: the Choquet integral is the maximum.
  static Distortion worst_case();
  /// Piecewise-linear interpolation through (u, g) points spanning [0, 1].
  static Distortion tabulated(std::vector<std::pair<double, double>> points);

  double operator()(double u) const { return g_(u); }
  const std::string& name() const noexcept { return name_; }
  DistortionShape shape() const noexcept { return shape_; }
  bool is_concave() const noexcept {
    return shape_ == DistortionShape::Concave || shape_ == DistortionShape::Linear;
  }

 private:
  std::string name_;
  std::function<double(double)> g_;
  DistortionShape shape_;
};

/// Discrete Choquet integral against g o P: with values sorted descending,
/// sum of x_(i) * (g(i/n) - g((i-1)/n)).
double choquet_eval(const Distortion& g, const Payoff& x);

}  // namespace lawprice
