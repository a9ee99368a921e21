#include "lawprice/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "lawprice/error.hpp"

namespace lawprice {

namespace {

constexpr int kValidationGrid = 1000;
constexpr double kValidationTol = 1e-12;

std::string format_number(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

Distortion::Distortion(std::string name, std::function<double(double)> g, DistortionShape shape)
    : name_(std::move(name)), g_(std::move(g)), shape_(shape) {
  if (std::abs(g_(0.0)) > kValidationTol || std::abs(g_(1.0) - 1.0) > kValidationTol) {
    throw InvalidArgument("distortion " + name_ + " must satisfy g(0)=0 and g(1)=1");
  }
  double prev = g_(0.0);
  for (int i = 1; i <= kValidationGrid; ++i) {
    const double u = static_cast<double>(i) / kValidationGrid;
    const double cur = g_(u);
    if (!std::isfinite(cur) || cur < prev - kValidationTol || cur < -kValidationTol ||
        cur > 1.0 + kValidationTol) {
      throw InvalidArgument("distortion " + name_ + " is not a nondecreasing map into [0,1]");
    }
    prev = cur;
  }
}

Distortion Distortion::identity() {
  return Distortion("identity", [](double u) { return u; }, DistortionShape::Linear);
}

Distortion Distortion::power(double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("power distortion needs gamma > 0");
  DistortionShape shape = DistortionShape::Linear;
  if (gamma < 1.0) shape = DistortionShape::Concave;
  if (gamma > 1.0) shape = DistortionShape::Convex;
  return Distortion(
      "power(" + format_number(gamma) + ")", [gamma](double u) { return std::pow(u, gamma); },
      shape);
}

Distortion Distortion::expected_shortfall(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("expected shortfall needs beta in [0,1)");
  const double tail = 1.0 - beta;
  // Levels within 1e-12 of the tail mass saturate so that atom boundaries
  // coinciding with beta give exact weights.
  return Distortion(
      "es(" + format_number(beta) + ")",
      [tail](double u) {
        if (u >= tail - 1e-12) return 1.0;
        return u / tail;
      },
      beta == 0.0 ? DistortionShape::Linear : DistortionShape::Concave);
}

Distortion Distortion::worst_case() {
  return Distortion("worst_case", [](double u) { return u > 0.0 ? 1.0 : 0.0; },
                    DistortionShape::Concave);
}

Distortion Distortion::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw InvalidArgument("tabulated distortion needs at least two points");
  std::sort(points.begin(), points.end());
  if (points.front().first != 0.0 || points.back().first != 1.0) {
    throw InvalidArgument("tabulated distortion must span u = 0 to u = 1");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].first == points[i - 1].first) {
      throw InvalidArgument("tabulated distortion has duplicate abscissae");
    }
  }
  bool concave = true;
  bool convex = true;
  double prev_slope = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double slope =
        (points[i].second - points[i - 1].second) / (points[i].first - points[i - 1].first);
    if (i > 1) {
      if (slope > prev_slope + 1e-12) concave = false;
      if (slope < prev_slope - 1e-12) convex = false;
    }
    prev_slope = slope;
  }
  DistortionShape shape = DistortionShape::General;
  if (concave && convex) shape = DistortionShape::Linear;
  else if (concave) shape = DistortionShape::Concave;
  else if (convex) shape = DistortionShape::Convex;
  auto g = [pts = std::move(points)](double u) {
    if (u <= 0.0) return pts.front().second;
    if (u >= 1.0) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), u,
                               [](double v, const auto& p) { return v < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (u - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
  };
  return Distortion("tabulated", std::move(g), shape);
}

double choquet_eval(const Distortion& g, const Payoff& x) {
  // A linear distortion with g(0)=0, g(1)=1 is the identity; P itself.
  if (g.shape() == DistortionShape::Linear) return expectation(x);
  std::vector<double> v(x.values().begin(), x.values().end());
  std::sort(v.begin(), v.end(), std::greater<>());
  const double n = static_cast<double>(v.size());
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double cur = g(static_cast<double>(i + 1) / n);
    total += v[i] * (cur - prev);
    prev = cur;
  }
  return total;
}

}  // namespace lawprice
