#include "lawprice/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lawprice/error.hpp"

namespace lawprice {

QuantileFn::QuantileFn(std::vector<double> sorted_values) : sorted_(std::move(sorted_values)) {
  if (sorted_.empty()) throw InvalidArgument("quantile function needs at least one value");
  if (!std::is_sorted(sorted_.begin(), sorted_.end())) {
    throw InvalidArgument("quantile values must be nondecreasing");
  }
}

double QuantileFn::at(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("quantile level must lie in (0,1)");
  const double n = static_cast<double>(sorted_.size());
  auto k = static_cast<std::size_t>(std::ceil(alpha * n));
  k = std::clamp<std::size_t>(k, 1, sorted_.size());
  return sorted_[k - 1];
}

namespace {

std::vector<double> sorted_copy(const Payoff& x) {
  std::vector<double> v(x.values().begin(), x.values().end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

QuantileFn quantile(const Payoff& x) { return QuantileFn(sorted_copy(x)); }

double hl_product(const Payoff& x, const Payoff& y) {
  require_same_space(x, y);
  const auto a = sorted_copy(x);
  const auto b = sorted_copy(y);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum / static_cast<double>(a.size());
}

double max_correlation_oracle(const Payoff& x, const Payoff& y) {
  require_same_space(x, y);
  const std::size_t n = x.size();
  if (n > kMaxOracleAtoms) {
    throw InvalidArgument("max_correlation_oracle enumerates n! couplings; refusing n > 8");
  }
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[sigma[i]];
    best = std::max(best, sum);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best / static_cast<double>(n);
}

std::pair<Payoff, Payoff> comonotone_rearrangement(const Payoff& x, const Payoff& y) {
  require_same_space(x, y);
  return {Payoff(x.space(), sorted_copy(x)), Payoff(y.space(), sorted_copy(y))};
}

bool convex_order_geq(const Payoff& x, const Payoff& y, double tol) {
  require_same_space(x, y);
  if (std::abs(expectation(x) - expectation(y)) > tol) return false;
  const auto a = sorted_copy(x);
  const auto b = sorted_copy(y);
  double tail_x = 0.0;
  double tail_y = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) {
    tail_x += a[k];
    tail_y += b[k];
    if (tail_x < tail_y - tol) return false;
  }
  return true;
}

bool convex_order_oracle(const Payoff& x, const Payoff& y) {
  require_same_space(x, y);
  const auto& xs = x.values();
  const auto& ys = y.values();
  // Compare sums rather than means so integer-valued inputs stay exact.
  if (std::accumulate(xs.begin(), xs.end(), 0.0) != std::accumulate(ys.begin(), ys.end(), 0.0)) {
    return false;
  }
  std::vector<double> support(xs.begin(), xs.end());
  support.insert(support.end(), ys.begin(), ys.end());
  auto call_sum = [](std::span<const double> v, double t) {
    double s = 0.0;
    for (double e : v) s += std::max(e - t, 0.0);
    return s;
  };
  for (double t : support) {
    if (call_sum(xs, t) < call_sum(ys, t)) return false;
  }
  return true;
}

}  // namespace lawprice
