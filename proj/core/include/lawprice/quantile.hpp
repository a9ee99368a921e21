#pragma once

#include <utility>
#include <vector>

#include "lawprice/prob_core.hpp"

namespace lawprice {

/// Left-continuous quantile function of an equal-atom payoff: a step function
/// on (0,1) equal to sorted_values[i] on ((i)/n, (i+1)/n].
class QuantileFn {
 public:
  explicit QuantileFn(std::vector<double> sorted_values);

  const std::vector<double>& sorted_values() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }
  /// Value at level alpha in (0,1): the ceil(alpha*n)-th smallest atom value.
  double at(double alpha) const;

 private:
  std::vector<double> sorted_;
};

QuantileFn quantile(const Payoff& x);

/// Hardy-Littlewood product: integral of q_X * q_Y over (0,1).
double hl_product(const Payoff& x, const Payoff& y);

/// Brute-force maximum of E[X * Y o sigma] over all atom permutations sigma.
/// Refuses n > 8.
double max_correlation_oracle(const Payoff& x, const Payoff& y);
inline constexpr std::size_t kMaxOracleAtoms = 8;

/// Jointly sorted copies of X and Y: the maximizing coupling.
std::pair<Payoff, Payoff> comonotone_rearrangement(const Payoff& x, const Payoff& y);

/// X dominates Y in convex order: equal means and upper-tail sum dominance,
/// both up to `tol`.
bool convex_order_geq(const Payoff& x, const Payoff& y, double tol);

/// Independent check through the call family E[(X-t)+] >= E[(Y-t)+] at every
/// support point t, plus exact mean equality.
bool convex_order_oracle(const Payoff& x, const Payoff& y);

}  // namespace lawprice
