#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lawprice/prob_core.hpp"

namespace lawprice {

/// Young function Phi: [0, inf) -> [0, inf], convex, nondecreasing,
/// Phi(0) = 0 and not identically zero. May take +inf (finite() == false).
class YoungFunction {
 public:
  /// Validates Phi on a sample grid; throws InvalidArgument.
  YoungFunction(std::string name, std::function<double(double)> phi, bool finite);

  double operator()(double t) const { return phi_(t); }
  const std::string& name() const noexcept { return name_; }
  bool finite() const noexcept { return finite_; }

 private:
  std::string name_;
  std::function<double(double)> phi_;
  bool finite_;
};

namespace young {

/// t^p, p >= 1.
YoungFunction power(double p);
/// e^t - 1.
YoungFunction exponential();
/// 0 on [0, 1], +inf beyond; its Luxemburg norm is the sup norm.
YoungFunction linf();

}  // namespace young

struct NormResult {
  double value = 0.0;
  int iterations = 0;
};

/// inf{k > 0 : E[Phi(|X|/k)] <= 1}, by bisection to tolerance tol.
/// Throws InvalidArgument for tol <= 0 and SolverError if the modular is
/// found to increase in k (bad Phi).
NormResult luxemburg_norm(const YoungFunction& phi, const Payoff& x, double tol = 1e-12);
inline double luxemburg(const YoungFunction& phi, const Payoff& x, double tol = 1e-12) {
  return luxemburg_norm(phi, x, tol).value;
}

struct NormCheck {
  std::string property;  // "homogeneity", "triangle", "monotonicity"
  int samples = 0;
  double max_violation = 0.0;
  bool passed = true;
};

/// Homogeneity, triangle inequality and lattice monotonicity on random payoffs.
std::vector<NormCheck> norm_order_check(const YoungFunction& phi, int trials, std::uint64_t seed,
                                        double tol = 1e-9);

struct Delta2Row {
  double t = 0.0;
  double ratio = 0.0;  // Phi(2t) / Phi(t)
};

struct Delta2Report {
  bool holds = false;
  double k = 0.0;  // sup of the ratio over the grid when it holds
  std::vector<Delta2Row> trace;
};

/// Phi(2t) <= k Phi(t) on a geometric grid of [t_min, t_max]. The condition
/// is declared to fail when the ratio keeps growing over the last quarter of
/// the grid. Throws InvalidArgument for nonfinite Phi.
Delta2Report delta2_check(const YoungFunction& phi, double t_min = 1.0, double t_max = 1e3,
                          int grid_size = 64);

/// E[Phi(c|X|)] < inf for every c > 0. On a finite space this holds for every
/// X when Phi is finite; for the indicator Young function only X = 0.
bool in_orlicz_heart(const YoungFunction& phi, const Payoff& x);

}  // namespace lawprice
