#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lawprice/functionals.hpp"

namespace lawprice {

/// Bid-ask spread pi(X) + pi(-X); +inf absorbs.
double spread(const PricingFunctional& f, const Payoff& x);

/// Zero spread (within tol) with both prices finite.
bool is_frictionless(const PricingFunctional& f, const Payoff& x, double tol);

/// {-4, -2, -1, -0.5, 0, 0.5, 1, 2, 4}
std::vector<double> default_m_grid();

/// pi(mX) = m pi(X) for every m on the grid, to tol * max(1, |m|). The grid
/// must contain +1, -1 and a value of magnitude >= 2 on each side of zero.
bool is_strongly_frictionless(const PricingFunctional& f, const Payoff& x,
                              const std::vector<double>& m_grid, double tol);

struct FrictionReport {
  std::string payoff_id;
  double spread = 0.0;
  bool frictionless = false;
  bool strongly_frictionless = false;
  std::vector<double> m_grid_used;
  double tolerance = 0.0;
};

FrictionReport friction_report(const PricingFunctional& f, const Payoff& x, std::string payoff_id,
                               double tol, const std::vector<double>& m_grid = default_m_grid());

struct AdditivityResult {
  bool falsified = false;
  int samples = 0;
  std::optional<Witness> witness;
};

/// Randomized search for a violation of pi(X + mZ) = pi(X) + m pi(Z).
AdditivityResult z_additivity_check(const PricingFunctional& f, const Payoff& z, int trials,
                                    double tol, std::uint64_t seed);
/// One-sided variant: pi(X + mZ) <= pi(X) + m pi(Z). Passing it for all X and
/// m already forces full Z-additivity.
AdditivityResult z_subadditivity_check(const PricingFunctional& f, const Payoff& z, int trials,
                                       double tol, std::uint64_t seed);

enum class CollapseVerdict { Collapse, NoFrictionlessRisky, Boundary, Inconclusive };

std::string to_string(CollapseVerdict v);

struct CollapseReport {
  CollapseVerdict verdict = CollapseVerdict::Inconclusive;
  /// Multiple of the expectation; meaningful for Collapse and Inconclusive.
  std::optional<double> c;
  /// "spread" for sublinear functionals, "strong" (sum over the m-grid of
  /// |pi(mZ) - m pi(Z)|) otherwise.
  std::string objective;
  /// "exhaustive" when every sorted shape was enumerated (n <= 3), else
  /// "heuristic": the minimum is only an upper bound on the true infimum.
  std::string certificate;
  std::optional<Payoff> best_witness;
  double best_objective = 0.0;
  double best_spread = 0.0;
  double best_mean = 0.0;
  /// Smallest objective seen among payoffs with nonzero mean.
  double min_objective_nonzero_mean = 0.0;
  /// Smallest objective seen among zero-mean payoffs.
  double min_objective_zero_mean = 0.0;
  double linearity_residual = 0.0;  // max |pi(X) - c E[X]| over a fresh batch
  double tolerance = 0.0;
  long evaluations = 0;
};

/// Searches normalized risky payoffs (range one, sorted) for frictionless
/// witnesses and classifies the functional by the collapse dichotomy.
///
/// Requires the law-invariant flag and pi(0) = 0. `budget` is the number of
/// random restarts per mean target.
CollapseReport collapse_scan(const PricingFunctional& f, AtomSpace space, double tol,
                             std::uint64_t seed, int budget);

struct LandscapeRow {
  double fraction_low = 0.0;  // share of atoms at the low value of a two-point payoff
  double mean = 0.0;
  double spread = 0.0;
};

/// Spread over the two-point family (low = value, high = value + 1) shifted
/// across a grid of means in [-1, 1].
std::vector<LandscapeRow> spread_landscape(const PricingFunctional& f, AtomSpace space,
                                           int mean_steps = 9);

}  // namespace lawprice
