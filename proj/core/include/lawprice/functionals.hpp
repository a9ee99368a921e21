#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "lawprice/distortion.hpp"
#include "lawprice/prob_core.hpp"

namespace lawprice {

inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();

/// m * v on the extended reals with the convention 0 * inf = 0.
inline double ext_mul(double m, double v) { return m == 0.0 ? 0.0 : m * v; }

struct FunctionalFlags {
  bool convex = false;
  bool sublinear = false;
  bool monotone = false;  // nondecreasing
  bool law_invariant = false;
  bool cash_additive = false;
  bool comonotonic = false;
};

/// A pricing functional X -> R u {+inf} with declared structural flags.
///
/// Immutable; evaluation is pure and safe to call from several threads. When a
/// space is attached, payoffs on any other space are rejected.
class PricingFunctional {
 public:
  using Evaluator = std::function<double(const Payoff&)>;
  /// Closed-form conjugate for catalog members that have one.
  using Conjugate = std::function<double(const Payoff&)>;

  PricingFunctional(std::string name, FunctionalFlags flags, Evaluator evaluator,
                    std::optional<AtomSpace> space = std::nullopt, Conjugate conjugate = {});

  /// Throws SpaceMismatch for a foreign payoff and std::logic_error if the
  /// evaluator produces -inf or NaN.
  double operator()(const Payoff& x) const;

  const std::string& name() const noexcept { return name_; }
  const FunctionalFlags& flags() const noexcept { return flags_; }
  const std::optional<AtomSpace>& space() const noexcept { return space_; }
  const Conjugate& closed_form_conjugate() const noexcept { return conjugate_; }

  /// Same evaluator, different declared flags. Used to audit mislabeled inputs.
  PricingFunctional with_flags(FunctionalFlags flags) const;
  PricingFunctional with_name(std::string name) const;

 private:
  std::string name_;
  FunctionalFlags flags_;
  Evaluator evaluator_;
  std::optional<AtomSpace> space_;
  Conjugate conjugate_;
};

inline double eval(const PricingFunctional& f, const Payoff& x) { return f(x); }

/// The set D of a quantile representation sup_{Y in D} int q_X q_Y.
struct BoundedDensities {
  double bound = 1.0;  // every density satisfies 0 <= Y <= bound, E[Y] = 1
};
using RepresentationSet = std::variant<std::vector<Payoff>, BoundedDensities>;

double representation_eval(const RepresentationSet& d, const Payoff& x);

namespace catalog {

PricingFunctional expectation(double c = 1.0);
PricingFunctional choquet(const Distortion& g);
PricingFunctional expected_shortfall(double beta);
PricingFunctional worst_case();
PricingFunctional entropic(double theta);
/// E[X] when E[X] >= 0, else 0.
PricingFunctional gate();
/// inf{m : X + m >= -1} = -1 - min X.
PricingFunctional floor_gauge();
PricingFunctional mean_abs_dev(double lambda);
PricingFunctional representation(RepresentationSet d);

}  // namespace catalog

struct RecessionResult {
  double value = 0.0;  // max of the difference quotients over the grid
  bool stale = false;  // last two quotients still differ by more than tol
  double at_zero = 0.0;  // pi(0)
  std::vector<double> lambdas;
  std::vector<double> ratios;
};

/// Recession functional sup_{lambda>0} pi(lambda X)/lambda, approximated on the
/// geometric grid 1 = lambda_0 < ... < lambda_{grid_size-1} = lambda_max by the
/// difference quotients (pi(lambda X) - pi(0))/lambda.
///
/// For convex pi the quotient is nondecreasing in lambda and has the same
/// limit as pi(lambda X)/lambda; with pi(0) = 0 the two coincide. Needs pi(0)
/// finite.
RecessionResult recession(const PricingFunctional& f, const Payoff& x, double lambda_max,
                          int grid_size, double tol = 1e-9);

using PayoffSampler = std::function<Payoff(std::mt19937_64&)>;

/// Lower bound on pi*(Y) = sup_X int q_X q_Y - pi(X) from `budget` samples.
/// Never claimed tight.
double conjugate_lower_bound(const PricingFunctional& f, const Payoff& y,
                             const PayoffSampler& sampler, int budget, std::uint64_t seed);

/// A failed property instance, kept for reports.
struct Witness {
  std::string description;
  std::vector<Payoff> payoffs;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct SchurReport {
  int trials = 0;
  int conditioning_violations = 0;
  int order_violations = 0;
  double max_excess = 0.0;  // largest pi(smaller) - pi(larger) observed
  std::optional<Witness> witness;
  bool passed() const { return conditioning_violations == 0 && order_violations == 0; }
};

/// Schur-convexity checks: pi(E[X|G]) <= pi(X) + tol over random partitions,
/// and pi(X) >= pi(Y) - tol over pairs with X >=_cx Y. Requires the convex and
/// law-invariant flags.
SchurReport schur_convexity_report(const PricingFunctional& f, int trials, std::uint64_t seed,
                                   double tol = 1e-9);

struct FlagCheck {
  std::string flag;
  bool declared = false;
  bool falsified = false;
  std::optional<Witness> witness;
};

struct AuditReport {
  std::string functional;
  std::vector<FlagCheck> checks;
  /// No declared flag was falsified.
  bool consistent() const;
};

/// Randomized test of every structural flag; undeclared flags are tested too
/// so that their failures can be reported.
AuditReport flag_audit(const PricingFunctional& f, int trials, std::uint64_t seed,
                       double tol = 1e-9);

}  // namespace lawprice
