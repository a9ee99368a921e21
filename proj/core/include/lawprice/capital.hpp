#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lawprice/functionals.hpp"

namespace lawprice {

struct AcceptanceFlags {
  bool convex = false;
  bool conic = false;
  bool monotone = false;
  bool law_invariant = false;
  bool closed = false;
};

/// A set of acceptable positions given by a membership oracle, optionally
/// backed by a gauge R with X acceptable iff R(X) <= 0.
///
/// Carries generators for one accepted and one rejected payoff on any space,
/// witnessing that the set is neither empty nor everything.
class AcceptanceSet {
 public:
  using Membership = std::function<bool(const Payoff&)>;
  using WitnessFn = std::function<Payoff(AtomSpace)>;

  AcceptanceSet(std::string name, AcceptanceFlags flags, Membership membership,
                std::optional<PricingFunctional> gauge, WitnessFn accepted, WitnessFn rejected);
  /// Membership is R(X) <= 0.
  static AcceptanceSet from_gauge(std::string name, AcceptanceFlags flags, PricingFunctional gauge,
                                  WitnessFn accepted, WitnessFn rejected);

  bool contains(const Payoff& x) const { return membership_(x); }
  const std::string& name() const noexcept { return name_; }
  const AcceptanceFlags& flags() const noexcept { return flags_; }
  const std::optional<PricingFunctional>& gauge() const noexcept { return gauge_; }
  Payoff accepted_witness(AtomSpace space) const { return accepted_(space); }
  Payoff rejected_witness(AtomSpace space) const { return rejected_(space); }

  /// Checks the stored witnesses on `space` and, with a gauge, that membership
  /// agrees with the gauge sign on them. Throws InvalidArgument on failure.
  void validate(AtomSpace space) const;

 private:
  std::string name_;
  AcceptanceFlags flags_;
  Membership membership_;
  std::optional<PricingFunctional> gauge_;
  WitnessFn accepted_;
  WitnessFn rejected_;
};

namespace acceptance {

/// {X : E[X] >= 0}
AcceptanceSet expectation();
/// {X : ES_beta(-X) <= 0}, the expected shortfall of the loss.
AcceptanceSet expected_shortfall(double beta);
/// {X : X constant}; not monotone.
AcceptanceSet risk_free();
/// {X : E[min(X, 0)] >= -1}; not conic.
AcceptanceSet bounded_shortfall();
/// {X : X[atom] >= 0}; depends on the atom index, so not law invariant.
AcceptanceSet atom_indexed(std::size_t atom = 0);
/// {X : R(X) <= 0} for a user-supplied gauge.
AcceptanceSet from_functional(const PricingFunctional& gauge, AcceptanceFlags flags);

}  // namespace acceptance

/// Eligible payoffs spanning the marketed space, with a linear price on the basis.
class Market {
 public:
  static constexpr std::size_t kMaxBasis = 3;

  /// Throws SolverError for k = 0 or k > 3, dependent basis, or an invalid
  /// numeraire (must be >= 0, nonzero, positively priced).
  Market(std::vector<Payoff> basis, std::vector<double> prices, std::size_t numeraire_index = 0);

  std::size_t dimension() const noexcept { return basis_.size(); }
  AtomSpace space() const { return basis_.front().space(); }
  const std::vector<Payoff>& basis() const noexcept { return basis_; }
  const std::vector<double>& prices() const noexcept { return prices_; }
  std::size_t numeraire_index() const noexcept { return numeraire_; }
  const Payoff& numeraire() const { return basis_[numeraire_]; }

  double price(std::span<const double> coefficients) const;
  Payoff payoff(std::span<const double> coefficients) const;
  /// Some basis element is not constant.
  bool has_risky_payoff() const;

 private:
  std::vector<Payoff> basis_;
  std::vector<double> prices_;
  std::size_t numeraire_;
};

enum class RiskStatus { Finite, PlusInfinity, MinusInfinity };

struct RiskResult {
  double value = 0.0;
  RiskStatus status = RiskStatus::Finite;
  /// Coefficients on the market basis of the optimal hedge (finite case).
  std::vector<double> coefficients;
  long membership_calls = 0;
  int expansions = 0;  // box doublings used
  int expansion_budget = 0;
};

std::string to_string(RiskStatus s);

/// rho(X) = inf{psi(Z) : Z marketed, X + Z acceptable}.
///
/// The price-one direction U/psi(U) is handled by bisection (monotone sets) or
/// a gauge-guided boundary search; the k-1 price-zero directions by nested
/// golden-section search inside a box grown by doubling. Returns -inf when
/// the cost keeps decreasing through the whole expansion budget and +inf when
/// no acceptable position is reached.
RiskResult risk_measure(const AcceptanceSet& a, const Market& m, const Payoff& x,
                        double tol = 1e-10);

struct LawInvarianceWitness {
  Payoff x;
  Payoff x_permuted;
  double rho_x = 0.0;
  double rho_permuted = 0.0;
};

/// Searches random X and permutations X' with |rho(X) - rho(X')| > tol.
std::optional<LawInvarianceWitness> law_invariance_witness(const AcceptanceSet& a, const Market& m,
                                                           int trials, std::uint64_t seed,
                                                           double tol);

enum class Pointedness { Pointed, NotPointed };

struct PointednessReport {
  Pointedness verdict = Pointedness::Pointed;
  std::optional<Payoff> witness;  // nonzero Z with Z and -Z acceptable
  /// min over sup-normalized samples of max(R(Z), R(-Z)); gauge-backed sets only.
  std::optional<double> min_two_sided_depth;
  bool exhaustive = false;
  int samples = 0;
  /// For NOT_POINTED: membership agreed with {E[X] >= 0} on a test batch.
  std::optional<bool> matches_expectation_set;
};

/// Requires convex, conic, monotone and law-invariant flags. `grid` is the
/// number of levels per unit for the exhaustive sorted-vector search (n <= 3).
PointednessReport pointedness_check(const AcceptanceSet& a, AtomSpace space, int trials,
                                    std::uint64_t seed, int grid = 8);

struct ClosureReport {
  int trials = 0;
  int tested = 0;  // accepted samples actually conditioned
  int violations = 0;
  std::optional<Witness> witness;
};

/// E[X|G] stays acceptable for accepted X and random partitions G. Requires
/// convex, closed and law-invariant flags.
ClosureReport conditioning_closure_check(const AcceptanceSet& a, AtomSpace space, int trials,
                                         std::uint64_t seed, double tol = 1e-9);

struct MeanCollapseReport {
  bool skipped = false;
  std::string reason;
  double rho_zero = 0.0;
  double c = 0.0;  // -rho(1)
  double max_residual = 0.0;  // max |rho(X) + c E[X]|
  bool witness_found = false;
};

/// When no law-invariance witness exists, the market holds a risky payoff and
/// rho(0) = 0, rho must equal -c E on the batch. Skipped if |rho(0)| > tol.
MeanCollapseReport expectation_collapse_check(const AcceptanceSet& a, const Market& m, int trials,
                                              std::uint64_t seed, double tol);

}  // namespace lawprice
