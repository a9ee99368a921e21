#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lawprice/error.hpp"
#include "lawprice/functionals.hpp"
#include "lawprice/quantile.hpp"
#include "support/oracles.hpp"

using namespace lawprice;

namespace {

std::vector<PricingFunctional> convex_law_invariant_catalog() {
  return {catalog::expectation(1.0),
          catalog::expectation(2.0),
          catalog::expected_shortfall(0.0),
          catalog::expected_shortfall(0.5),
          catalog::expected_shortfall(0.9),
          catalog::worst_case(),
          catalog::entropic(1.0),
          catalog::gate(),
          catalog::floor_gauge(),
          catalog::mean_abs_dev(0.3),
          catalog::mean_abs_dev(1.0),
          catalog::choquet(Distortion::power(0.5)),
          catalog::representation(BoundedDensities{3.0})};
}

}  // namespace

TEST(Eval, Examples) {
  EXPECT_EQ(eval(catalog::expectation(1.0), Payoff{1.0, 3.0}), 2.0);
  EXPECT_EQ(eval(catalog::worst_case(), Payoff{-1.0, 4.0}), 4.0);
  EXPECT_EQ(eval(catalog::gate(), Payoff{-2.0, 0.0}), 0.0);
  EXPECT_EQ(eval(catalog::gate(), Payoff{-3.0, 5.0}), 1.0);
  EXPECT_EQ(eval(catalog::floor_gauge(), Payoff{-1.0, 1.0}), 0.0);
  EXPECT_EQ(eval(catalog::floor_gauge(), Payoff{-2.0, 2.0}), 1.0);
}

TEST(Eval, GuardsAgainstForeignSpaceAndBadValues) {
  const auto f = catalog::representation(std::vector<Payoff>{Payoff{1.0, 1.0}});
  EXPECT_THROW(f(Payoff{1.0, 2.0, 3.0}), SpaceMismatch);
  const PricingFunctional broken("broken", {}, [](const Payoff&) { return -kPlusInf; });
  EXPECT_THROW(broken(Payoff{1.0}), std::logic_error);
}

TEST(ExtendedReals, ZeroTimesInfinityIsZero) {
  EXPECT_EQ(ext_mul(0.0, kPlusInf), 0.0);
  EXPECT_EQ(ext_mul(2.0, kPlusInf), kPlusInf);
  EXPECT_EQ(ext_mul(-1.0, 3.0), -3.0);
}

TEST(Catalog, EntropicMatchesNaiveFormula) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto v = oracle::random_vec(rng, 5, 1.0);
    double s = 0.0;
    for (double e : v) s += std::exp(2.0 * e);
    EXPECT_NEAR(catalog::entropic(2.0)(Payoff(v)), std::log(s / 5.0) / 2.0, 1e-12);
  }
  // No overflow for large values.
  EXPECT_NEAR(catalog::entropic(1.0)(Payoff{1000.0, 1000.0}), 1000.0, 1e-9);
}

TEST(Catalog, FloorGaugeMatchesScanForm) {
  // inf{m : X + m >= -1} by scanning m on a fine grid.
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Payoff x = random_payoff(AtomSpace(4), rng, dist::Uniform{-3.0, 3.0});
    double m = -10.0;
    while ((x + m).min() < -1.0) m += 1e-4;
    EXPECT_NEAR(catalog::floor_gauge()(x), m, 1e-4);
    EXPECT_NEAR(catalog::floor_gauge()(x + 0.7), catalog::floor_gauge()(x) - 0.7, 1e-12);
  }
}

TEST(Catalog, ExpectedShortfallLimits) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Payoff x = random_payoff(AtomSpace(8), rng, dist::Normal{});
    EXPECT_NEAR(catalog::expected_shortfall(0.0)(x), expectation(x), 1e-12);
    EXPECT_EQ(catalog::expected_shortfall(1.0 - 1.0 / 8.0)(x), x.max());
  }
}

TEST(Representation, Examples) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Payoff x = random_payoff(AtomSpace(5), rng, dist::Normal{});
    EXPECT_NEAR(representation_eval(std::vector<Payoff>{Payoff::constant(AtomSpace(5), 1.0)}, x),
                expectation(x), 1e-12);
  }
  EXPECT_DOUBLE_EQ(representation_eval(BoundedDensities{2.0}, Payoff{0.0, 4.0}), 4.0);
  EXPECT_THROW(representation_eval(std::vector<Payoff>{}, Payoff{1.0}), InvalidArgument);
  EXPECT_THROW(catalog::representation(BoundedDensities{0.5}), InvalidArgument);
}

TEST(Representation, BoundedDensitiesEqualExpectedShortfall) {
  std::mt19937_64 rng(5);
  for (double m : {1.0, 1.5, 2.0, 4.0, 10.0}) {
    for (int t = 0; t < 100; ++t) {
      const Payoff x = random_payoff(AtomSpace(1 + t % 12), rng, dist::Normal{0.0, 2.0});
      EXPECT_NEAR(representation_eval(BoundedDensities{m}, x),
                  catalog::expected_shortfall(1.0 - 1.0 / m)(x), 1e-9);
    }
  }
}

TEST(Representation, FiniteSetIsMaxOverDensities) {
  const std::vector<Payoff> d{Payoff{1.0, 1.0, 1.0}, Payoff{0.0, 1.5, 1.5}, Payoff{0.0, 0.0, 3.0}};
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const Payoff x = random_payoff(AtomSpace(3), rng, dist::Normal{});
    double best = -kPlusInf;
    for (const auto& y : d) best = std::max(best, max_correlation_oracle(x, y));
    EXPECT_NEAR(representation_eval(d, x), best, 1e-12);
  }
}

TEST(Invariants, ConvexFunctionalsHaveNonnegativeSpread) {
  std::mt19937_64 rng(7);
  for (const auto& f : convex_law_invariant_catalog()) {
    if (f(Payoff::zero(AtomSpace(4))) != 0.0) continue;
    for (int t = 0; t < 200; ++t) {
      const Payoff x = random_payoff(AtomSpace(4), rng, dist::Normal{0.0, 2.0});
      EXPECT_GE(f(x) + f(-x), -1e-12) << f.name();
    }
  }
}

TEST(Invariants, RatioNondecreasingForConvexNormalized) {
  std::mt19937_64 rng(8);
  for (const auto& f : convex_law_invariant_catalog()) {
    if (f(Payoff::zero(AtomSpace(5))) != 0.0) continue;
    for (int t = 0; t < 50; ++t) {
      const Payoff x = random_payoff(AtomSpace(5), rng, dist::Normal{});
      double prev = -kPlusInf;
      for (double lambda : {0.1, 0.5, 1.0, 2.0, 7.0, 30.0}) {
        const double r = f(lambda * x) / lambda;
        EXPECT_GE(r, prev - 1e-12 * (1.0 + std::abs(prev))) << f.name();
        prev = r;
      }
    }
  }
}

TEST(Recession, Examples) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const Payoff x = random_payoff(AtomSpace(4), rng, dist::Normal{});
    const auto r = recession(catalog::expected_shortfall(0.5), x, 1e4, 20);
    for (double v : r.ratios) EXPECT_NEAR(v, catalog::expected_shortfall(0.5)(x), 1e-12);
    EXPECT_FALSE(r.stale);
  }
  const auto fg = recession(catalog::floor_gauge(), Payoff{-1.0, 1.0}, 1e6, 60);
  EXPECT_NEAR(fg.value, 1.0, 1e-6);
  EXPECT_EQ(fg.at_zero, -1.0);
  const auto ent = recession(catalog::entropic(1.0), Payoff{0.0, 1.0}, 1e6, 60);
  EXPECT_NEAR(ent.value, 1.0, 1e-5);
  EXPECT_EQ(ent.lambdas.back(), 1e6);
  // Still rising at the end of a short grid.
  EXPECT_TRUE(recession(catalog::entropic(1.0), Payoff{0.0, 1.0}, 10.0, 5).stale);
  EXPECT_THROW(recession(catalog::expectation(1.0).with_flags({}), Payoff{1.0}, 10.0, 5), FlagViolation);
  EXPECT_THROW(recession(catalog::expectation(1.0), Payoff{1.0}, 0.5, 5), InvalidArgument);
}

TEST(Recession, GridMaxIsLowerBoundOfLargerGrids) {
  const Payoff x{-3.0, 0.5, 2.0};
  const auto coarse = recession(catalog::entropic(0.5), x, 1e2, 10);
  const auto fine = recession(catalog::entropic(0.5), x, 1e5, 40);
  EXPECT_LE(coarse.value, fine.value + 1e-12);
  EXPECT_LE(fine.value, x.max() + 1e-12);
}

TEST(Conjugate, LowerBoundExamples) {
  auto sampler = [](std::mt19937_64& rng) { return random_payoff(AtomSpace(2), rng, dist::Normal{0.0, 3.0}); };
  const double b1 = conjugate_lower_bound(catalog::expectation(1.0), Payoff{1.0, 1.0}, sampler, 500, 1);
  EXPECT_NEAR(b1, 0.0, 1e-12);
  // Along X = t (Y - 1) the objective grows linearly; larger samples give larger bounds.
  auto scaled = [](double s) {
    return [s](std::mt19937_64& rng) { return s * random_payoff(AtomSpace(2), rng, dist::Normal{0.0, 1.0}); };
  };
  const double small = conjugate_lower_bound(catalog::expectation(1.0), Payoff{0.0, 2.0}, scaled(1.0), 200, 2);
  const double large = conjugate_lower_bound(catalog::expectation(1.0), Payoff{0.0, 2.0}, scaled(100.0), 200, 2);
  EXPECT_GT(large, 10.0 * std::max(small, 1e-3));

  // Expected shortfall on its own spectrum density: bound <= 0, and 0 at X = 0.
  const double beta = 0.75;
  const Payoff density{0.0, 0.0, 0.0, 4.0};
  const auto es = catalog::expected_shortfall(beta);
  auto sampler4 = [](std::mt19937_64& rng) { return random_payoff(AtomSpace(4), rng, dist::Normal{0.0, 2.0}); };
  const double b3 = conjugate_lower_bound(es, density, sampler4, 1000, 3);
  EXPECT_LE(b3, 1e-12);
  EXPECT_EQ(es.closed_form_conjugate()(density), 0.0);
  EXPECT_EQ(es.closed_form_conjugate()(Payoff{0.0, 0.0, 0.0, 5.0}), kPlusInf);
  EXPECT_THROW(conjugate_lower_bound(catalog::expectation(1.0).with_flags({}), density, sampler4, 5, 1),
               FlagViolation);
}

TEST(Conjugate, ClosedFormsDominateSampledBounds) {
  // pi*(Y) >= sampled bound whenever the closed form is finite.
  std::mt19937_64 rng(10);
  const auto es = catalog::expected_shortfall(0.5);
  auto sampler = [](std::mt19937_64& r) { return random_payoff(AtomSpace(4), r, dist::Normal{0.0, 2.0}); };
  for (int t = 0; t < 20; ++t) {
    // random density bounded by 2
    std::vector<double> w(4);
    double s = 0.0;
    for (auto& e : w) s += (e = std::uniform_real_distribution<double>(0.2, 1.0)(rng));
    for (auto& e : w) e = e / s * 4.0;
    if (*std::max_element(w.begin(), w.end()) > 2.0) continue;
    const Payoff y(w);
    EXPECT_EQ(es.closed_form_conjugate()(y), 0.0);
    EXPECT_LE(conjugate_lower_bound(es, y, sampler, 300, static_cast<std::uint64_t>(t)), 1e-12);
  }
}

TEST(Schur, CatalogHasNoViolations) {
  for (const auto& f : convex_law_invariant_catalog()) {
    const SchurReport r = schur_convexity_report(f, 500, 17);
    EXPECT_TRUE(r.passed()) << f.name() << " excess " << r.max_excess;
  }
  EXPECT_THROW(schur_convexity_report(catalog::expectation(1.0).with_flags({}), 5, 1), FlagViolation);
}

TEST(Schur, DetectsNonLawInvariantFunctional) {
  // Declared law invariant, but only looks at the first atom.
  const PricingFunctional first_atom("first_atom", {true, true, true, true, true, true},
                                     [](const Payoff& x) { return x[0]; });
  const SchurReport r = schur_convexity_report(first_atom, 500, 3);
  EXPECT_FALSE(r.passed());
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(r.witness->lhs, r.witness->rhs);
}

namespace {

bool falsified(const AuditReport& r, const std::string& flag) {
  for (const auto& c : r.checks) {
    if (c.flag == flag) return c.falsified;
  }
  ADD_FAILURE() << "no check for " << flag;
  return false;
}

}  // namespace

TEST(FlagAudit, ExpectationPassesEverything) {
  const AuditReport r = flag_audit(catalog::expectation(1.0), 300, 1);
  EXPECT_TRUE(r.consistent());
  for (const auto& c : r.checks) EXPECT_FALSE(c.falsified) << c.flag;
}

TEST(FlagAudit, EntropicIsNotSublinear) {
  const AuditReport r = flag_audit(catalog::entropic(1.0), 300, 2);
  EXPECT_TRUE(r.consistent());
  EXPECT_TRUE(falsified(r, "sublinear"));
  EXPECT_FALSE(falsified(r, "convex"));
  EXPECT_FALSE(falsified(r, "cash_additive"));
  EXPECT_TRUE(falsified(r, "comonotonic"));
}

TEST(FlagAudit, MislabeledEntropicFails) {
  auto flags = catalog::entropic(1.0).flags();
  flags.sublinear = true;
  const AuditReport r = flag_audit(catalog::entropic(1.0).with_flags(flags), 300, 3);
  EXPECT_FALSE(r.consistent());
  for (const auto& c : r.checks) {
    if (c.flag == "sublinear") {
      ASSERT_TRUE(c.witness.has_value());
      EXPECT_FALSE(c.witness->payoffs.empty());
    }
  }
}

TEST(FlagAudit, GateMonotoneNotFalsified) {
  const AuditReport r = flag_audit(catalog::gate(), 300, 4);
  EXPECT_TRUE(r.consistent());
  EXPECT_FALSE(falsified(r, "sublinear"));
  EXPECT_FALSE(falsified(r, "law_invariant"));
  EXPECT_FALSE(falsified(r, "monotone"));
  EXPECT_TRUE(falsified(r, "cash_additive"));
}

TEST(FlagAudit, WholeCatalogConsistent) {
  for (const auto& f : convex_law_invariant_catalog()) {
    EXPECT_TRUE(flag_audit(f, 200, 5).consistent()) << f.name();
  }
  EXPECT_TRUE(flag_audit(catalog::choquet(Distortion::power(2.0)), 200, 5).consistent());
  EXPECT_TRUE(flag_audit(catalog::representation(std::vector<Payoff>{Payoff{0.5, 1.5}, Payoff{1.0, 1.0}}), 200, 5)
                  .consistent());
}

TEST(FlagAudit, FloorGaugeFlags) {
  const AuditReport r = flag_audit(catalog::floor_gauge(), 300, 6);
  EXPECT_TRUE(r.consistent());
  EXPECT_TRUE(falsified(r, "sublinear"));
  EXPECT_TRUE(falsified(r, "monotone"));
  EXPECT_TRUE(falsified(r, "cash_additive"));
}

TEST(FlagAudit, PowerDistortionAboveOneIsNotConvex) {
  const AuditReport r = flag_audit(catalog::choquet(Distortion::power(3.0)), 400, 7);
  EXPECT_TRUE(falsified(r, "convex"));
  EXPECT_FALSE(falsified(r, "comonotonic"));
}

TEST(FlagAudit, Deterministic) {
  const AuditReport a = flag_audit(catalog::entropic(1.0), 100, 9);
  const AuditReport b = flag_audit(catalog::entropic(1.0), 100, 9);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].falsified, b.checks[i].falsified);
    if (a.checks[i].witness) EXPECT_EQ(a.checks[i].witness->payoffs, b.checks[i].witness->payoffs);
  }
}
