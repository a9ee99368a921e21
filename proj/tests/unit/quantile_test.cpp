#include <gtest/gtest.h>

#include <random>

#include "lawprice/error.hpp"
#include "lawprice/quantile.hpp"
#include "support/oracles.hpp"

using namespace lawprice;

TEST(Quantile, Examples) {
  EXPECT_EQ(quantile(Payoff{3.0, 1.0, 2.0}).sorted_values(), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(quantile(Payoff{4.0, 4.0}).sorted_values(), (std::vector<double>{4.0, 4.0}));
  const QuantileFn q = quantile(Payoff{3.0, 1.0, 2.0, 0.0});
  EXPECT_EQ(q.at(0.25), 0.0);
  EXPECT_EQ(q.at(0.26), 1.0);
  EXPECT_EQ(q.at(0.999), 3.0);
  EXPECT_THROW(q.at(0.0), InvalidArgument);
  EXPECT_THROW(q.at(1.5), InvalidArgument);
  EXPECT_THROW(QuantileFn({2.0, 1.0}), InvalidArgument);
}

TEST(Quantile, Reflection) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const Payoff x = random_payoff(AtomSpace(1 + t % 7), rng, dist::Normal{});
    const std::vector<double> a = quantile(x).sorted_values();
    const std::vector<double> b = quantile(-x).sorted_values();
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(b[i], -a[n - 1 - i]);
  }
}

TEST(HardyLittlewood, Examples) {
  EXPECT_DOUBLE_EQ(hl_product(Payoff{1.0, 2.0}, Payoff{1.0, 2.0}), 2.5);
  EXPECT_DOUBLE_EQ(hl_product(Payoff{0.0, 1.0}, Payoff{1.0, 0.0}), 0.5);
  EXPECT_DOUBLE_EQ(hl_product(Payoff{3.0, 3.0, 3.0}, Payoff{1.0, -5.0, 7.0}), 3.0);
  EXPECT_THROW(hl_product(Payoff{1.0}, Payoff{1.0, 2.0}), SpaceMismatch);
}

TEST(HardyLittlewood, OracleAgreement) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto xi = oracle::random_ints(rng, n, -9, 9);
    const auto yi = oracle::random_ints(rng, n, -9, 9);
    const Payoff x(std::vector<double>(xi.begin(), xi.end()));
    const Payoff y(std::vector<double>(yi.begin(), yi.end()));
    const double brute = static_cast<double>(oracle::max_permuted_dot(xi, yi)) / static_cast<double>(n);
    EXPECT_EQ(hl_product(x, y), brute);
    EXPECT_EQ(max_correlation_oracle(x, y), brute);
  }
  EXPECT_THROW(max_correlation_oracle(Payoff(std::vector<double>(9, 1.0)),
                                      Payoff(std::vector<double>(9, 1.0))),
               InvalidArgument);
  EXPECT_EQ(max_correlation_oracle(Payoff{3.0}, Payoff{-2.0}), -6.0);
}

TEST(HardyLittlewood, DominatesEveryCoupling) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const Payoff x = random_payoff(AtomSpace(10), rng, dist::Normal{});
    const Payoff y = random_payoff(AtomSpace(10), rng, dist::Normal{});
    double dot = 0.0;
    for (std::size_t i = 0; i < 10; ++i) dot += x[i] * y[i];
    EXPECT_LE(dot / 10.0, hl_product(x, y) + 1e-12);
  }
}

TEST(ComonotoneRearrangement, Properties) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const Payoff x = random_payoff(AtomSpace(6), rng, dist::Normal{});
    const Payoff y = random_payoff(AtomSpace(6), rng, dist::Normal{});
    const auto [a, b] = comonotone_rearrangement(x, y);
    EXPECT_TRUE(is_comonotone(a, b));
    EXPECT_TRUE(same_law(a, x));
    EXPECT_TRUE(same_law(b, y));
    double dot = 0.0;
    for (std::size_t i = 0; i < 6; ++i) dot += a[i] * b[i];
    EXPECT_NEAR(dot / 6.0, hl_product(x, y), 1e-12);
  }
}

TEST(ConvexOrder, Examples) {
  EXPECT_TRUE(convex_order_geq(Payoff{0.0, 2.0}, Payoff{1.0, 1.0}, 0.0));
  EXPECT_TRUE(convex_order_geq(Payoff{0.0, 2.0}, Payoff{0.0, 2.0}, 0.0));
  EXPECT_FALSE(convex_order_geq(Payoff{1.0, 1.0}, Payoff{0.0, 2.0}, 0.0));
  EXPECT_FALSE(convex_order_geq(Payoff{0.0, 2.0}, Payoff{0.0, 1.0}, 0.0));  // means differ
  EXPECT_TRUE(convex_order_oracle(Payoff{0.0, 2.0}, Payoff{1.0, 1.0}));
  EXPECT_FALSE(convex_order_oracle(Payoff{1.0, 1.0}, Payoff{0.0, 3.0}));
}

namespace {

// Nondecreasing integer vectors of length n over [lo, hi].
void sorted_vectors(std::size_t n, int lo, int hi, std::vector<std::vector<int>>& out,
                    std::vector<int>& cur) {
  if (cur.size() == n) {
    out.push_back(cur);
    return;
  }
  for (int v = cur.empty() ? lo : cur.back(); v <= hi; ++v) {
    cur.push_back(v);
    sorted_vectors(n, lo, hi, out, cur);
    cur.pop_back();
  }
}

}  // namespace

// Both tests are law invariant, so sorted representatives cover all laws;
// the exhaustive over-all-orderings run for n <= 4 lives in the acceptance binary.
TEST(ConvexOrder, AgreesWithOracleOnAllLawsUpToSixAtoms) {
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::vector<int>> laws;
    std::vector<int> cur;
    sorted_vectors(n, -2, 2, laws, cur);
    for (const auto& a : laws) {
      const Payoff x(std::vector<double>(a.begin(), a.end()));
      for (const auto& b : laws) {
        const Payoff y(std::vector<double>(b.begin(), b.end()));
        const bool lib = convex_order_geq(x, y, 0.0);
        ASSERT_EQ(lib, convex_order_oracle(x, y));
        ASSERT_EQ(lib, oracle::convex_geq_integer(a, b));
      }
    }
  }
}

TEST(ConvexOrder, LawInvariantInBothArguments) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const Payoff x = random_payoff(AtomSpace(5), rng, dist::TwoPoint{-2.0, 1.0, 0.5});
    const Payoff y = random_payoff(AtomSpace(5), rng, dist::TwoPoint{-1.0, 1.0, 0.5});
    EXPECT_EQ(convex_order_geq(x, y, 0.0), convex_order_geq(permute(x, rng), permute(y, rng), 0.0));
  }
}
