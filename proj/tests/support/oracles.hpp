#pragma once

// Reference computations for tests. Each one follows a different route from
// the library code it checks: brute force, a textbook formula, or a dual form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline double mean(const Vec& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// max over permutations sigma of sum_i x_i * y_sigma(i), in exact integer
/// arithmetic (inputs must be integers).
inline long long max_permuted_dot(const std::vector<long long>& x, std::vector<long long> y) {
  std::sort(y.begin(), y.end());
  long long best = std::numeric_limits<long long>::min();
  do {
    long long s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    best = std::max(best, s);
  } while (std::next_permutation(y.begin(), y.end()));
  return best;
}

/// Choquet integral against g o P by a midpoint Riemann sum of
/// int_0^inf g(P(X > t)) dt - int_{-inf}^0 (1 - g(P(X > t))) dt.
inline double choquet_riemann(const std::function<double(double)>& g, const Vec& x, int steps) {
  const double n = static_cast<double>(x.size());
  const double hi = std::max(0.0, *std::max_element(x.begin(), x.end()));
  const double lo = std::min(0.0, *std::min_element(x.begin(), x.end()));
  auto tail = [&](double t) {
    double c = 0;
    for (double v : x) c += v > t ? 1.0 : 0.0;
    return g(c / n);
  };
  double pos = 0.0;
  double neg = 0.0;
  if (hi > 0.0) {
    const double h = hi / steps;
    for (int i = 0; i < steps; ++i) pos += tail((i + 0.5) * h) * h;
  }
  if (lo < 0.0) {
    const double h = -lo / steps;
    for (int i = 0; i < steps; ++i) neg += (1.0 - tail(lo + (i + 0.5) * h)) * h;
  }
  return pos - neg;
}

/// Expected shortfall by the Rockafellar-Uryasev minimization
/// min_t t + E[(X - t)^+] / (1 - beta); the minimum sits at an atom value.
inline double es_rockafellar_uryasev(const Vec& x, double beta) {
  double best = std::numeric_limits<double>::infinity();
  for (double t : x) {
    double s = 0.0;
    for (double v : x) s += std::max(v - t, 0.0);
    best = std::min(best, t + s / static_cast<double>(x.size()) / (1.0 - beta));
  }
  return best;
}

/// Convex order through the stop-loss transform on integers: sum (x - k)^+ >=
/// sum (y - k)^+ for every integer k in range, and equal sums.
inline bool convex_geq_integer(const std::vector<int>& x, const std::vector<int>& y) {
  if (std::accumulate(x.begin(), x.end(), 0) != std::accumulate(y.begin(), y.end(), 0)) return false;
  const int lo = std::min(*std::min_element(x.begin(), x.end()), *std::min_element(y.begin(), y.end()));
  const int hi = std::max(*std::max_element(x.begin(), x.end()), *std::max_element(y.begin(), y.end()));
  for (int k = lo; k <= hi; ++k) {
    int sx = 0;
    int sy = 0;
    for (int v : x) sx += std::max(v - k, 0);
    for (int v : y) sy += std::max(v - k, 0);
    if (sx < sy) return false;
  }
  return true;
}

/// Bisection-free Luxemburg norms with known closed forms.
inline double lp_norm(const Vec& x, double p) {
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s / static_cast<double>(x.size()), 1.0 / p);
}

inline Vec random_vec(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  Vec v(n);
  for (auto& e : v) e = d(rng);
  return v;
}

inline std::vector<long long> random_ints(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<long long> d(lo, hi);
  std::vector<long long> v(n);
  for (auto& e : v) e = d(rng);
  return v;
}

}  // namespace oracle
