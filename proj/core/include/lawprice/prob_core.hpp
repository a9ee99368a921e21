#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lawprice {

/// A finite probability space of `n` atoms, each carrying mass 1/n.
///
/// Stands in for a nonatomic space: law invariance becomes invariance under
/// permutations of the atoms.
class AtomSpace {
 public:
  explicit AtomSpace(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double atom_probability() const noexcept { return 1.0 / static_cast<double>(n_); }

  friend bool operator==(const AtomSpace&, const AtomSpace&) = default;

 private:
  std::size_t n_;
};

/// A random variable on an AtomSpace: one finite value per atom.
class Payoff {
 public:
  Payoff(AtomSpace space, std::vector<double> values);
  explicit Payoff(std::vector<double> values);
  Payoff(std::initializer_list<double> values);

  static Payoff constant(AtomSpace space, double c);
  static Payoff zero(AtomSpace space) { return constant(space, 0.0); }

  const AtomSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double min() const;
  double max() const;
  double sup_norm() const;
  /// Range strictly above `tol`.
  bool is_risky(double tol = 0.0) const { return max() - min() > tol; }

  Payoff operator-() const;
  Payoff operator+(double c) const;
  Payoff operator-(double c) const { return *this + (-c); }
  friend Payoff operator*(double c, const Payoff& x);
  Payoff operator+(const Payoff& other) const;
  Payoff operator-(const Payoff& other) const;

  friend bool operator==(const Payoff& a, const Payoff& b) {
    return a.space_ == b.space_ && a.values_ == b.values_;
  }

 private:
  AtomSpace space_;
  std::vector<double> values_;
};

/// Throws SpaceMismatch unless both payoffs live on the same space.
void require_same_space(const Payoff& x, const Payoff& y);

/// A finite sigma-field: disjoint nonempty atom blocks covering the space.
class Partition {
 public:
  Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks);

  static Partition singletons(std::size_t n);
  static Partition whole(std::size_t n);
  /// Uniformly random number of blocks, atoms assigned by a shuffled cut.
  static Partition random(std::size_t n, std::mt19937_64& rng);

  std::size_t space_size() const noexcept { return n_; }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  /// True when every block of `this` lies inside some block of `coarser`.
  bool refines(const Partition& coarser) const;

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> blocks_;
};

double expectation(const Payoff& x);
/// Exact equality of sorted value vectors.
bool same_law(const Payoff& x, const Payoff& y);
bool is_comonotone(const Payoff& x, const Payoff& y);
/// Conditional expectation: every atom takes the average over its block.
Payoff condition(const Payoff& x, const Partition& g);

namespace dist {
struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
struct Normal {
  double mean = 0.0;
  double stddev = 1.0;
};
/// Each atom independently takes `lo` or `hi`, the latter with probability p.
struct TwoPoint {
  double lo = -1.0;
  double hi = 1.0;
  double p = 0.5;
};
struct Constant {
  double c = 0.0;
};
}  // namespace dist

using DistributionSpec = std::variant<dist::Uniform, dist::Normal, dist::TwoPoint, dist::Constant>;

/// Parses "uniform(a,b)", "normal(m,s)", "two-point(lo,hi[,p])", "constant(c)".
DistributionSpec parse_distribution(const std::string& text);

Payoff random_payoff(AtomSpace space, std::uint64_t seed, const DistributionSpec& spec);
Payoff random_payoff(AtomSpace space, std::mt19937_64& rng, const DistributionSpec& spec);

/// Uniformly random permutation of the atoms of `x`.
Payoff permute(const Payoff& x, std::mt19937_64& rng);

/// Seed for the i-th independent stream derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

namespace diagnostics {
/// Sorted values agree to within `tol`. Not an equivalence relation; never used
/// in place of same_law.
bool same_law_approx(const Payoff& x, const Payoff& y, double tol);
}  // namespace diagnostics

}  // namespace lawprice
