#include "lawprice/prob_core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lawprice/error.hpp"

namespace lawprice {

AtomSpace::AtomSpace(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("AtomSpace needs at least one atom");
}

Payoff::Payoff(AtomSpace space, std::vector<double> values)
    : space_(space), values_(std::move(values)) {
  if (values_.size() != space_.size()) {
    throw SpaceMismatch("payoff has " + std::to_string(values_.size()) + " values on a space of " +
                        std::to_string(space_.size()) + " atoms");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("payoff values must be finite");
  }
}

namespace {
AtomSpace space_of(const std::vector<double>& values) { return AtomSpace(values.size()); }
}  // namespace

Payoff::Payoff(std::vector<double> values) : Payoff(space_of(values), values) {}

Payoff::Payoff(std::initializer_list<double> values) : Payoff(std::vector<double>(values)) {}

Payoff Payoff::constant(AtomSpace space, double c) {
  return Payoff(space, std::vector<double>(space.size(), c));
}

double Payoff::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Payoff::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Payoff::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Payoff Payoff::operator-() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return -v; });
  return Payoff(space_, std::move(out));
}

Payoff Payoff::operator+(double c) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [c](double v) { return v + c; });
  return Payoff(space_, std::move(out));
}

Payoff operator*(double c, const Payoff& x) {
  std::vector<double> out(x.values_.size());
  std::transform(x.values_.begin(), x.values_.end(), out.begin(), [c](double v) { return c * v; });
  return Payoff(x.space_, std::move(out));
}

Payoff Payoff::operator+(const Payoff& other) const {
  require_same_space(*this, other);
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), other.values_.begin(), out.begin(), std::plus<>());
  return Payoff(space_, std::move(out));
}

Payoff Payoff::operator-(const Payoff& other) const {
  require_same_space(*this, other);
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), other.values_.begin(), out.begin(),
                 std::minus<>());
  return Payoff(space_, std::move(out));
}

void require_same_space(const Payoff& x, const Payoff& y) {
  if (x.space() != y.space()) {
    throw SpaceMismatch("payoffs live on spaces of " + std::to_string(x.size()) + " and " +
                        std::to_string(y.size()) + " atoms");
  }
}

Partition::Partition(std::size_t n, std::vector<std::vector<std::size_t>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (const auto& block : blocks_) {
    if (block.empty()) throw InvalidArgument("partition has an empty block");
    for (std::size_t i : block) {
      if (i >= n) throw InvalidArgument("partition references atom outside the space");
      if (seen[i]) throw InvalidArgument("partition blocks overlap");
      seen[i] = true;
      ++covered;
    }
  }
  if (covered != n) throw InvalidArgument("partition does not cover every atom");
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
  return Partition(n, std::move(blocks));
}

Partition Partition::whole(std::size_t n) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Partition(n, {std::move(all)});
}

Partition Partition::random(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
  // Choose k-1 distinct cut points in 1..n-1.
  std::vector<std::size_t> cuts(n - 1);
  std::iota(cuts.begin(), cuts.end(), std::size_t{1});
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(k - 1);
  cuts.push_back(n);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t start = 0;
  for (std::size_t cut : cuts) {
    blocks.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                        order.begin() + static_cast<std::ptrdiff_t>(cut));
    start = cut;
  }
  return Partition(n, std::move(blocks));
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.n_ != n_) return false;
  std::vector<std::size_t> owner(n_);
  for (std::size_t b = 0; b < coarser.blocks_.size(); ++b) {
    for (std::size_t i : coarser.blocks_[b]) owner[i] = b;
  }
  for (const auto& block : blocks_) {
    for (std::size_t i : block) {
      if (owner[i] != owner[block.front()]) return false;
    }
  }
  return true;
}

double expectation(const Payoff& x) {
  double sum = std::accumulate(x.values().begin(), x.values().end(), 0.0);
  return sum / static_cast<double>(x.size());
}

bool same_law(const Payoff& x, const Payoff& y) {
  require_same_space(x, y);
  std::vector<double> a(x.values().begin(), x.values().end());
  std::vector<double> b(y.values().begin(), y.values().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

bool is_comonotone(const Payoff& x, const Payoff& y) {
  require_same_space(x, y);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((x[i] - x[j]) * (y[i] - y[j]) < 0.0) return false;
    }
  }
  return true;
}

Payoff condition(const Payoff& x, const Partition& g) {
  if (g.space_size() != x.size()) {
    throw InvalidArgument("partition is over " + std::to_string(g.space_size()) +
                          " atoms, payoff over " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size());
  for (const auto& block : g.blocks()) {
    double sum = 0.0;
    for (std::size_t i : block) sum += x[i];
    const double avg = sum / static_cast<double>(block.size());
    for (std::size_t i : block) out[i] = avg;
  }
  return Payoff(x.space(), std::move(out));
}

namespace {

std::vector<double> parse_args(const std::string& body) {
  std::vector<double> args;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw ParseError("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad number '" + item + "' in distribution spec");
    }
  }
  return args;
}

}  // namespace

DistributionSpec parse_distribution(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw ParseError("distribution spec must look like name(args): '" + text + "'");
  }
  std::string name = text.substr(0, open);
  name.erase(std::remove_if(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }),
             name.end());
  const auto args = parse_args(text.substr(open + 1, close - open - 1));
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw ParseError("wrong number of arguments for " + name);
    }
  };
  if (name == "uniform") {
    need(2, 2);
    if (!(args[0] < args[1])) throw InvalidArgument("uniform needs lo < hi");
    return dist::Uniform{args[0], args[1]};
  }
  if (name == "normal") {
    need(2, 2);
    if (!(args[1] > 0.0)) throw InvalidArgument("normal needs a positive stddev");
    return dist::Normal{args[0], args[1]};
  }
  if (name == "two-point" || name == "two_point") {
    need(2, 3);
    const double p = args.size() == 3 ? args[2] : 0.5;
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("two-point probability outside [0,1]");
    return dist::TwoPoint{args[0], args[1], p};
  }
  if (name == "constant") {
    need(1, 1);
    return dist::Constant{args[0]};
  }
  throw ParseError("unknown distribution '" + name + "'");
}

Payoff random_payoff(AtomSpace space, std::mt19937_64& rng, const DistributionSpec& spec) {
  std::vector<double> values(space.size());
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, dist::Uniform>) {
          std::uniform_real_distribution<double> u(d.lo, d.hi);
          for (double& v : values) v = u(rng);
        } else if constexpr (std::is_same_v<T, dist::Normal>) {
          std::normal_distribution<double> g(d.mean, d.stddev);
          for (double& v : values) v = g(rng);
        } else if constexpr (std::is_same_v<T, dist::TwoPoint>) {
          std::bernoulli_distribution b(d.p);
          for (double& v : values) v = b(rng) ? d.hi : d.lo;
        } else {
          std::fill(values.begin(), values.end(), d.c);
        }
      },
      spec);
  return Payoff(space, std::move(values));
}

Payoff random_payoff(AtomSpace space, std::uint64_t seed, const DistributionSpec& spec) {
  std::mt19937_64 rng(seed);
  return random_payoff(space, rng, spec);
}

Payoff permute(const Payoff& x, std::mt19937_64& rng) {
  std::vector<double> values(x.values().begin(), x.values().end());
  std::shuffle(values.begin(), values.end(), rng);
  return Payoff(x.space(), std::move(values));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace diagnostics {

bool same_law_approx(const Payoff& x, const Payoff& y, double tol) {
  require_same_space(x, y);
  std::vector<double> a(x.values().begin(), x.values().end());
  std::vector<double> b(y.values().begin(), y.values().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace diagnostics

}  // namespace lawprice
