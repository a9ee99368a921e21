#include "lawprice/friction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lawprice/error.hpp"
#include "lawprice/parallel.hpp"

namespace lawprice {

double spread(const PricingFunctional& f, const Payoff& x) {
  const double ask = f(x);
  const double neg = f(-x);
  if (ask == kPlusInf || neg == kPlusInf) return kPlusInf;
  return ask + neg;
}

bool is_frictionless(const PricingFunctional& f, const Payoff& x, double tol) {
  const double s = spread(f, x);
  return s != kPlusInf && std::abs(s) <= tol;
}

std::vector<double> default_m_grid() { return {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0}; }

namespace {

void validate_m_grid(const std::vector<double>& grid) {
  const auto has = [&](double v) { return std::find(grid.begin(), grid.end(), v) != grid.end(); };
  const bool big_pos = std::any_of(grid.begin(), grid.end(), [](double m) { return m >= 2.0; });
  const bool big_neg = std::any_of(grid.begin(), grid.end(), [](double m) { return m <= -2.0; });
  if (!has(1.0) || !has(-1.0) || !big_pos || !big_neg) {
    throw InvalidArgument("m-grid must contain +1, -1 and magnitudes >= 2 of both signs");
  }
}

double strong_defect(const PricingFunctional& f, const Payoff& x, const std::vector<double>& grid) {
  const double base = f(x);
  if (base == kPlusInf) return kPlusInf;
  double total = 0.0;
  for (double m : grid) {
    const double v = f(m * x);
    if (v == kPlusInf) return kPlusInf;
    total += std::abs(v - m * base);
  }
  return total;
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

bool is_strongly_frictionless(const PricingFunctional& f, const Payoff& x,
                              const std::vector<double>& m_grid, double tol) {
  validate_m_grid(m_grid);
  const double base = f(x);
  if (base == kPlusInf) return false;
  for (double m : m_grid) {
    const double v = f(m * x);
    if (v == kPlusInf) return false;
    if (std::abs(v - m * base) > tol * std::max(1.0, std::abs(m))) return false;
  }
  return true;
}

FrictionReport friction_report(const PricingFunctional& f, const Payoff& x, std::string payoff_id,
                               double tol, const std::vector<double>& m_grid) {
  FrictionReport r;
  r.payoff_id = std::move(payoff_id);
  r.spread = spread(f, x);
  r.frictionless = is_frictionless(f, x, tol);
  r.strongly_frictionless = is_strongly_frictionless(f, x, m_grid, tol);
  r.m_grid_used = m_grid;
  r.tolerance = tol;
  return r;
}

namespace {

AdditivityResult additivity_search(const PricingFunctional& f, const Payoff& z, int trials,
                                   double tol, std::uint64_t seed, bool one_sided) {
  const double pz = f(z);
  if (pz == kPlusInf) throw InvalidArgument("Z-additivity needs pi(Z) finite");
  // Structured probes first, then random (X, m).
  std::vector<std::pair<Payoff, double>> probes;
  const AtomSpace space = z.space();
  for (const Payoff& x : {Payoff::zero(space), z, -z, Payoff::constant(space, 1.0)}) {
    for (double m : {1.0, -1.0, 2.0}) probes.emplace_back(x, m);
  }
  const std::size_t total = probes.size() + static_cast<std::size_t>(std::max(trials, 0));
  std::vector<std::optional<Witness>> found(total);
  parallel_for(total, [&](std::size_t i) {
    Payoff x = Payoff::zero(space);
    double m = 0.0;
    if (i < probes.size()) {
      x = probes[i].first;
      m = probes[i].second;
    } else {
      std::mt19937_64 rng(derive_seed(seed, i));
      x = random_payoff(space, rng, dist::Normal{0.0, 2.0});
      m = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    }
    const double lhs = f(x + m * z);
    const double px = f(x);
    const double rhs = px == kPlusInf ? kPlusInf : px + m * pz;
    const double slack = tol * (1.0 + std::abs(lhs) + std::abs(rhs));
    bool bad = false;
    if (rhs == kPlusInf || lhs == kPlusInf) {
      bad = one_sided ? (lhs == kPlusInf && rhs != kPlusInf) : lhs != rhs;
    } else if (one_sided) {
      bad = lhs > rhs + slack;
    } else {
      bad = std::abs(lhs - rhs) > slack;
    }
    if (bad) {
      found[i] = Witness{std::string(one_sided ? "pi(X+mZ) > pi(X)+m pi(Z)" : "pi(X+mZ) != pi(X)+m pi(Z)") +
                             " at m=" + num(m),
                         {x, z}, lhs, rhs};
    }
  });
  AdditivityResult out;
  out.samples = static_cast<int>(total);
  for (auto& w : found) {
    if (w) {
      out.falsified = true;
      out.witness = std::move(w);
      break;
    }
  }
  return out;
}

}  // namespace

AdditivityResult z_additivity_check(const PricingFunctional& f, const Payoff& z, int trials,
                                    double tol, std::uint64_t seed) {
  return additivity_search(f, z, trials, tol, seed, false);
}

AdditivityResult z_subadditivity_check(const PricingFunctional& f, const Payoff& z, int trials,
                                       double tol, std::uint64_t seed) {
  return additivity_search(f, z, trials, tol, seed, true);
}

std::string to_string(CollapseVerdict v) {
  switch (v) {
    case CollapseVerdict::Collapse: return "COLLAPSE";
    case CollapseVerdict::NoFrictionlessRisky: return "NO_FRICTIONLESS_RISKY";
    case CollapseVerdict::Boundary: return "BOUNDARY";
    case CollapseVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

constexpr double kNonzeroMeans[] = {-1.0, -0.25, 0.25, 1.0};
constexpr int kExhaustiveGrid = 1000;
constexpr double kMinStep = 1e-7;

struct Candidate {
  double objective = kPlusInf;
  std::vector<double> shape;  // sorted, shape.front() = 0, shape.back() = 1
  double mean = 0.0;
  long evaluations = 0;
};

class ScanObjective {
 public:
  ScanObjective(const PricingFunctional& f, AtomSpace space, bool strong)
      : f_(f), space_(space), strong_(strong), grid_(default_m_grid()) {}

  Payoff payoff(const std::vector<double>& shape, double mean) const {
    const double shift = mean - std::accumulate(shape.begin(), shape.end(), 0.0) /
                                    static_cast<double>(shape.size());
    std::vector<double> v(shape.size());
    std::transform(shape.begin(), shape.end(), v.begin(), [shift](double s) { return s + shift; });
    return Payoff(space_, std::move(v));
  }

  double operator()(const std::vector<double>& shape, double mean) const {
    const Payoff z = payoff(shape, mean);
    return strong_ ? strong_defect(f_, z, grid_) : spread(f_, z);
  }

 private:
  const PricingFunctional& f_;
  AtomSpace space_;
  bool strong_;
  std::vector<double> grid_;
};

/// Coordinate descent over the interior atoms of a sorted shape.
Candidate descend(const ScanObjective& objective, std::vector<double> shape, double mean) {
  Candidate c;
  c.mean = mean;
  c.objective = objective(shape, mean);
  c.evaluations = 1;
  const std::size_t n = shape.size();
  double step = 0.25;
  while (step >= kMinStep && n > 2) {
    bool improved = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (double dir : {-1.0, 1.0}) {
        auto trial = shape;
        trial[i] = std::clamp(trial[i] + dir * step, 0.0, 1.0);
        std::sort(trial.begin(), trial.end());
        const double v = objective(trial, mean);
        ++c.evaluations;
        if (v < c.objective) {
          c.objective = v;
          shape = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  c.shape = std::move(shape);
  return c;
}

bool better(const Candidate& a, const Candidate& b) { return a.objective < b.objective; }

/// Best candidate for one family of mean targets.
Candidate search(const ScanObjective& objective, std::size_t n, const std::vector<double>& means,
                 std::uint64_t seed, int budget, bool exhaustive) {
  std::vector<std::vector<double>> starts;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> s(n, 1.0);
    std::fill(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
    starts.push_back(std::move(s));
  }
  if (exhaustive && n == 3) {
    for (int j = 0; j <= kExhaustiveGrid; ++j) {
      starts.push_back({0.0, static_cast<double>(j) / kExhaustiveGrid, 1.0});
    }
  }
  const std::size_t fixed = starts.size();
  const std::size_t restarts = exhaustive ? 0 : static_cast<std::size_t>(std::max(budget, 0));
  const std::size_t per_mean = fixed + restarts;
  std::vector<Candidate> results(per_mean * means.size());
  parallel_for(results.size(), [&](std::size_t idx) {
    const std::size_t which = idx % per_mean;
    const double mean = means[idx / per_mean];
    std::vector<double> shape;
    if (which < fixed) {
      shape = starts[which];
    } else {
      std::mt19937_64 rng(derive_seed(seed, idx));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      shape.assign(n, 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i) shape[i] = u(rng);
      shape.back() = 1.0;
      std::sort(shape.begin(), shape.end());
    }
    if (exhaustive) {
      Candidate c;
      c.mean = mean;
      c.objective = objective(shape, mean);
      c.evaluations = 1;
      c.shape = std::move(shape);
      results[idx] = std::move(c);
    } else {
      results[idx] = descend(objective, std::move(shape), mean);
    }
  });
  Candidate best;
  long evaluations = 0;
  for (auto& r : results) {
    evaluations += r.evaluations;
    if (better(r, best)) best = r;
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace

CollapseReport collapse_scan(const PricingFunctional& f, AtomSpace space, double tol,
                             std::uint64_t seed, int budget) {
  if (!f.flags().law_invariant) {
    throw FlagViolation(f.name() + ": collapse scan needs a law-invariant functional");
  }
  if (space.size() < 2) throw InvalidArgument("collapse scan needs at least two atoms");
  if (!(tol > 0.0)) throw InvalidArgument("collapse scan needs tol > 0");
  const double at_zero = f(Payoff::zero(space));
  if (std::abs(at_zero) > tol) {
    throw FlagViolation(f.name() + ": collapse scan needs pi(0) = 0, got " + num(at_zero));
  }
  const bool strong = !f.flags().sublinear;
  const bool exhaustive = space.size() <= 3;
  const ScanObjective objective(f, space, strong);
  const std::size_t n = space.size();

  const std::vector<double> nonzero(std::begin(kNonzeroMeans), std::end(kNonzeroMeans));
  const Candidate with_mean = search(objective, n, nonzero, derive_seed(seed, 1), budget, exhaustive);
  const Candidate zero_mean = search(objective, n, {0.0}, derive_seed(seed, 2), budget, exhaustive);

  CollapseReport report;
  report.objective = strong ? "strong" : "spread";
  report.certificate = exhaustive ? "exhaustive" : "heuristic";
  report.tolerance = tol;
  report.evaluations = with_mean.evaluations + zero_mean.evaluations;
  report.min_objective_nonzero_mean = with_mean.objective;
  report.min_objective_zero_mean = zero_mean.objective;

  // c is pinned by the constant-one probe; the residual is measured on a
  // fresh batch independent of the search.
  const double c = f(Payoff::constant(space, 1.0));
  std::mt19937_64 rng(derive_seed(seed, 3));
  double residual = 0.0;
  for (int i = 0; i < 256 && residual != kPlusInf; ++i) {
    const Payoff x = random_payoff(space, rng, dist::Normal{0.0, 3.0});
    const double v = f(x);
    residual = v == kPlusInf ? kPlusInf : std::max(residual, std::abs(v - c * expectation(x)));
  }
  report.linearity_residual = residual;

  const Candidate* chosen = nullptr;
  if (with_mean.objective <= tol) {
    chosen = &with_mean;
    report.c = c;
    report.verdict = residual <= tol ? CollapseVerdict::Collapse : CollapseVerdict::Inconclusive;
  } else if (zero_mean.objective <= tol) {
    chosen = &zero_mean;
    report.verdict = CollapseVerdict::Boundary;
  } else {
    chosen = better(zero_mean, with_mean) ? &zero_mean : &with_mean;
    report.verdict = CollapseVerdict::NoFrictionlessRisky;
  }
  const Payoff witness = objective.payoff(chosen->shape, chosen->mean);
  report.best_objective = chosen->objective;
  report.best_spread = spread(f, witness);
  report.best_mean = expectation(witness);
  report.best_witness = witness;
  return report;
}

std::vector<LandscapeRow> spread_landscape(const PricingFunctional& f, AtomSpace space,
                                           int mean_steps) {
  const std::size_t n = space.size();
  std::vector<LandscapeRow> rows;
  if (n < 2 || mean_steps < 2) return rows;
  for (std::size_t k = 1; k < n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n);
    for (int j = 0; j < mean_steps; ++j) {
      const double mean = -1.0 + 2.0 * j / (mean_steps - 1);
      // low value a, high a + 1, mean a + (1 - frac)
      const double low = mean - (1.0 - frac);
      std::vector<double> v(n, low + 1.0);
      std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), low);
      rows.push_back({frac, mean, spread(f, Payoff(space, std::move(v)))});
    }
  }
  return rows;
}

}  // namespace lawprice
