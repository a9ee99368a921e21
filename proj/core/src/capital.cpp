#include "lawprice/capital.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lawprice/error.hpp"
#include "lawprice/parallel.hpp"

namespace lawprice {

AcceptanceSet::AcceptanceSet(std::string name, AcceptanceFlags flags, Membership membership,
                             std::optional<PricingFunctional> gauge, WitnessFn accepted,
                             WitnessFn rejected)
    : name_(std::move(name)),
      flags_(flags),
      membership_(std::move(membership)),
      gauge_(std::move(gauge)),
      accepted_(std::move(accepted)),
      rejected_(std::move(rejected)) {
  if (!membership_ || !accepted_ || !rejected_) {
    throw InvalidArgument("acceptance set " + name_ + " needs membership and witnesses");
  }
}

AcceptanceSet AcceptanceSet::from_gauge(std::string name, AcceptanceFlags flags,
                                        PricingFunctional gauge, WitnessFn accepted,
                                        WitnessFn rejected) {
  auto membership = [gauge](const Payoff& x) { return gauge(x) <= 0.0; };
  return AcceptanceSet(std::move(name), flags, std::move(membership), std::move(gauge),
                       std::move(accepted), std::move(rejected));
}

void AcceptanceSet::validate(AtomSpace space) const {
  const Payoff in = accepted_(space);
  const Payoff out = rejected_(space);
  if (!contains(in)) throw InvalidArgument(name_ + ": stored accepted witness is rejected");
  if (contains(out)) throw InvalidArgument(name_ + ": stored rejected witness is accepted");
  if (gauge_) {
    if (((*gauge_)(in) <= 0.0) != contains(in) || ((*gauge_)(out) <= 0.0) != contains(out)) {
      throw InvalidArgument(name_ + ": membership disagrees with the gauge sign");
    }
  }
}

namespace acceptance {

namespace {

Payoff zero_payoff(AtomSpace s) { return Payoff::zero(s); }
Payoff minus_two(AtomSpace s) { return Payoff::constant(s, -2.0); }

}  // namespace

AcceptanceSet expectation() {
  FunctionalFlags gf{true, true, false, true, false, true};
  PricingFunctional gauge("minus_expectation", gf, [](const Payoff& x) { return -lawprice::expectation(x); });
  return AcceptanceSet::from_gauge("expectation", {true, true, true, true, true}, std::move(gauge),
                                   zero_payoff, minus_two);
}

AcceptanceSet expected_shortfall(double beta) {
  const auto es = catalog::expected_shortfall(beta);
  PricingFunctional gauge("es_of_loss(" + es.name() + ")", {true, true, false, true, false, true},
                          [es](const Payoff& x) { return es(-x); });
  std::ostringstream name;
  name << "expected_shortfall(" << beta << ")";
  return AcceptanceSet::from_gauge(name.str(), {true, true, true, true, true}, std::move(gauge),
                                   zero_payoff, minus_two);
}

AcceptanceSet risk_free() {
  PricingFunctional gauge("range", {true, true, false, true, false, false},
                          [](const Payoff& x) { return x.max() - x.min(); });
  auto rejected = [](AtomSpace s) {
    std::vector<double> v(s.size(), 0.0);
    v.back() = 1.0;
    if (s.size() == 1) v.back() = 0.0;
    return Payoff(s, std::move(v));
  };
  return AcceptanceSet::from_gauge("risk_free", {true, true, false, true, true}, std::move(gauge),
                                   zero_payoff, rejected);
}

AcceptanceSet bounded_shortfall() {
  PricingFunctional gauge("shortfall_excess", {true, false, false, true, false, false},
                          [](const Payoff& x) {
                            double s = 0.0;
                            for (double v : x.values()) s += std::min(v, 0.0);
                            return -1.0 - s / static_cast<double>(x.size());
                          });
  return AcceptanceSet::from_gauge("bounded_shortfall", {true, false, true, true, true},
                                   std::move(gauge), zero_payoff, minus_two);
}

AcceptanceSet atom_indexed(std::size_t atom) {
  PricingFunctional gauge("minus_atom_" + std::to_string(atom), {true, true, false, false, false, true},
                          [atom](const Payoff& x) {
                            if (atom >= x.size()) throw SpaceMismatch("atom index outside the space");
                            return -x[atom];
                          });
  return AcceptanceSet::from_gauge("atom_indexed(" + std::to_string(atom) + ")",
                                   {true, true, true, false, true}, std::move(gauge), zero_payoff,
                                   minus_two);
}

AcceptanceSet from_functional(const PricingFunctional& gauge, AcceptanceFlags flags) {
  return AcceptanceSet::from_gauge(
      "{" + gauge.name() + " <= 0}", flags, gauge,
      [gauge](AtomSpace s) {
        // Largest constant of a short grid that the gauge accepts.
        for (double c : {0.0, 1.0, 10.0, 100.0, 1e4, 1e6}) {
          const Payoff p = Payoff::constant(s, c);
          if (gauge(p) <= 0.0) return p;
        }
        return Payoff::zero(s);
      },
      [gauge](AtomSpace s) {
        for (double c : {-2.0, -10.0, -100.0, -1e4, -1e6}) {
          const Payoff p = Payoff::constant(s, c);
          if (gauge(p) > 0.0) return p;
        }
        return Payoff::constant(s, -2.0);
      });
}

}  // namespace acceptance

Market::Market(std::vector<Payoff> basis, std::vector<double> prices, std::size_t numeraire_index)
    : basis_(std::move(basis)), prices_(std::move(prices)), numeraire_(numeraire_index) {
  if (basis_.empty()) throw SolverError("market needs at least one eligible payoff");
  if (basis_.size() > kMaxBasis) {
    throw SolverError("market basis has " + std::to_string(basis_.size()) +
                      " payoffs; at most 3 are supported");
  }
  if (prices_.size() != basis_.size()) throw SolverError("market needs one price per basis payoff");
  if (numeraire_ >= basis_.size()) throw SolverError("numeraire index outside the basis");
  for (const auto& b : basis_) require_same_space(basis_.front(), b);
  for (double p : prices_) {
    if (!std::isfinite(p)) throw SolverError("market prices must be finite");
  }
  // Gram-Schmidt rank test.
  std::vector<std::vector<double>> ortho;
  for (const auto& b : basis_) {
    std::vector<double> v(b.values().begin(), b.values().end());
    const double norm0 = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (const auto& q : ortho) {
      const double d = std::inner_product(v.begin(), v.end(), q.begin(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * q[i];
    }
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm0 == 0.0 || norm <= 1e-10 * norm0) {
      throw SolverError("market basis payoffs are linearly dependent");
    }
    for (double& e : v) e /= norm;
    ortho.push_back(std::move(v));
  }
  const Payoff& u = basis_[numeraire_];
  if (u.min() < 0.0 || u.max() <= 0.0) {
    throw SolverError("eligible numeraire must be nonnegative and nonzero");
  }
  if (!(prices_[numeraire_] > 0.0)) throw SolverError("eligible numeraire must have a positive price");
}

double Market::price(std::span<const double> coefficients) const {
  if (coefficients.size() != basis_.size()) throw InvalidArgument("coefficient count mismatch");
  return std::inner_product(coefficients.begin(), coefficients.end(), prices_.begin(), 0.0);
}

Payoff Market::payoff(std::span<const double> coefficients) const {
  if (coefficients.size() != basis_.size()) throw InvalidArgument("coefficient count mismatch");
  Payoff out = Payoff::zero(space());
  for (std::size_t i = 0; i < basis_.size(); ++i) out = out + coefficients[i] * basis_[i];
  return out;
}

bool Market::has_risky_payoff() const {
  return std::any_of(basis_.begin(), basis_.end(), [](const Payoff& b) { return b.is_risky(); });
}

std::string to_string(RiskStatus s) {
  switch (s) {
    case RiskStatus::Finite: return "finite";
    case RiskStatus::PlusInfinity: return "+inf";
    case RiskStatus::MinusInfinity: return "-inf";
  }
  return "finite";
}

namespace {

constexpr int kExpansionBudget = 60;
constexpr double kDivergenceScale = 1e15;
// Line searches stop widening here: beyond it, Y + t V loses the digits of Y.
constexpr double kLineCap = 1e12;
constexpr double kInvPhi = 0.6180339887498949;

struct LineMin {
  double value = kPlusInf;
  double arg = 0.0;
};

class RiskSolver {
 public:
  RiskSolver(const AcceptanceSet& a, const Market& m, const Payoff& x, double tol)
      : a_(a), m_(m), x_(x), tol_(tol), scale_(std::max(1.0, x.sup_norm())) {
    const std::size_t k = m.dimension();
    const std::size_t u = m.numeraire_index();
    const double pu = m.prices()[u];
    direction_ = (1.0 / pu) * m.numeraire();
    for (std::size_t j = 0; j < k; ++j) {
      if (j == u) continue;
      kernel_.push_back(m.basis()[j] - (m.prices()[j] / pu) * m.numeraire());
      kernel_index_.push_back(j);
    }
  }

  RiskResult solve() {
    RiskResult out;
    out.expansion_budget = kExpansionBudget;
    std::vector<double> s(kernel_.size(), 0.0);
    LineMin best;
    if (kernel_.empty()) {
      best.value = phi(s);
    } else if (kernel_.size() == 1) {
      best = minimize([&](double v) {
        s[0] = v;
        return phi(s);
      });
      s[0] = best.arg;
    } else {
      auto inner = [&](double s0) {
        return minimize([&](double v) {
          std::vector<double> p{s0, v};
          return phi(p);
        });
      };
      best = minimize([&](double v) { return inner(v).value; });
      s[0] = best.arg;
      s[1] = inner(best.arg).arg;
    }
    out.membership_calls = calls_;
    out.expansions = expansions_;
    if (best.value == -kPlusInf || diverged_) {
      out.status = RiskStatus::MinusInfinity;
      out.value = -kPlusInf;
      return out;
    }
    if (best.value == kPlusInf) {
      out.status = RiskStatus::PlusInfinity;
      out.value = kPlusInf;
      return out;
    }
    out.value = best.value;
    // coefficients: t on U/psi(U), s_j on basis_j - (psi_j/psi_U) U
    const std::size_t u = m_.numeraire_index();
    const double pu = m_.prices()[u];
    out.coefficients.assign(m_.dimension(), 0.0);
    out.coefficients[u] = best.value / pu;
    for (std::size_t i = 0; i < kernel_.size(); ++i) {
      const std::size_t j = kernel_index_[i];
      out.coefficients[j] += s[i];
      out.coefficients[u] -= s[i] * m_.prices()[j] / pu;
    }
    return out;
  }

 private:
  bool accepted(const Payoff& p) {
    ++calls_;
    return a_.contains(p);
  }

  /// inf{t : y + t * direction acceptable}
  double phi(const std::vector<double>& s) {
    Payoff y = x_;
    for (std::size_t i = 0; i < s.size(); ++i) y = y + s[i] * kernel_[i];
    if (a_.flags().monotone) return monotone_line(y);
    return boundary_line(y);
  }

  double bisect(const Payoff& y, double lo, double hi, const std::function<bool(double)>& ok) {
    // lo rejected, hi accepted
    for (int it = 0; it < 200 && hi - lo > tol_ * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (ok(mid)) hi = mid;
      else lo = mid;
    }
    (void)y;
    return hi;
  }

  double monotone_line(const Payoff& y) {
    const double h = std::max(1.0, y.sup_norm());
    auto ok = [&](double t) { return accepted(y + t * direction_); };
    const double cap = kLineCap * h;
    double hi = h;
    int e = 0;
    while (!ok(hi)) {
      if (++e > kExpansionBudget || hi > cap) return kPlusInf;
      hi *= 2.0;
    }
    double lo = -h;
    e = 0;
    while (ok(lo)) {
      if (++e > kExpansionBudget || -lo > cap) return -kPlusInf;
      lo *= 2.0;
    }
    return bisect(y, lo, hi, ok);
  }

  /// Non-monotone sets: find an acceptable t, then bisect towards the left
  /// boundary of the (convex) acceptable interval.
  double boundary_line(const Payoff& y) {
    const double h = std::max(1.0, y.sup_norm());
    auto ok = [&](double t) { return accepted(y + t * direction_); };
    const double cap = kLineCap * h;
    std::optional<double> feasible;
    if (a_.gauge()) {
      const auto& gauge = *a_.gauge();
      auto profile = [&](double t) {
        ++calls_;
        return gauge(y + t * direction_);
      };
      double width = h;
      for (int e = 0; e <= kExpansionBudget && !feasible && width <= cap; ++e, width *= 2.0) {
        const LineMin lm = golden(profile, -width, width);
        if (lm.value <= 0.0 && ok(lm.arg)) feasible = lm.arg;
      }
    } else {
      double width = h;
      for (int e = 0; e <= kExpansionBudget && !feasible && width <= cap; ++e, width *= 2.0) {
        for (int i = -16; i <= 16 && !feasible; ++i) {
          const double t = width * i / 16.0;
          if (ok(t)) feasible = t;
        }
      }
    }
    if (!feasible) return kPlusInf;
    double step = h;
    double lo = *feasible - step;
    int e = 0;
    while (ok(lo)) {
      if (++e > kExpansionBudget || step > cap) return -kPlusInf;
      step *= 2.0;
      lo = *feasible - step;
    }
    return bisect(y, lo, *feasible, ok);
  }

  template <class F>
  LineMin golden(F&& f, double lo, double hi) {
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    const double width_tol = 1e-11 * std::max(1.0, hi - lo);
    for (int it = 0; it < 200 && (b - a) > width_tol; ++it) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
      }
    }
    return fc <= fd ? LineMin{fc, c} : LineMin{fd, d};
  }

  /// Golden section on a box [-H, H] doubled while the minimizer sits on the
  /// edge and the value keeps improving.
  template <class F>
  LineMin minimize(F&& f) {
    double half = scale_;
    LineMin prev{kPlusInf, 0.0};
    for (int e = 0; e <= kExpansionBudget; ++e) {
      LineMin cur = golden(f, -half, half);
      if (cur.value == -kPlusInf) return cur;
      if (cur.value < -kDivergenceScale * scale_) {
        diverged_ = true;
        return {-kPlusInf, cur.arg};
      }
      const bool on_edge = half - std::abs(cur.arg) < 1e-3 * half;
      const bool improved =
          cur.value < prev.value - tol_ * (1.0 + std::abs(cur.value)) || prev.value == kPlusInf;
      if (!on_edge || !improved) {
        return cur.value <= prev.value ? cur : prev;
      }
      prev = cur;
      half *= 2.0;
      ++expansions_;
    }
    diverged_ = true;
    return {-kPlusInf, prev.arg};
  }

  const AcceptanceSet& a_;
  const Market& m_;
  const Payoff& x_;
  double tol_;
  double scale_;
  Payoff direction_ = Payoff({0.0});
  std::vector<Payoff> kernel_;
  std::vector<std::size_t> kernel_index_;
  long calls_ = 0;
  int expansions_ = 0;
  bool diverged_ = false;
};

}  // namespace

RiskResult risk_measure(const AcceptanceSet& a, const Market& m, const Payoff& x, double tol) {
  if (!a.flags().convex) {
    throw FlagViolation(a.name() + ": the risk-measure solver relies on a convex acceptance set");
  }
  if (!(tol > 0.0)) throw InvalidArgument("risk_measure needs tol > 0");
  if (x.space() != m.space()) throw SpaceMismatch("payoff and market live on different spaces");
  return RiskSolver(a, m, x, tol).solve();
}

namespace {

bool differs(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a != b;
  return std::abs(a - b) > tol;
}

}  // namespace

std::optional<LawInvarianceWitness> law_invariance_witness(const AcceptanceSet& a, const Market& m,
                                                           int trials, std::uint64_t seed,
                                                           double tol) {
  const AtomSpace space = m.space();
  std::vector<std::optional<LawInvarianceWitness>> found(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(found.size(), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const Payoff x = random_payoff(space, rng, dist::Normal{0.0, 1.0});
    const Payoff xp = permute(x, rng);
    const double rx = risk_measure(a, m, x).value;
    const double rp = risk_measure(a, m, xp).value;
    if (differs(rx, rp, tol)) found[i] = LawInvarianceWitness{x, xp, rx, rp};
  });
  for (auto& w : found) {
    if (w) return w;
  }
  return std::nullopt;
}

namespace {

void require(bool ok, const AcceptanceSet& a, const char* what) {
  if (!ok) throw FlagViolation(a.name() + ": " + what);
}

/// Nondecreasing vectors over the grid {-1, -1 + 1/g, ..., 1}, excluding zero.
void enumerate_sorted(std::size_t n, int grid, std::vector<std::vector<double>>& out) {
  const int levels = 2 * grid + 1;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> v(n);
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<double>(idx[i] - grid) / grid;
      nonzero = nonzero || v[i] != 0.0;
    }
    if (nonzero) out.push_back(std::move(v));
    // next nondecreasing index tuple
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == levels - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < n; ++j) idx[j] = idx[pos - 1];
  }
}

}  // namespace

PointednessReport pointedness_check(const AcceptanceSet& a, AtomSpace space, int trials,
                                    std::uint64_t seed, int grid) {
  const auto& f = a.flags();
  require(f.convex && f.conic && f.monotone && f.law_invariant, a,
          "pointedness check needs a convex, conic, monotone, law-invariant set");
  if (grid < 1) throw InvalidArgument("pointedness grid must be positive");
  const std::size_t n = space.size();

  std::vector<std::vector<double>> candidates;
  // Integer zero-mean two-point payoffs: k atoms at -(n-k), n-k atoms at k.
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> v(n, static_cast<double>(k));
    std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), -static_cast<double>(n - k));
    candidates.push_back(std::move(v));
  }
  const bool exhaustive = n <= 3;
  if (exhaustive) enumerate_sorted(n, grid, candidates);
  const std::size_t fixed = candidates.size();
  const std::size_t total = fixed + static_cast<std::size_t>(std::max(trials, 0));

  struct Sample {
    bool two_sided = false;
    double depth = kPlusInf;
    std::optional<Payoff> z;
  };
  std::vector<Sample> samples(total);
  parallel_for(total, [&](std::size_t i) {
    std::optional<Payoff> z;
    if (i < fixed) {
      z = Payoff(space, candidates[i]);
    } else {
      std::mt19937_64 rng(derive_seed(seed, i));
      Payoff raw = random_payoff(space, rng, dist::Normal{0.0, 1.0});
      // Alternate raw samples with centered ones, the likeliest two-sided candidates.
      if (i % 2 == 0) raw = raw - expectation(raw);
      z = raw;
    }
    auto& s = samples[i];
    if (z->sup_norm() == 0.0) return;
    const Payoff zn = (1.0 / z->sup_norm()) * *z;
    s.two_sided = a.contains(*z) && a.contains(-*z);
    if (a.gauge()) s.depth = std::max((*a.gauge())(zn), (*a.gauge())(-zn));
    s.z = std::move(z);
  });

  PointednessReport report;
  report.exhaustive = exhaustive;
  report.samples = static_cast<int>(total);
  double depth = kPlusInf;
  for (auto& s : samples) {
    depth = std::min(depth, s.depth);
    if (s.two_sided && !report.witness) report.witness = s.z;
  }
  if (a.gauge()) report.min_two_sided_depth = depth;
  report.verdict = report.witness ? Pointedness::NotPointed : Pointedness::Pointed;
  if (report.verdict == Pointedness::NotPointed) {
    std::mt19937_64 rng(derive_seed(seed, total + 1));
    bool match = true;
    for (int i = 0; i < 200; ++i) {
      const Payoff x = random_payoff(space, rng, dist::Normal{0.0, 1.0});
      if (std::abs(expectation(x)) < 1e-9) continue;
      if (a.contains(x) != (expectation(x) >= 0.0)) {
        match = false;
        break;
      }
    }
    report.matches_expectation_set = match;
  }
  return report;
}

namespace {

/// An accepted payoff built from a random draw: for monotone sets, shift up to
/// the acceptance boundary plus random slack (a quarter of the time none).
std::optional<Payoff> draw_accepted(const AcceptanceSet& a, AtomSpace space, std::mt19937_64& rng) {
  const Payoff raw = random_payoff(space, rng, dist::Normal{0.0, 2.0});
  if (a.flags().monotone) {
    const Market cash({Payoff::constant(space, 1.0)}, {1.0});
    const RiskResult r = risk_measure(a, cash, raw, 1e-12);
    if (r.status == RiskStatus::PlusInfinity) return std::nullopt;
    if (r.status == RiskStatus::MinusInfinity) return raw;
    const double slack = std::bernoulli_distribution(0.25)(rng)
                             ? 0.0
                             : std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    Payoff x = raw + (r.value + slack);
    if (!a.contains(x)) return std::nullopt;
    return x;
  }
  if (a.contains(raw)) return raw;
  const Payoff w = a.accepted_witness(space);
  return a.contains(w) ? std::optional<Payoff>(w) : std::nullopt;
}

}  // namespace

ClosureReport conditioning_closure_check(const AcceptanceSet& a, AtomSpace space, int trials,
                                         std::uint64_t seed, double tol) {
  const auto& f = a.flags();
  require(f.convex && f.closed && f.law_invariant, a,
          "conditioning closure needs a convex, closed, law-invariant set");
  struct Trial {
    bool tested = false;
    std::optional<Witness> witness;
  };
  std::vector<Trial> results(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(results.size(), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const auto x = draw_accepted(a, space, rng);
    if (!x) return;
    const Partition g = Partition::random(space.size(), rng);
    const Payoff cx = condition(*x, g);
    results[i].tested = true;
    bool bad = false;
    double lhs = 0.0;
    if (a.gauge()) {
      lhs = (*a.gauge())(cx);
      bad = lhs > tol;
    } else {
      bad = !a.contains(cx);
    }
    if (bad) results[i].witness = Witness{"X accepted but E[X|G] rejected", {*x, cx}, lhs, 0.0};
  });
  ClosureReport report;
  report.trials = trials;
  for (auto& r : results) {
    if (r.tested) ++report.tested;
    if (r.witness) {
      ++report.violations;
      if (!report.witness) report.witness = r.witness;
    }
  }
  return report;
}

MeanCollapseReport expectation_collapse_check(const AcceptanceSet& a, const Market& m, int trials,
                                              std::uint64_t seed, double tol) {
  MeanCollapseReport report;
  const AtomSpace space = m.space();
  report.rho_zero = risk_measure(a, m, Payoff::zero(space)).value;
  if (!(std::abs(report.rho_zero) <= tol)) {
    report.skipped = true;
    report.reason = "rho(0) is not zero";
    return report;
  }
  if (!m.has_risky_payoff()) {
    report.skipped = true;
    report.reason = "market has no risky eligible payoff";
    return report;
  }
  report.witness_found = law_invariance_witness(a, m, trials, seed, tol).has_value();
  if (report.witness_found) {
    report.skipped = true;
    report.reason = "rho is not law invariant";
    return report;
  }
  report.c = -risk_measure(a, m, Payoff::constant(space, 1.0)).value;
  std::vector<double> residual(static_cast<std::size_t>(std::max(trials, 0)), 0.0);
  parallel_for(residual.size(), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed ^ 0x5bd1e995ULL, i));
    const Payoff x = random_payoff(space, rng, dist::Normal{0.0, 1.0});
    residual[i] = std::abs(risk_measure(a, m, x).value + report.c * expectation(x));
  });
  for (double r : residual) report.max_residual = std::max(report.max_residual, r);
  return report;
}

}  // namespace lawprice
