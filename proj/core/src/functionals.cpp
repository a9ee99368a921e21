#include "lawprice/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lawprice/error.hpp"
#include "lawprice/parallel.hpp"
#include "lawprice/quantile.hpp"

namespace lawprice {

PricingFunctional::PricingFunctional(std::string name, FunctionalFlags flags, Evaluator evaluator,
                                     std::optional<AtomSpace> space, Conjugate conjugate)
    : name_(std::move(name)),
      flags_(flags),
      evaluator_(std::move(evaluator)),
      space_(space),
      conjugate_(std::move(conjugate)) {
  if (!evaluator_) throw InvalidArgument("pricing functional needs an evaluator");
}

double PricingFunctional::operator()(const Payoff& x) const {
  if (space_ && *space_ != x.space()) {
    throw SpaceMismatch(name_ + " is defined on " + std::to_string(space_->size()) +
                        " atoms, payoff has " + std::to_string(x.size()));
  }
  const double v = evaluator_(x);
  if (std::isnan(v) || v == -kPlusInf) {
    throw std::logic_error(name_ + " evaluated to " + std::to_string(v) +
                           "; pricing functionals take values in R u {+inf}");
  }
  return v;
}

PricingFunctional PricingFunctional::with_flags(FunctionalFlags flags) const {
  PricingFunctional copy = *this;
  copy.flags_ = flags;
  return copy;
}

PricingFunctional PricingFunctional::with_name(std::string name) const {
  PricingFunctional copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<double> sorted_values(const Payoff& x) {
  std::vector<double> v(x.values().begin(), x.values().end());
  std::sort(v.begin(), v.end());
  return v;
}

double bounded_density_eval(double bound, const Payoff& x) {
  if (!(bound >= 1.0)) {
    throw InvalidArgument("no density is bounded by " + num(bound) + " < 1");
  }
  const auto v = sorted_values(x);
  const double n = static_cast<double>(v.size());
  // Mass still to place, in units of one atom (total n).
  double remaining = n;
  double total = 0.0;
  for (std::size_t i = v.size(); i-- > 0 && remaining > 0.0;) {
    const double density = std::min(bound, remaining);
    total += v[i] * density;
    remaining -= density;
  }
  return total / n;
}

bool is_density_bounded_by(const Payoff& y, double bound, double tol) {
  if (std::abs(expectation(y) - 1.0) > tol) return false;
  return y.min() >= -tol && y.max() <= bound + tol;
}

}  // namespace

double representation_eval(const RepresentationSet& d, const Payoff& x) {
  return std::visit(
      [&](const auto& set) -> double {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, BoundedDensities>) {
          return bounded_density_eval(set.bound, x);
        } else {
          if (set.empty()) throw InvalidArgument("representation set is empty");
          double best = -kPlusInf;
          for (const auto& y : set) best = std::max(best, hl_product(x, y));
          return best;
        }
      },
      d);
}

namespace catalog {

PricingFunctional expectation(double c) {
  FunctionalFlags flags{true, true, c >= 0.0, true, c == 1.0, true};
  return PricingFunctional(
      "expectation(" + num(c) + ")", flags, [c](const Payoff& x) { return c * expectation(x); },
      std::nullopt, [c](const Payoff& y) {
        for (double v : y.values()) {
          if (std::abs(v - c) > 1e-12) return kPlusInf;
        }
        return 0.0;
      });
}

PricingFunctional choquet(const Distortion& g) {
  const bool concave = g.is_concave();
  FunctionalFlags flags{concave, concave, true, true, true, true};
  return PricingFunctional("choquet[" + g.name() + "]", flags,
                           [g](const Payoff& x) { return choquet_eval(g, x); });
}

PricingFunctional expected_shortfall(double beta) {
  const auto g = Distortion::expected_shortfall(beta);
  const double bound = 1.0 / (1.0 - beta);
  FunctionalFlags flags{true, true, true, true, true, true};
  return PricingFunctional(
      "expected_shortfall(" + num(beta) + ")", flags,
      [g](const Payoff& x) { return choquet_eval(g, x); }, std::nullopt,
      [bound](const Payoff& y) { return is_density_bounded_by(y, bound, 1e-12) ? 0.0 : kPlusInf; });
}

PricingFunctional worst_case() {
  FunctionalFlags flags{true, true, true, true, true, true};
  return PricingFunctional(
      "worst_case", flags, [](const Payoff& x) { return x.max(); }, std::nullopt,
      [](const Payoff& y) {
        return is_density_bounded_by(y, kPlusInf, 1e-12) ? 0.0 : kPlusInf;
      });
}

PricingFunctional entropic(double theta) {
  if (!(theta > 0.0)) throw InvalidArgument("entropic functional needs theta > 0");
  FunctionalFlags flags{true, false, true, true, true, false};
  return PricingFunctional("entropic(" + num(theta) + ")", flags, [theta](const Payoff& x) {
    const double top = x.max();
    double sum = 0.0;
    for (double v : x.values()) sum += std::exp(theta * (v - top));
    return top + std::log(sum / static_cast<double>(x.size())) / theta;
  });
}

PricingFunctional gate() {
  FunctionalFlags flags{true, true, true, true, false, false};
  return PricingFunctional("gate", flags, [](const Payoff& x) {
    const double m = expectation(x);
    return m >= 0.0 ? m : 0.0;
  });
}

PricingFunctional floor_gauge() {
  FunctionalFlags flags{true, false, false, true, false, false};
  return PricingFunctional("floor_gauge", flags, [](const Payoff& x) { return -1.0 - x.min(); });
}

PricingFunctional mean_abs_dev(double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("mean_abs_dev needs lambda >= 0");
  FunctionalFlags flags{true, true, lambda <= 0.5, true, true, lambda == 0.0};
  return PricingFunctional("mean_abs_dev(" + num(lambda) + ")", flags, [lambda](const Payoff& x) {
    const double m = expectation(x);
    double dev = 0.0;
    for (double v : x.values()) dev += std::abs(v - m);
    return m + lambda * dev / static_cast<double>(x.size());
  });
}

PricingFunctional representation(RepresentationSet d) {
  FunctionalFlags flags{true, true, true, true, true, false};
  std::optional<AtomSpace> space;
  std::string name;
  if (const auto* bounded = std::get_if<BoundedDensities>(&d)) {
    if (!(bounded->bound >= 1.0)) throw InvalidArgument("density bound must be at least 1");
    flags.comonotonic = true;
    name = "representation(densities<=" + num(bounded->bound) + ")";
  } else {
    const auto& list = std::get<std::vector<Payoff>>(d);
    if (list.empty()) throw InvalidArgument("representation set is empty");
    space = list.front().space();
    for (const auto& y : list) {
      require_same_space(list.front(), y);
      if (y.min() < 0.0) flags.monotone = false;
      if (std::abs(expectation(y) - 1.0) > 1e-12) flags.cash_additive = false;
    }
    name = "representation(" + std::to_string(list.size()) + " densities)";
  }
  return PricingFunctional(std::move(name), flags,
                           [d = std::move(d)](const Payoff& x) { return representation_eval(d, x); },
                           space);
}

}  // namespace catalog

RecessionResult recession(const PricingFunctional& f, const Payoff& x, double lambda_max,
                          int grid_size, double tol) {
  if (!f.flags().convex) throw FlagViolation("recession grid needs a convex functional");
  if (!(lambda_max >= 1.0)) throw InvalidArgument("lambda_max must be at least 1");
  if (grid_size < 2) throw InvalidArgument("recession grid needs at least two points");
  const double at_zero = f(Payoff::zero(x.space()));
  if (at_zero == kPlusInf) throw InvalidArgument("recession needs pi(0) finite");
  RecessionResult out;
  out.at_zero = at_zero;
  out.value = -kPlusInf;
  const double ratio = std::pow(lambda_max, 1.0 / (grid_size - 1));
  for (int k = 0; k < grid_size; ++k) {
    const double lambda = (k == grid_size - 1) ? lambda_max : std::pow(ratio, k);
    const double v = f(lambda * x);
    const double r = v == kPlusInf ? kPlusInf : (v - at_zero) / lambda;
    out.lambdas.push_back(lambda);
    out.ratios.push_back(r);
    out.value = std::max(out.value, r);
  }
  const double last = out.ratios.back();
  const double before = out.ratios[out.ratios.size() - 2];
  if (last == kPlusInf || before == kPlusInf) {
    out.stale = last != before;
  } else {
    out.stale = std::abs(last - before) > tol * std::max(1.0, std::abs(last));
  }
  return out;
}

double conjugate_lower_bound(const PricingFunctional& f, const Payoff& y,
                             const PayoffSampler& sampler, int budget, std::uint64_t seed) {
  if (!f.flags().law_invariant) {
    throw FlagViolation("quantile form of the conjugate needs a law-invariant functional");
  }
  std::vector<double> best(static_cast<std::size_t>(std::max(budget, 0)), -kPlusInf);
  parallel_for(best.size(), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const Payoff x = sampler(rng);
    const double price = f(x);
    if (price != kPlusInf) best[i] = hl_product(x, y) - price;
  });
  double out = -kPlusInf;
  for (double b : best) out = std::max(out, b);
  return out;
}

namespace {

constexpr std::size_t kMinAuditAtoms = 2;
constexpr std::size_t kMaxAuditAtoms = 8;

AtomSpace draw_space(const PricingFunctional& f, std::mt19937_64& rng) {
  if (f.space()) return *f.space();
  return AtomSpace(std::uniform_int_distribution<std::size_t>(kMinAuditAtoms, kMaxAuditAtoms)(rng));
}

Payoff draw_payoff(AtomSpace space, std::mt19937_64& rng) {
  return random_payoff(space, rng, dist::Normal{0.0, 2.0});
}

/// Comonotone pair: independent samples, jointly sorted, then permuted together.
std::pair<Payoff, Payoff> draw_comonotone(AtomSpace space, std::mt19937_64& rng) {
  auto xa = draw_payoff(space, rng);
  auto xb = draw_payoff(space, rng);
  std::vector<double> va(xa.values().begin(), xa.values().end());
  std::vector<double> vb(xb.values().begin(), xb.values().end());
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  std::vector<std::size_t> perm(space.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> pa(space.size());
  std::vector<double> pb(space.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pa[perm[i]] = va[i];
    pb[perm[i]] = vb[i];
  }
  return {Payoff(space, std::move(pa)), Payoff(space, std::move(pb))};
}

bool close(double a, double b, double tol) {
  if (a == kPlusInf || b == kPlusInf) return a == b;
  return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

bool leq(double a, double b, double tol) {
  if (b == kPlusInf) return true;
  if (a == kPlusInf) return false;
  return a <= b + tol * (1.0 + std::abs(a) + std::abs(b));
}

/// Doubly-stochastic smoothing of X: a payoff that X dominates in convex order.
Payoff smooth(const Payoff& x, std::mt19937_64& rng) {
  const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const Payoff shuffled = permute(x, rng);
  return w * x + (1.0 - w) * shuffled;
}

enum FlagIndex { kConvex, kSublinear, kMonotone, kLawInvariant, kCashAdditive, kComonotonic, kFlagCount };

constexpr const char* kFlagNames[kFlagCount] = {"convex",        "sublinear",    "monotone",
                                                "law_invariant", "cash_additive", "comonotonic"};

bool declared(const FunctionalFlags& f, int i) {
  switch (i) {
    case kConvex: return f.convex;
    case kSublinear: return f.sublinear;
    case kMonotone: return f.monotone;
    case kLawInvariant: return f.law_invariant;
    case kCashAdditive: return f.cash_additive;
    default: return f.comonotonic;
  }
}

}  // namespace

SchurReport schur_convexity_report(const PricingFunctional& f, int trials, std::uint64_t seed,
                                   double tol) {
  if (!f.flags().convex || !f.flags().law_invariant) {
    throw FlagViolation(f.name() + ": Schur-convexity report needs convex and law-invariant flags");
  }
  struct Trial {
    double cond_excess = -kPlusInf;
    double order_excess = -kPlusInf;
    std::optional<Witness> cond_witness;
    std::optional<Witness> order_witness;
  };
  std::vector<Trial> results(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(results.size(), [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    const AtomSpace space = draw_space(f, rng);
    const Payoff x = draw_payoff(space, rng);
    const Partition g = Partition::random(space.size(), rng);
    const Payoff cx = condition(x, g);
    const double px = f(x);
    const double pc = f(cx);
    auto& r = results[t];
    r.cond_excess = (pc == kPlusInf && px != kPlusInf) ? kPlusInf : pc - px;
    if (!leq(pc, px, tol)) {
      r.cond_witness = Witness{"pi(E[X|G]) > pi(X)", {x, cx}, pc, px};
    }
    const Payoff y = smooth(x, rng);
    if (convex_order_geq(x, y, 1e-12 * (1.0 + x.sup_norm()))) {
      const double py = f(y);
      r.order_excess = (py == kPlusInf && px != kPlusInf) ? kPlusInf : py - px;
      if (!leq(py, px, tol)) {
        r.order_witness = Witness{"X >=_cx Y but pi(X) < pi(Y)", {x, y}, py, px};
      }
    }
  });
  SchurReport report;
  report.trials = trials;
  report.max_excess = -kPlusInf;
  for (const auto& r : results) {
    report.max_excess = std::max({report.max_excess, r.cond_excess, r.order_excess});
    if (r.cond_witness) {
      ++report.conditioning_violations;
      if (!report.witness) report.witness = r.cond_witness;
    }
    if (r.order_witness) {
      ++report.order_violations;
      if (!report.witness) report.witness = r.order_witness;
    }
  }
  return report;
}

bool AuditReport::consistent() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const FlagCheck& c) { return c.declared && c.falsified; });
}

AuditReport flag_audit(const PricingFunctional& f, int trials, std::uint64_t seed, double tol) {
  using TrialWitnesses = std::array<std::optional<Witness>, kFlagCount>;
  std::vector<TrialWitnesses> results(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(results.size(), [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    auto& w = results[t];
    const AtomSpace space = draw_space(f, rng);
    const Payoff x = draw_payoff(space, rng);
    const Payoff y = draw_payoff(space, rng);
    const double px = f(x);
    const double py = f(y);

    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Payoff mix = lambda * x + (1.0 - lambda) * y;
    const double pmix = f(mix);
    const double bound = (px == kPlusInf || py == kPlusInf)
                             ? kPlusInf
                             : lambda * px + (1.0 - lambda) * py;
    if (!leq(pmix, bound, tol)) {
      w[kConvex] = Witness{"convexity fails at lambda=" + num(lambda), {x, y}, pmix, bound};
    }

    // Positive homogeneity on top of convexity; lambda=2 is always probed.
    for (double s : {2.0, std::uniform_real_distribution<double>(0.05, 5.0)(rng)}) {
      const double ps = f(s * x);
      const double expect = ext_mul(s, px);
      if (!close(ps, expect, tol)) {
        w[kSublinear] = Witness{"pi(" + num(s) + " X) != " + num(s) + " pi(X)", {x}, ps, expect};
        break;
      }
    }
    if (!w[kSublinear] && w[kConvex]) w[kSublinear] = w[kConvex];

    std::vector<double> bump(space.size());
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution coin(0.5);
    for (double& b : bump) b = coin(rng) ? expo(rng) : 0.0;
    const Payoff up = x + Payoff(space, bump);
    const double pup = f(up);
    if (!leq(px, pup, tol)) {
      w[kMonotone] = Witness{"X' >= X but pi(X') < pi(X)", {x, up}, pup, px};
    }

    const Payoff perm = permute(x, rng);
    const double pperm = f(perm);
    if (!close(px, pperm, tol)) {
      w[kLawInvariant] = Witness{"X' ~ X but pi(X') != pi(X)", {x, perm}, pperm, px};
    }

    const double m = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    const double pshift = f(x + m);
    const double shifted = px == kPlusInf ? kPlusInf : px + m;
    if (!close(pshift, shifted, tol)) {
      w[kCashAdditive] = Witness{"pi(X + " + num(m) + ") != pi(X) + " + num(m), {x}, pshift, shifted};
    }

    const auto [ca, cb] = draw_comonotone(space, rng);
    const double pa = f(ca);
    const double pb = f(cb);
    const double psum = f(ca + cb);
    const double added = (pa == kPlusInf || pb == kPlusInf) ? kPlusInf : pa + pb;
    if (!close(psum, added, tol)) {
      w[kComonotonic] = Witness{"comonotone X, Y with pi(X+Y) != pi(X) + pi(Y)", {ca, cb}, psum, added};
    }
  });

  AuditReport report;
  report.functional = f.name();
  for (int i = 0; i < kFlagCount; ++i) {
    FlagCheck check;
    check.flag = kFlagNames[i];
    check.declared = declared(f.flags(), i);
    for (const auto& r : results) {
      if (r[static_cast<std::size_t>(i)]) {
        check.falsified = true;
        check.witness = r[static_cast<std::size_t>(i)];
        break;
      }
    }
    report.checks.push_back(std::move(check));
  }
  return report;
}

}  // namespace lawprice
