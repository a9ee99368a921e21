#include "lawprice/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lawprice/error.hpp"
#include "lawprice/parallel.hpp"

namespace lawprice {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

YoungFunction::YoungFunction(std::string name, std::function<double(double)> phi, bool finite)
    : name_(std::move(name)), phi_(std::move(phi)), finite_(finite) {
  if (!phi_) throw InvalidArgument("Young function " + name_ + " has no body");
  if (phi_(0.0) != 0.0) throw InvalidArgument("Young function " + name_ + ": Phi(0) must be 0");
  bool nonzero = false;
  double prev = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double t = 0.05 * i;
    const double v = phi_(t);
    if (std::isnan(v) || v < 0.0) throw InvalidArgument(name_ + ": Phi must map into [0, inf]");
    if (v < prev) throw InvalidArgument(name_ + ": Phi must be nondecreasing");
    if (finite_ && std::isinf(v)) throw InvalidArgument(name_ + ": declared finite but Phi = inf");
    // Midpoint convexity where both neighbours are finite.
    const double lo = phi_(t - 0.05);
    const double hi = phi_(t + 0.05);
    if (std::isfinite(hi) && v > 0.5 * (lo + hi) + 1e-9 * (1.0 + std::abs(v))) {
      throw InvalidArgument(name_ + ": Phi must be convex");
    }
    nonzero = nonzero || v > 0.0;
    prev = v;
  }
  if (!nonzero) throw InvalidArgument(name_ + ": Phi must not vanish identically");
}

namespace young {

YoungFunction power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("power Young function needs p >= 1");
  std::ostringstream name;
  name << "power(" << p << ")";
  return YoungFunction(name.str(), [p](double t) { return std::pow(t, p); }, true);
}

YoungFunction exponential() {
  return YoungFunction("exp", [](double t) { return std::expm1(t); }, true);
}

YoungFunction linf() {
  return YoungFunction("linf", [](double t) { return t <= 1.0 ? 0.0 : kInf; }, false);
}

}  // namespace young

namespace {

double modular(const YoungFunction& phi, const Payoff& x, double k) {
  double sum = 0.0;
  for (double v : x.values()) {
    sum += phi(std::abs(v) / k);
    if (std::isinf(sum)) return kInf;
  }
  return sum / static_cast<double>(x.size());
}

}  // namespace

NormResult luxemburg_norm(const YoungFunction& phi, const Payoff& x, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("luxemburg_norm needs tol > 0");
  const double m = x.sup_norm();
  if (m == 0.0) return {0.0, 0};
  // Lower bracket: a single atom |x_i| = m contributes Phi(m/k)/n, so the
  // modular exceeds 1 whenever Phi(m/k) > n.
  const double n = static_cast<double>(x.size());
  double t_star = 1.0;
  for (int i = 0; i < 2000 && !(phi(t_star) > n); ++i) t_star *= 2.0;
  if (!(phi(t_star) > n)) throw SolverError(phi.name() + ": Phi never exceeds the atom count");
  double lo = m / t_star;
  // shrink t_star towards the smallest doubling step for a tighter bracket
  double hi = std::max(lo, m);
  int guard = 0;
  while (modular(phi, x, hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2000) throw SolverError(phi.name() + ": no upper bracket for the norm");
  }
  while (!(modular(phi, x, lo) > 1.0) && lo > 0.0) lo *= 0.5;

  NormResult out;
  double m_lo = modular(phi, x, lo);
  double m_hi = modular(phi, x, hi);
  while (hi - lo > tol * std::max(1.0, hi) && out.iterations < 4000) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double m_mid = modular(phi, x, mid);
    // The modular is nonincreasing in k.
    if (m_mid > m_lo || m_mid < m_hi) {
      std::ostringstream os;
      os << phi.name() << ": modular not monotone in k near " << mid << " (values " << m_lo
         << ", " << m_mid << ", " << m_hi << ")";
      throw SolverError(os.str());
    }
    if (m_mid > 1.0) {
      lo = mid;
      m_lo = m_mid;
    } else {
      hi = mid;
      m_hi = m_mid;
    }
    ++out.iterations;
  }
  out.value = hi;
  return out;
}

std::vector<NormCheck> norm_order_check(const YoungFunction& phi, int trials, std::uint64_t seed,
                                        double tol) {
  struct Row {
    double homog = 0.0;
    double triangle = 0.0;
    double monotone = 0.0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(rows.size(), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const AtomSpace space(n);
    const Payoff x = random_payoff(space, rng, dist::Normal{0.0, 2.0});
    const Payoff y = random_payoff(space, rng, dist::Normal{0.0, 2.0});
    const double c = std::uniform_real_distribution<double>(-4.0, 4.0)(rng);
    const double nx = luxemburg(phi, x);
    const double ny = luxemburg(phi, y);
    Row& r = rows[i];
    r.homog = std::abs(luxemburg(phi, c * x) - std::abs(c) * nx) / (1.0 + std::abs(c) * nx);
    r.triangle = std::max(0.0, luxemburg(phi, x + y) - nx - ny) / (1.0 + nx + ny);
    // |Z| <= |X| pointwise: shrink each atom by a random factor in [0, 1].
    std::vector<double> z(n);
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = x[j] * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    r.monotone = std::max(0.0, luxemburg(phi, Payoff(space, z)) - nx) / (1.0 + nx);
  });
  std::vector<NormCheck> out{{"homogeneity", trials, 0.0, true},
                             {"triangle", trials, 0.0, true},
                             {"monotonicity", trials, 0.0, true}};
  for (const auto& r : rows) {
    out[0].max_violation = std::max(out[0].max_violation, r.homog);
    out[1].max_violation = std::max(out[1].max_violation, r.triangle);
    out[2].max_violation = std::max(out[2].max_violation, r.monotone);
  }
  for (auto& c : out) c.passed = c.max_violation <= tol;
  return out;
}

Delta2Report delta2_check(const YoungFunction& phi, double t_min, double t_max, int grid_size) {
  if (!phi.finite()) throw InvalidArgument("Δ₂ undefined for nonfinite Φ (" + phi.name() + ")");
  if (!(t_min > 0.0) || !(t_max > t_min) || grid_size < 4) {
    throw InvalidArgument("delta2_check needs 0 < t_min < t_max and grid_size >= 4");
  }
  Delta2Report report;
  const double ratio = std::pow(t_max / t_min, 1.0 / (grid_size - 1));
  for (int i = 0; i < grid_size; ++i) {
    const double t = i + 1 == grid_size ? t_max : t_min * std::pow(ratio, i);
    const double a = phi(t);
    const double b = phi(2.0 * t);
    if (a > 0.0) report.trace.push_back({t, b / a});
  }
  if (report.trace.size() < 4) throw InvalidArgument(phi.name() + ": Phi vanishes on most of the grid");
  // Fails if the ratio overflows or is strictly increasing on the tail quarter
  // with a net rise of more than 1.
  const std::size_t tail = report.trace.size() - report.trace.size() / 4;
  bool growing = true;
  for (std::size_t i = tail; i < report.trace.size(); ++i) {
    if (report.trace[i].ratio <= report.trace[i - 1].ratio) growing = false;
  }
  const double rise = report.trace.back().ratio - report.trace[tail - 1].ratio;
  const bool overflow = std::any_of(report.trace.begin(), report.trace.end(),
                                    [](const Delta2Row& r) { return !std::isfinite(r.ratio); });
  report.holds = !overflow && !(growing && rise > 1.0);
  if (report.holds) {
    for (const auto& r : report.trace) report.k = std::max(report.k, r.ratio);
  }
  return report;
}

bool in_orlicz_heart(const YoungFunction& phi, const Payoff& x) {
  if (phi.finite()) return true;
  // E[Phi(c|X|)] < inf for all c > 0: test c large enough to push any nonzero
  // atom past every finite region in the validated domain.
  if (x.sup_norm() == 0.0) return true;
  for (double c : {1.0, 1e3, 1e6, 1e12, 1e300 / std::max(1.0, x.sup_norm())}) {
    for (double v : x.values()) {
      if (std::isinf(phi(c * std::abs(v)))) return false;
    }
  }
  return true;
}

}  // namespace lawprice
