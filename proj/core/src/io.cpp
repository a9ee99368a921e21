#include "lawprice/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "lawprice/error.hpp"

namespace lawprice::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

double get_number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

double get_number_or(const Json& j, const char* key, double fallback) {
  return j.is_object() && j.contains(key) ? get_number(j, key) : fallback;
}

std::string get_string(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ParseError(what + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Payoff parse_payoff(const Json& j, std::optional<AtomSpace> space) {
  std::vector<double> v = number_array(j, "payoff");
  if (v.empty()) throw ParseError("payoff must not be empty");
  if (space) return Payoff(*space, std::move(v));
  return Payoff(std::move(v));
}

Scenario parse_scenario(const Json& j) {
  const Json& nj = field(j, "n");
  if (!nj.is_number_integer() || nj.get<long long>() <= 0) {
    throw ParseError("scenario \"n\" must be a positive integer");
  }
  Scenario s;
  s.space = AtomSpace(static_cast<std::size_t>(nj.get<long long>()));
  const Json& table = field(j, "payoffs");
  if (!table.is_object()) throw ParseError("scenario \"payoffs\" must be an object");
  if (table.empty()) throw ParseError("scenario has no payoffs");
  for (const auto& [name, values] : table.items()) {
    std::vector<double> v = number_array(values, "payoff \"" + name + "\"");
    if (v.size() != s.space.size()) {
      throw SpaceMismatch("payoff \"" + name + "\" has " + std::to_string(v.size()) +
                          " values on a space of " + std::to_string(s.space.size()) + " atoms");
    }
    s.payoffs.emplace_back(name, Payoff(s.space, std::move(v)));
  }
  return s;
}

Payoff read_payoff_csv(std::istream& in) {
  std::vector<double> v;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double x = 0.0;
    bool ok = true;
    try {
      x = std::stod(line, &used);
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok && line.find_first_not_of(" \t", used) != std::string::npos) ok = false;
    if (!ok) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError("CSV line is not a number: " + line);
    }
    first = false;
    v.push_back(x);
  }
  if (v.empty()) throw ParseError("CSV holds no values");
  return Payoff(std::move(v));
}

void write_payoff_csv(std::ostream& out, const Payoff& x) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (double v : x.values()) os << v << '\n';
  out << os.str();
}

Distortion parse_distortion(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "identity") return Distortion::identity();
    if (s == "worst_case") return Distortion::worst_case();
    throw ParseError("unknown distortion \"" + s + "\"");
  }
  const std::string type = get_string(j, "type");
  if (type == "identity") return Distortion::identity();
  if (type == "worst_case") return Distortion::worst_case();
  if (type == "power") return Distortion::power(get_number(j, "gamma"));
  if (type == "expected_shortfall") return Distortion::expected_shortfall(get_number(j, "beta"));
  if (type == "tabulated") {
    const Json& pts = field(j, "points");
    if (!pts.is_array()) throw ParseError("tabulated distortion needs a \"points\" array");
    std::vector<std::pair<double, double>> points;
    for (const auto& p : pts) {
      const auto uv = number_array(p, "distortion point");
      if (uv.size() != 2) throw ParseError("distortion points are [u, g] pairs");
      points.emplace_back(uv[0], uv[1]);
    }
    return Distortion::tabulated(std::move(points));
  }
  throw ParseError("unknown distortion type \"" + type + "\"");
}

FunctionalFlags parse_flags(const Json& j, FunctionalFlags f) {
  if (!j.is_object()) throw ParseError("\"flags\" must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_boolean()) throw ParseError("flag \"" + key + "\" must be a boolean");
    const bool b = value.get<bool>();
    if (key == "convex") f.convex = b;
    else if (key == "sublinear") f.sublinear = b;
    else if (key == "monotone") f.monotone = b;
    else if (key == "law_invariant") f.law_invariant = b;
    else if (key == "cash_additive") f.cash_additive = b;
    else if (key == "comonotonic") f.comonotonic = b;
    else throw ParseError("unknown flag \"" + key + "\"");
  }
  return f;
}

namespace {

PricingFunctional base_functional(const Json& j) {
  const std::string type = get_string(j, "type");
  if (type == "expectation") return catalog::expectation(get_number_or(j, "c", 1.0));
  if (type == "choquet") return catalog::choquet(parse_distortion(field(j, "distortion")));
  if (type == "expected_shortfall") return catalog::expected_shortfall(get_number(j, "beta"));
  if (type == "worst_case") return catalog::worst_case();
  if (type == "entropic") return catalog::entropic(get_number_or(j, "theta", 1.0));
  if (type == "gate") return catalog::gate();
  if (type == "floor_gauge") return catalog::floor_gauge();
  if (type == "mean_abs_dev") return catalog::mean_abs_dev(get_number(j, "lambda"));
  if (type == "representation") {
    if (j.contains("bound")) return catalog::representation(BoundedDensities{get_number(j, "bound")});
    const Json& dens = field(j, "densities");
    if (!dens.is_array()) throw ParseError("\"densities\" must be an array of payoffs");
    std::vector<Payoff> d;
    for (const auto& y : dens) d.push_back(parse_payoff(y));
    return catalog::representation(std::move(d));
  }
  throw ParseError("unknown functional type \"" + type + "\"");
}

}  // namespace

PricingFunctional parse_functional(const Json& j) {
  PricingFunctional f = base_functional(j);
  if (j.contains("flags")) f = f.with_flags(parse_flags(j.at("flags"), f.flags()));
  if (j.contains("name")) f = f.with_name(get_string(j, "name"));
  return f;
}

Market parse_market(const Json& j) {
  const Json& basis = field(j, "basis");
  if (!basis.is_array()) throw ParseError("market \"basis\" must be an array of payoffs");
  std::vector<Payoff> b;
  for (const auto& p : basis) b.push_back(parse_payoff(p));
  std::vector<double> prices = number_array(field(j, "prices"), "market \"prices\"");
  std::size_t u = 0;
  if (j.contains("numeraire_index")) {
    const Json& ui = j.at("numeraire_index");
    if (!ui.is_number_integer() || ui.get<long long>() < 0) {
      throw ParseError("\"numeraire_index\" must be a nonnegative integer");
    }
    u = static_cast<std::size_t>(ui.get<long long>());
  }
  for (const auto& p : b) {
    if (p.size() != b.front().size()) throw SpaceMismatch("market basis payoffs differ in length");
  }
  return Market(std::move(b), std::move(prices), u);
}

AcceptanceSet parse_acceptance(const Json& j) {
  const std::string type = get_string(j, "type");
  if (type == "expectation") return acceptance::expectation();
  if (type == "expected_shortfall") return acceptance::expected_shortfall(get_number(j, "beta"));
  if (type == "risk_free") return acceptance::risk_free();
  if (type == "bounded_shortfall") return acceptance::bounded_shortfall();
  if (type == "atom_indexed") {
    const double atom = get_number_or(j, "atom", 0.0);
    if (atom < 0.0 || atom != std::floor(atom)) throw ParseError("\"atom\" must be a nonnegative integer");
    return acceptance::atom_indexed(static_cast<std::size_t>(atom));
  }
  if (type == "functional") {
    AcceptanceFlags f;
    const Json& flags = field(j, "flags");
    if (!flags.is_object()) throw ParseError("acceptance \"flags\" must be an object");
    for (const auto& [key, value] : flags.items()) {
      if (!value.is_boolean()) throw ParseError("flag \"" + key + "\" must be a boolean");
      const bool b = value.get<bool>();
      if (key == "convex") f.convex = b;
      else if (key == "conic") f.conic = b;
      else if (key == "monotone") f.monotone = b;
      else if (key == "law_invariant") f.law_invariant = b;
      else if (key == "closed") f.closed = b;
      else throw ParseError("unknown acceptance flag \"" + key + "\"");
    }
    return acceptance::from_functional(parse_functional(field(j, "functional")), f);
  }
  throw ParseError("unknown acceptance type \"" + type + "\"");
}

YoungFunction parse_young(const Json& j) {
  const std::string type = get_string(j, "type");
  if (type == "power") return young::power(get_number(j, "p"));
  if (type == "exp") return young::exponential();
  if (type == "linf") return young::linf();
  throw ParseError("unknown Young function type \"" + type + "\"");
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Json to_json(const Payoff& x) {
  Json a = Json::array();
  for (double v : x.values()) a.push_back(v);
  return a;
}

Json to_json(const QuantileFn& q) {
  Json a = Json::array();
  for (double v : q.sorted_values()) a.push_back(v);
  return a;
}

Json to_json(const FunctionalFlags& f) {
  return {{"convex", f.convex},           {"sublinear", f.sublinear},
          {"monotone", f.monotone},       {"law_invariant", f.law_invariant},
          {"cash_additive", f.cash_additive}, {"comonotonic", f.comonotonic}};
}

Json to_json(const Witness& w) {
  Json p = Json::array();
  for (const auto& x : w.payoffs) p.push_back(to_json(x));
  return {{"description", w.description}, {"payoffs", p}, {"lhs", number(w.lhs)},
          {"rhs", number(w.rhs)}};
}

namespace {

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? to_json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const FrictionReport& r) {
  return {{"payoff", r.payoff_id},
          {"spread", number(r.spread)},
          {"frictionless", r.frictionless},
          {"strongly_frictionless", r.strongly_frictionless},
          {"m_grid", r.m_grid_used},
          {"tolerance", r.tolerance}};
}

Json to_json(const CollapseReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"c", r.c ? number(*r.c) : Json(nullptr)},
          {"objective", r.objective},
          {"certificate", r.certificate},
          {"best_witness", optional_json(r.best_witness)},
          {"best_objective", number(r.best_objective)},
          {"best_spread", number(r.best_spread)},
          {"best_mean", number(r.best_mean)},
          {"min_objective_nonzero_mean", number(r.min_objective_nonzero_mean)},
          {"min_objective_zero_mean", number(r.min_objective_zero_mean)},
          {"linearity_residual", number(r.linearity_residual)},
          {"tolerance", r.tolerance},
          {"evaluations", r.evaluations}};
}

Json to_json(const RecessionResult& r) {
  Json ratios = Json::array();
  for (double v : r.ratios) ratios.push_back(number(v));
  return {{"value", number(r.value)}, {"stale", r.stale}, {"lambdas", r.lambdas}, {"ratios", ratios}};
}

Json to_json(const RiskResult& r) {
  return {{"rho", number(r.value)},
          {"status", to_string(r.status)},
          {"coefficients", r.coefficients},
          {"membership_calls", r.membership_calls},
          {"expansions", r.expansions},
          {"expansion_budget", r.expansion_budget}};
}

Json to_json(const AuditReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"flag", c.flag},
                      {"declared", c.declared},
                      {"falsified", c.falsified},
                      {"witness", optional_json(c.witness)}});
  }
  return {{"functional", r.functional}, {"consistent", r.consistent()}, {"checks", checks}};
}

Json to_json(const SchurReport& r) {
  return {{"trials", r.trials},
          {"conditioning_violations", r.conditioning_violations},
          {"order_violations", r.order_violations},
          {"max_excess", number(r.max_excess)},
          {"passed", r.passed()},
          {"witness", optional_json(r.witness)}};
}

Json to_json(const PointednessReport& r) {
  return {{"verdict", r.verdict == Pointedness::Pointed ? "POINTED" : "NOT_POINTED"},
          {"witness", optional_json(r.witness)},
          {"min_two_sided_depth",
           r.min_two_sided_depth ? number(*r.min_two_sided_depth) : Json(nullptr)},
          {"exhaustive", r.exhaustive},
          {"samples", r.samples},
          {"matches_expectation_set",
           r.matches_expectation_set ? Json(*r.matches_expectation_set) : Json(nullptr)}};
}

Json to_json(const ClosureReport& r) {
  return {{"trials", r.trials},
          {"tested", r.tested},
          {"violations", r.violations},
          {"witness", optional_json(r.witness)}};
}

Json to_json(const MeanCollapseReport& r) {
  return {{"skipped", r.skipped},
          {"reason", r.reason},
          {"rho_zero", number(r.rho_zero)},
          {"c", number(r.c)},
          {"max_residual", number(r.max_residual)},
          {"law_invariance_witness_found", r.witness_found}};
}

Json to_json(const NormCheck& r) {
  return {{"property", r.property},
          {"samples", r.samples},
          {"max_violation", number(r.max_violation)},
          {"passed", r.passed}};
}

Json to_json(const Delta2Report& r) {
  Json trace = Json::array();
  for (const auto& row : r.trace) trace.push_back({{"t", row.t}, {"ratio", number(row.ratio)}});
  return {{"verdict", r.holds ? "HOLDS" : "FAILS"},
          {"k", r.holds ? Json(r.k) : Json(nullptr)},
          {"trace", trace}};
}

std::string landscape_csv(const std::vector<LandscapeRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(17) << "fraction_low,mean,spread\n";
  for (const auto& r : rows) os << r.fraction_low << ',' << r.mean << ',' << r.spread << '\n';
  return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidArgument("cannot move report into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace lawprice::io
