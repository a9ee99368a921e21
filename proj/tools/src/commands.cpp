#include "lawprice_cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "lawprice/capital.hpp"
#include "lawprice/error.hpp"
#include "lawprice/friction.hpp"
#include "lawprice/functionals.hpp"
#include "lawprice/io.hpp"
#include "lawprice/orlicz.hpp"

namespace lawprice::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// The loaded config plus everything it references, hashed together.
struct Loaded {
  Json config;
  fs::path base_dir;
  std::string hash;
  std::optional<io::Scenario> scenario;
};

Loaded load(const RunConfig& rc) {
  Loaded l;
  std::string bytes = read_bytes(rc.config_path);
  l.config = io::parse_json(bytes);
  if (!l.config.is_object()) throw ParseError("config must be a JSON object");
  l.base_dir = rc.config_path.parent_path();
  if (l.config.contains("scenario")) {
    const Json& s = l.config.at("scenario");
    if (s.is_string()) {
      const fs::path p = l.base_dir / s.get<std::string>();
      const std::string sb = read_bytes(p);
      bytes += '\0';
      bytes += sb;
      l.scenario = io::parse_scenario(io::parse_json(sb));
    } else {
      l.scenario = io::parse_scenario(s);
    }
  }
  l.hash = io::fnv1a_hex(bytes);
  return l;
}

const io::Scenario& need_scenario(const Loaded& l) {
  if (!l.scenario) throw ParseError("config has no \"scenario\"");
  return *l.scenario;
}

const Json& section(const Json& config, const char* key) {
  static const Json empty = Json::object();
  if (!config.contains(key)) return empty;
  const Json& s = config.at(key);
  if (!s.is_object()) throw ParseError(std::string("\"") + key + "\" must be an object");
  return s;
}

int int_option(const Json& s, const char* key, int fallback) {
  if (!s.contains(key)) return fallback;
  const Json& v = s.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1000000) {
    throw ParseError(std::string("\"") + key + "\" must be an integer in [0, 1e6]");
  }
  return static_cast<int>(v.get<long long>());
}

double number_option(const Json& s, const char* key, double fallback) {
  if (!s.contains(key)) return fallback;
  if (!s.at(key).is_number()) throw ParseError(std::string("\"") + key + "\" must be a number");
  return s.at(key).get<double>();
}

std::vector<PricingFunctional> functionals(const Json& config) {
  std::vector<PricingFunctional> out;
  if (config.contains("functional")) out.push_back(io::parse_functional(config.at("functional")));
  if (config.contains("functionals")) {
    const Json& list = config.at("functionals");
    if (!list.is_array()) throw ParseError("\"functionals\" must be an array");
    for (const auto& f : list) out.push_back(io::parse_functional(f));
  }
  if (out.empty()) throw ParseError("config names no functional");
  return out;
}

void check_space(const PricingFunctional& f, AtomSpace space) {
  if (f.space() && *f.space() != space) {
    throw SpaceMismatch(f.name() + " is attached to a space of " +
                        std::to_string(f.space()->size()) + " atoms, scenario has " +
                        std::to_string(space.size()));
  }
}

struct Outcome {
  Json results;
  int exit_code = kOk;
  std::optional<std::string> landscape;
};

Outcome cmd_eval(const Loaded& l, const RunConfig& rc) {
  const auto& sc = need_scenario(l);
  Outcome o;
  o.results = Json::array();
  for (const auto& f : functionals(l.config)) {
    check_space(f, sc.space);
    Json rows = Json::array();
    for (const auto& [name, x] : sc.payoffs) {
      Json row = io::to_json(friction_report(f, x, name, rc.tolerance));
      row["value"] = io::number(f(x));
      rows.push_back(std::move(row));
    }
    o.results.push_back({{"functional", f.name()}, {"flags", io::to_json(f.flags())}, {"payoffs", rows}});
  }
  return o;
}

Outcome cmd_collapse(const Loaded& l, const RunConfig& rc) {
  const Json& s = section(l.config, "collapse");
  const int fallback_n = l.scenario ? static_cast<int>(l.scenario->space.size()) : 10;
  const int n = int_option(s, "n", fallback_n);
  const int budget = int_option(s, "budget", 20);
  const int mean_steps = int_option(s, "landscape_steps", 9);
  if (n < 2) throw ParseError("collapse scan needs n >= 2");
  const AtomSpace space(static_cast<std::size_t>(n));
  Outcome o;
  o.results = Json::array();
  std::ostringstream csv;
  csv << "# config_hash=" << l.hash << " seed=" << rc.seed << "\n";
  csv << "functional,";
  bool header = true;
  for (const auto& f : functionals(l.config)) {
    const CollapseReport r = collapse_scan(f, space, rc.tolerance, rc.seed, budget);
    Json j = io::to_json(r);
    j["functional"] = f.name();
    j["n"] = n;
    o.results.push_back(std::move(j));
    std::istringstream rows(io::landscape_csv(spread_landscape(f, space, mean_steps)));
    std::string line;
    std::getline(rows, line);
    if (header) csv << line << '\n';
    header = false;
    while (std::getline(rows, line)) csv << '"' << f.name() << "\"," << line << '\n';
  }
  o.landscape = csv.str();
  return o;
}

Outcome cmd_risk(const Loaded& l, const RunConfig& rc) {
  const auto& sc = need_scenario(l);
  if (!l.config.contains("market")) throw ParseError("config has no \"market\"");
  if (!l.config.contains("acceptance")) throw ParseError("config has no \"acceptance\"");
  const Market market = io::parse_market(l.config.at("market"));
  const AcceptanceSet a = io::parse_acceptance(l.config.at("acceptance"));
  if (market.space() != sc.space) {
    throw SpaceMismatch("market lives on " + std::to_string(market.space().size()) +
                        " atoms, scenario on " + std::to_string(sc.space.size()));
  }
  a.validate(sc.space);
  Outcome o;
  Json rows = Json::array();
  for (const auto& [name, x] : sc.payoffs) {
    Json row = io::to_json(risk_measure(a, market, x, rc.tolerance));
    row["payoff"] = name;
    rows.push_back(std::move(row));
  }
  o.results = {{"acceptance", a.name()}, {"market_dimension", market.dimension()}, {"payoffs", rows}};
  const int trials = int_option(section(l.config, "risk"), "law_invariance_trials", 0);
  if (trials > 0) {
    const auto w = law_invariance_witness(a, market, trials, rc.seed, 1e-6);
    o.results["law_invariance_witness"] =
        w ? Json{{"x", io::to_json(w->x)},
                 {"x_permuted", io::to_json(w->x_permuted)},
                 {"rho_x", io::number(w->rho_x)},
                 {"rho_permuted", io::number(w->rho_permuted)}}
          : Json(nullptr);
  }
  return o;
}

Outcome cmd_audit(const Loaded& l, const RunConfig& rc) {
  const auto& sc = need_scenario(l);
  const Json& s = section(l.config, "audit");
  const int trials = int_option(s, "trials", 200);
  Outcome o;
  Json fs_json = Json::array();
  bool ok = true;
  for (const auto& f : functionals(l.config)) {
    check_space(f, sc.space);
    const AuditReport audit = flag_audit(f, trials, rc.seed, rc.tolerance);
    Json j = io::to_json(audit);
    ok = ok && audit.consistent();
    if (f.flags().convex && f.flags().law_invariant && audit.consistent()) {
      const SchurReport schur = schur_convexity_report(f, trials, rc.seed, rc.tolerance);
      j["schur"] = io::to_json(schur);
      ok = ok && schur.passed();
    }
    Json friction = Json::array();
    for (const auto& [name, x] : sc.payoffs) {
      friction.push_back(io::to_json(friction_report(f, x, name, rc.tolerance)));
    }
    j["friction"] = friction;
    fs_json.push_back(std::move(j));
  }
  o.results = {{"functionals", fs_json}};
  if (l.config.contains("acceptance")) {
    const AcceptanceSet a = io::parse_acceptance(l.config.at("acceptance"));
    a.validate(sc.space);
    Json aj = {{"name", a.name()}};
    const auto& af = a.flags();
    if (af.convex && af.closed && af.law_invariant) {
      const ClosureReport c = conditioning_closure_check(a, sc.space, trials, rc.seed, rc.tolerance);
      aj["conditioning_closure"] = io::to_json(c);
      ok = ok && c.violations == 0;
    }
    if (af.convex && af.conic && af.monotone && af.law_invariant) {
      aj["pointedness"] = io::to_json(pointedness_check(a, sc.space, trials, rc.seed));
    }
    o.results["acceptance"] = aj;
  }
  o.results["passed"] = ok;
  o.exit_code = ok ? kOk : kFlagViolation;
  return o;
}

Outcome cmd_orlicz(const Loaded& l, const RunConfig& rc) {
  const Json& s = section(l.config, "orlicz");
  const int trials = int_option(s, "trials", 200);
  const double t_min = number_option(s, "t_min", 1.0);
  const double t_max = number_option(s, "t_max", 1e3);
  const int grid = int_option(s, "grid_size", 64);
  if (!l.config.contains("young")) throw ParseError("config has no \"young\" list");
  const Json& list = l.config.at("young");
  if (!list.is_array() || list.empty()) throw ParseError("\"young\" must be a non-empty array");
  Outcome o;
  o.results = Json::array();
  for (const auto& spec : list) {
    const YoungFunction phi = io::parse_young(spec);
    Json j = {{"young", phi.name()}, {"finite", phi.finite()}};
    if (phi.finite()) {
      j["delta2"] = io::to_json(delta2_check(phi, t_min, t_max, grid));
    } else {
      j["delta2"] = {{"verdict", "UNDEFINED"}, {"reason", "Δ₂ undefined for nonfinite Φ"}};
    }
    Json checks = Json::array();
    for (const auto& c : norm_order_check(phi, trials, rc.seed, 10.0 * rc.tolerance)) {
      checks.push_back(io::to_json(c));
    }
    j["norm_checks"] = checks;
    if (l.scenario) {
      Json rows = Json::array();
      for (const auto& [name, x] : l.scenario->payoffs) {
        const NormResult nr = luxemburg_norm(phi, x, rc.tolerance);
        rows.push_back({{"payoff", name},
                        {"norm", io::number(nr.value)},
                        {"iterations", nr.iterations},
                        {"in_heart", in_orlicz_heart(phi, x)}});
      }
      j["payoffs"] = rows;
    }
    o.results.push_back(std::move(j));
  }
  return o;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::SpaceMismatch: return kSpaceMismatch;
    case ErrorKind::FlagViolation: return kFlagViolation;
    case ErrorKind::InvalidArgument:
    case ErrorKind::Solver: return kSolver;
  }
  return kSolver;
}

fs::path landscape_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".landscape.csv");
  return p;
}

}  // namespace

int execute(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    if (!(rc.tolerance > 0.0)) throw ParseError("--tol must be positive");
    const Loaded l = load(rc);
    Outcome o;
    if (rc.command == "eval") o = cmd_eval(l, rc);
    else if (rc.command == "collapse") o = cmd_collapse(l, rc);
    else if (rc.command == "risk") o = cmd_risk(l, rc);
    else if (rc.command == "audit") o = cmd_audit(l, rc);
    else if (rc.command == "orlicz") o = cmd_orlicz(l, rc);
    else throw ParseError("unknown command " + rc.command);

    Json report = {{"tool", "lawprice"},
                   {"version", kVersion},
                   {"command", rc.command},
                   {"config_hash", l.hash},
                   {"seed", rc.seed},
                   {"tolerance", rc.tolerance},
                   {"results", std::move(o.results)}};
    const std::string text = report.dump(2) + "\n";
    if (rc.output_path) {
      io::write_atomic(*rc.output_path, text);
      if (o.landscape) io::write_atomic(landscape_path(*rc.output_path), *o.landscape);
    } else {
      out << text;
    }
    return o.exit_code;
  } catch (const Error& e) {
    err << "lawprice " << rc.command << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const Json::exception& e) {
    err << "lawprice " << rc.command << ": bad config: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    err << "lawprice " << rc.command << ": " << e.what() << "\n";
    return kSolver;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Law-invariant pricing functionals on equal-atom spaces", "lawprice"};
  app.require_subcommand(1, 1);
  RunConfig rc;
  std::string config;
  std::string output;
  const std::pair<const char*, const char*> subcommands[] = {
      {"eval", "evaluate functionals, spreads and friction on each payoff"},
      {"collapse", "scan for frictionless risky payoffs"},
      {"risk", "capital requirements against a market of eligible payoffs"},
      {"audit", "randomized flag, Schur-convexity and closure checks"},
      {"orlicz", "Luxemburg norms and growth checks for Young functions"}};
  for (const auto& [name, description] : subcommands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--seed", rc.seed, "master seed");
    sub->add_option("--tol", rc.tolerance, "tolerance");
    sub->add_option("--out", output, "report path (written atomically)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "lawprice: " << e.what() << "\n";
    return kParse;
  }
  rc.command = app.get_subcommands().front()->get_name();
  rc.config_path = config;
  if (!output.empty()) rc.output_path = output;
  return execute(rc, out, err);
}

}  // namespace lawprice::cli
