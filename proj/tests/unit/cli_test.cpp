#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lawprice/io.hpp"
#include "lawprice_cli/commands.hpp"

namespace fs = std::filesystem;
using lawprice::io::Json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lawprice_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "lawprice");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return lawprice::cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  Json report() const { return Json::parse(out_.str()); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_F(Cli, EvalExamples) {
  const auto cfg = write("c.json", R"({
    "scenario": {"n": 2, "payoffs": {"X": [1, 3], "Z": [-1, 1]}},
    "functionals": [{"type": "expectation", "c": 1}, {"type": "expected_shortfall", "beta": 0.5}]})");
  ASSERT_EQ(run({"eval", "--config", cfg.string(), "--seed", "5"}), 0) << err_.str();
  const Json r = report();
  EXPECT_EQ(r.at("command"), "eval");
  EXPECT_EQ(r.at("seed"), 5);
  EXPECT_EQ(r.at("config_hash").get<std::string>().size(), 16u);
  const Json& e = r.at("results").at(0).at("payoffs").at(0);
  EXPECT_EQ(e.at("payoff"), "X");
  EXPECT_EQ(e.at("value"), 2.0);
  EXPECT_EQ(e.at("spread"), 0.0);
  const Json& es = r.at("results").at(1).at("payoffs").at(1);
  EXPECT_EQ(es.at("value"), 1.0);
  EXPECT_EQ(es.at("spread"), 2.0);
  EXPECT_EQ(es.at("frictionless"), false);
}

TEST_F(Cli, ScenarioFromFileAndHashCoversIt) {
  write("s.json", R"({"n": 2, "payoffs": {"X": [1, 3]}})");
  const auto cfg = write("c.json", R"({"scenario": "s.json", "functional": {"type": "expectation"}})");
  ASSERT_EQ(run({"eval", "--config", cfg.string()}), 0) << err_.str();
  const std::string h1 = report().at("config_hash");
  write("s.json", R"({"n": 2, "payoffs": {"X": [1, 5]}})");
  ASSERT_EQ(run({"eval", "--config", cfg.string()}), 0) << err_.str();
  EXPECT_NE(report().at("config_hash").get<std::string>(), h1);
}

TEST_F(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(run({"eval", "--config", write("bad.json", "{not json").string()}), 2);
  EXPECT_EQ(run({"eval", "--config", (dir_ / "missing.json").string()}), 2);
  EXPECT_EQ(run({"audit", "--config",
                 write("empty.json", R"({"scenario": {"n": 2, "payoffs": {}}, "functional": {"type": "gate"}})")
                     .string()}),
            2);
  EXPECT_EQ(run({"eval", "--config", write("nofn.json", R"({"scenario": {"n": 1, "payoffs": {"x": [1]}}})").string()}), 2);
  EXPECT_EQ(run({"bogus", "--config", "x"}), 2);
  EXPECT_EQ(run({"eval"}), 2);
  const auto ok = write("ok.json", R"({"scenario": {"n": 1, "payoffs": {"x": [1]}}, "functional": {"type": "gate"}})");
  EXPECT_EQ(run({"eval", "--config", ok.string(), "--tol", "0"}), 2);
  EXPECT_EQ(run({"eval", "--config", ok.string(), "--seed", "-3"}), 2);
}

TEST_F(Cli, SpaceMismatchExitsThree) {
  EXPECT_EQ(run({"eval", "--config",
                 write("c.json", R"({"scenario": {"n": 3, "payoffs": {"x": [1, 2]}}, "functional": {"type": "gate"}})")
                     .string()}),
            3);
  EXPECT_EQ(run({"eval", "--config",
                 write("d.json", R"({"scenario": {"n": 3, "payoffs": {"x": [1, 2, 3]}},
                                     "functional": {"type": "representation", "densities": [[1, 1]]}})")
                     .string()}),
            3);
  EXPECT_EQ(run({"risk", "--config",
                 write("r.json", R"({"scenario": {"n": 3, "payoffs": {"x": [1, 2, 3]}},
                                     "market": {"basis": [[1, 1]], "prices": [1]},
                                     "acceptance": {"type": "expectation"}})")
                     .string()}),
            3);
}

TEST_F(Cli, CollapseVerdictsAndFlagViolation) {
  const auto cfg = write("c.json", R"({
    "functionals": [{"type": "expectation", "c": 1}, {"type": "expected_shortfall", "beta": 0.9}, {"type": "gate"}],
    "collapse": {"n": 6, "budget": 5}})");
  const auto out = dir_ / "collapse.json";
  ASSERT_EQ(run({"collapse", "--config", cfg.string(), "--out", out.string()}), 0) << err_.str();
  const Json r = Json::parse(slurp(out));
  EXPECT_EQ(r.at("results").at(0).at("verdict"), "COLLAPSE");
  EXPECT_EQ(r.at("results").at(0).at("c"), 1.0);
  EXPECT_EQ(r.at("results").at(1).at("verdict"), "NO_FRICTIONLESS_RISKY");
  EXPECT_EQ(r.at("results").at(2).at("verdict"), "BOUNDARY");
  const std::string csv = slurp(dir_ / "collapse.landscape.csv");
  EXPECT_NE(csv.find("config_hash=" + r.at("config_hash").get<std::string>()), std::string::npos);
  EXPECT_NE(csv.find("functional,fraction_low,mean,spread"), std::string::npos);

  const auto bad = write("bad.json", R"({"functional": {"type": "gate", "flags": {"law_invariant": false}}})");
  EXPECT_EQ(run({"collapse", "--config", bad.string()}), 4);
}

TEST_F(Cli, RiskExamples) {
  const auto cfg = write("c.json", R"({
    "scenario": {"n": 2, "payoffs": {"X": [-2, 4]}},
    "market": {"basis": [[1, 1]], "prices": [1], "numeraire_index": 0},
    "acceptance": {"type": "expectation"}})");
  ASSERT_EQ(run({"risk", "--config", cfg.string()}), 0) << err_.str();
  EXPECT_NEAR(report().at("results").at("payoffs").at(0).at("rho").get<double>(), -1.0, 1e-8);

  const auto es = write("es.json", R"({
    "scenario": {"n": 2, "payoffs": {"X": [-2, 0]}},
    "market": {"basis": [[1, 1]], "prices": [0.9]},
    "acceptance": {"type": "expected_shortfall", "beta": 0.5}})");
  ASSERT_EQ(run({"risk", "--config", es.string()}), 0) << err_.str();
  const Json row = report().at("results").at("payoffs").at(0);
  EXPECT_NEAR(row.at("rho").get<double>(), 1.8, 1e-8);
  EXPECT_EQ(row.at("status"), "finite");
  EXPECT_GT(row.at("membership_calls").get<int>(), 0);

  const auto k4 = write("k4.json", R"({
    "scenario": {"n": 4, "payoffs": {"X": [1, 2, 3, 4]}},
    "market": {"basis": [[1,1,1,1],[1,0,0,0],[0,1,0,0],[0,0,1,0]], "prices": [1, 0.2, 0.2, 0.2]},
    "acceptance": {"type": "expectation"}})");
  EXPECT_EQ(run({"risk", "--config", k4.string()}), 5);
}

TEST_F(Cli, AuditFlagsMislabeledFunctional) {
  const auto good = write("g.json", R"({
    "scenario": {"n": 3, "payoffs": {"X": [-1, 0, 2]}},
    "functionals": [{"type": "expectation"}, {"type": "expected_shortfall", "beta": 0.5}, {"type": "entropic", "theta": 1}],
    "acceptance": {"type": "expected_shortfall", "beta": 0.5},
    "audit": {"trials": 100}})");
  ASSERT_EQ(run({"audit", "--config", good.string()}), 0) << err_.str();
  EXPECT_EQ(report().at("results").at("passed"), true);
  EXPECT_EQ(report().at("results").at("acceptance").at("conditioning_closure").at("violations"), 0);

  const auto bad = write("b.json", R"({
    "scenario": {"n": 3, "payoffs": {"X": [-1, 0, 2]}},
    "functional": {"type": "entropic", "theta": 1, "flags": {"sublinear": true}},
    "audit": {"trials": 100}})");
  EXPECT_EQ(run({"audit", "--config", bad.string()}), 4);
  const Json r = report();
  EXPECT_EQ(r.at("results").at("passed"), false);
  bool found = false;
  for (const auto& c : r.at("results").at("functionals").at(0).at("checks")) {
    if (c.at("flag") == "sublinear") {
      found = true;
      EXPECT_EQ(c.at("falsified"), true);
      EXPECT_FALSE(c.at("witness").is_null());
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(Cli, Orlicz) {
  const auto cfg = write("o.json", R"({
    "scenario": {"n": 2, "payoffs": {"X": [0, 2]}},
    "young": [{"type": "power", "p": 2}, {"type": "exp"}, {"type": "linf"}],
    "orlicz": {"trials": 30}})");
  ASSERT_EQ(run({"orlicz", "--config", cfg.string()}), 0) << err_.str();
  const Json r = report().at("results");
  EXPECT_NEAR(r.at(0).at("payoffs").at(0).at("norm").get<double>(), std::sqrt(2.0), 1e-8);
  EXPECT_EQ(r.at(0).at("delta2").at("verdict"), "HOLDS");
  EXPECT_EQ(r.at(1).at("delta2").at("verdict"), "FAILS");
  EXPECT_EQ(r.at(2).at("delta2").at("verdict"), "UNDEFINED");
  EXPECT_NEAR(r.at(2).at("payoffs").at(0).at("norm").get<double>(), 2.0, 1e-8);
}

TEST_F(Cli, ReportsAreByteIdentical) {
  const auto cfg = write("c.json", R"({
    "scenario": {"n": 4, "payoffs": {"X": [-1, 0, 2, 3], "Y": [1, 1, 1, 1]}},
    "functionals": [{"type": "expected_shortfall", "beta": 0.5}, {"type": "entropic", "theta": 1}],
    "market": {"basis": [[1, 1, 1, 1], [0, 0, 0, 1]], "prices": [1, 0.4]},
    "acceptance": {"type": "expected_shortfall", "beta": 0.5},
    "young": [{"type": "power", "p": 1.5}],
    "collapse": {"budget": 4}, "audit": {"trials": 40}, "orlicz": {"trials": 20},
    "risk": {"law_invariance_trials": 20}})");
  for (const char* cmd : {"eval", "collapse", "risk", "audit", "orlicz"}) {
    const auto a = dir_ / (std::string(cmd) + "_a.json");
    const auto b = dir_ / (std::string(cmd) + "_b.json");
    ASSERT_EQ(run({cmd, "--config", cfg.string(), "--seed", "77", "--out", a.string()}), 0) << cmd << err_.str();
    ASSERT_EQ(run({cmd, "--config", cfg.string(), "--seed", "77", "--out", b.string()}), 0) << cmd << err_.str();
    EXPECT_EQ(slurp(a), slurp(b)) << cmd;
    EXPECT_FALSE(fs::exists(dir_ / (std::string(cmd) + "_a.json.tmp")));
  }
}
