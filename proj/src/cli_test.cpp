#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sievelab/cli.hpp"
#include "sievelab/error.hpp"

using namespace sievelab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  try {
    parse_config("", {});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.fields() == std::vector<std::string>{"command"});
  }
  const auto c = parse_config("", {"constant", "--kappa", "0.548387"});
  CHECK(c.command == Command::constant);
  CHECK(c.params.kappa == 0.548387);
  CHECK(c.provenance.at("kappa") == Provenance::flag);
  CHECK(c.params.D == 1e4);

  try {
    parse_config("", {"census", "--z", "5", "--w-level", "10"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto& f = e.fields();
    CHECK(std::find(f.begin(), f.end(), "z") != f.end());
    CHECK(std::find(f.begin(), f.end(), "w_level") != f.end());
  }
  CHECK_THROWS_AS(parse_config("", {"census", "--bogus", "1"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"census", "--L", "abc"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"frobnicate"}), ConfigError);

  const auto f = parse_config("# comment\ncommand = gamma\nd = 3\nseed=9\n", {"--d=4"});
  CHECK(f.command == Command::gamma);
  CHECK(f.d == 4);
  CHECK(f.seed == 9);
  CHECK(f.provenance.at("d") == Provenance::flag);
  CHECK(f.provenance.at("seed") == Provenance::config_file);
  CHECK(f.provenance.at("psi") == Provenance::default_value);

  const auto g = parse_config("", {"gamma", "--d", "4", "--seed", "9"});
  CHECK(g.hash() == f.hash());
  CHECK(g.hash().size() == 16);
  const auto h = parse_config("", {"gamma", "--d", "5", "--seed", "9"});
  CHECK(h.hash() != g.hash());

  CHECK(parse_number_list("1, 2,3.5", "x") == std::vector<double>{1, 2, 3.5});
  CHECK_THROWS_AS(parse_number_list("1,,2", "x"), ConfigError);
  CHECK(config_keys().size() > 30);
}

TEST_CASE("constant report carries the comparison bound") {
  const auto r = run({"constant"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["paper_bound"] == 0.0166);
  CHECK(j["result"]["limit_mode"] == "derivation");
  CHECK(j["header"]["config"]["command"] == "constant");
  CHECK(j["header"]["config_hash"].get<std::string>().size() == 16);

  const auto lit = run({"constant", "--limit-mode", "literal"});
  CHECK(lit.code == kExitValidation);
  CHECK(lit.err.find("diverge") != std::string::npos);
}

TEST_CASE("census CSV and JSON outputs") {
  const std::vector<std::string> base{"census", "--X", "5000", "--L", "40", "--q", "5", "--table-limit", "20000"};
  const auto csv = run(base);
  REQUIRE(csv.code == kExitOk);
  CHECK(csv.out.rfind("# sievelab 0.1.0 config_hash=", 0) == 0);
  CHECK(csv.out.find("\na,measure\n1,") != std::string::npos);
  auto jargs = base;
  jargs.insert(jargs.end(), {"--format", "json"});
  const auto js = run(jargs);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j["result"]["q"] == 5);
  CHECK(j["result"]["measure"].size() == 4);
  const auto big = run({"census", "--X", "1e6", "--table-limit", "1000"});
  CHECK(big.code == kExitValidation);
}

TEST_CASE("variance batch is JSON lines and deterministic") {
  const std::vector<std::string> args{"variance", "--configs", "4", "--seed", "3", "--X-max", "3000"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.out == b.out);
  const auto lines = json_lines(a.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].contains("header"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].contains("residual"));
    CHECK(lines[i].contains("coefficients"));
  }
  CHECK(a.code == kExitOk);
  auto tight = args;
  tight.insert(tight.end(), {"--budget-constant", "1e-12"});
  CHECK(run(tight).code == kExitBudgetFlagged);
  auto other = args;
  other[4] = "4";
  CHECK(run(other).out != a.out);
}

TEST_CASE("other commands") {
  const auto w = run({"weights", "--kind", "lambda_plus"});
  CHECK(w.code == kExitOk);
  CHECK(w.out.find("\nd,kind,value\n1,lambda_plus,1\n") != std::string::npos);
  CHECK(run({"weights", "--kind", "lambda_plus_P"}).code == kExitValidation);
  CHECK(run({"weights", "--kind", "alpha_minus", "--support-cap", "2"}).code == kExitResource);

  const auto s = nlohmann::json::parse(run({"sandwich", "--n-max", "5000"}).out);
  CHECK(s["result"]["failures"] == 0);
  CHECK(s["result"]["checked"] == 5000 * 6);

  const auto k = run({"kloosterman", "--p-max", "23"});
  CHECK(k.code == kExitOk);
  const auto g = nlohmann::json::parse(run({"gamma", "--d", "2", "--M", "100000"}).out);
  CHECK(g["result"]["closed_form"] == 0.5);
  const auto d = nlohmann::json::parse(run({"dispersion", "--tuples", "100", "--entry-max", "30"}).out);
  CHECK(d["result"]["delta_identity"]["unit_gcd_failures"] == 0);
  const auto c = nlohmann::json::parse(run({"corollary", "--q", "13"}).out);
  CHECK(c["result"]["total"] == 12);
  const auto t = run({"trend", "--X", "5000", "--q", "3", "--A-grid", "2,4"});
  CHECK(t.code == kExitOk);
  CHECK(t.out.find("A,L,threshold,total,normalized,degenerate\n") != std::string::npos);
  CHECK(run({}).code == kExitValidation);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("config file and output path") {
  const auto dir = std::filesystem::temp_directory_path() / "sievelab_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "command = gamma\nd = 2\nM = 1000\n";
  }
  const auto out = dir / "gamma.json";
  const auto r = run({"--config", cfg.string(), "--output", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["result"]["d"] == 2);
  CHECK(j["header"]["config"]["M"] == "1000");

  const auto bad = run({"gamma", "--output", (dir / "missing" / "x.json").string()});
  CHECK(bad.code == kExitValidation);
  CHECK(bad.err.find("cannot open") != std::string::npos);
  CHECK(run({"--config", (dir / "nope.cfg").string()}).code == kExitValidation);

  RunConfig rc = parse_config("", {"gamma", "--output", (dir / "missing" / "y.json").string()});
  CHECK_THROWS_AS(emit_report(run_command(rc).report, rc, std::cout), IoError);
  std::filesystem::remove_all(dir);
}
