#include <catch2/catch_amalgamated.hpp>

#include <codelta/json_util.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using codelta::Json;

namespace {

std::string g_cli;
std::string g_data;

struct RunOut {
  int exit_code = -1;
  std::string out;
};

// Runs the binary with a shell argument string. stdout is captured; stderr
// joins it when merge_stderr is set.
RunOut run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = "'" + g_cli + "' " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(cmd.c_str(), "r");
  RunOut r;
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string data_file(const std::string& name) { return g_data + "/" + name; }

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("axioms runs the suite and repeats byte for byte") {
  RunOut a = run_cli("axioms --space R^2 --order 2 --cases 30 --seed 701");
  RunOut b = run_cli("axioms --space R^2 --order 2 --cases 30 --seed 701");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  REQUIRE(a.out == b.out);
  REQUIRE_FALSE(a.out.empty());

  Json j = codelta::parse_json_strict(a.out);
  REQUIRE(j.at("schema") == "law-report/1");
  REQUIRE(j.at("passed") == true);
  REQUIRE(j.at("total_failures") == 0);
  REQUIRE(j.at("config").at("space") == "R^2");
  REQUIRE(j.at("config").at("seed") == 701);
  REQUIRE(j.at("laws").size() == 12);
  for (const Json& law : j.at("laws")) {
    REQUIRE(law.at("cases") == 30);
    REQUIRE(law.at("failures") == 0);
    REQUIRE(law.at("max_residual") == "0");
    REQUIRE(law.at("samples").empty());
  }

  SECTION("a different seed still passes but changes the sampled inputs") {
    RunOut c = run_cli("axioms --space R^2 --order 2 --cases 30 --seed 702");
    REQUIRE(c.exit_code == 0);
    Json jc = codelta::parse_json_strict(c.out);
    REQUIRE(jc.at("passed") == true);
    REQUIRE(jc.at("config").at("seed") == 702);
  }

  SECTION("--out writes the same bytes to a file") {
    std::string path = "cli_axioms_tmp.json";
    RunOut c = run_cli("axioms --space R^2 --order 2 --cases 30 --seed 701 --out " + path);
    REQUIRE(c.exit_code == 0);
    REQUIRE(c.out.empty());
    REQUIRE(read_all(path) == a.out);
    std::remove(path.c_str());
  }
}

TEST_CASE("axioms handles the degenerate configs") {
  SECTION("zero cases") {
    RunOut r = run_cli("axioms --cases 0");
    REQUIRE(r.exit_code == 0);
    Json j = codelta::parse_json_strict(r.out);
    REQUIRE(j.at("note") == "no cases");
    REQUIRE(j.at("passed") == true);
    for (const Json& law : j.at("laws")) REQUIRE(law.at("cases") == 0);
  }
  SECTION("zero dimensional base space") {
    RunOut r = run_cli("axioms --space R^0 --cases 15 --seed 703");
    REQUIRE(r.exit_code == 0);
    Json j = codelta::parse_json_strict(r.out);
    REQUIRE(j.at("passed") == true);
    REQUIRE(j.at("total_failures") == 0);
  }
}

TEST_CASE("usage errors exit with 2") {
  REQUIRE(run_cli("axioms --space R^9", true).exit_code == 2);
  REQUIRE(run_cli("axioms --space bogus", true).exit_code == 2);
  REQUIRE(run_cli("axioms --cases -4", true).exit_code == 2);
  REQUIRE(run_cli("axioms --order -1", true).exit_code == 2);
  REQUIRE(run_cli("", true).exit_code == 2);
  REQUIRE(run_cli("frobnicate", true).exit_code == 2);
  REQUIRE(run_cli("eval /no/such/file.dll", true).exit_code == 2);
  REQUIRE(run_cli("diff /no/such/poly.json --point 1 --direction 1", true).exit_code == 2);
  REQUIRE(run_cli("curve /no/such/samples.csv", true).exit_code == 2);
  REQUIRE(run_cli("--help", true).exit_code == 0);
}

TEST_CASE("eval computes a bare term against an environment") {
  RunOut r = run_cli("eval " + data_file("point_eval.dll") + " --env " + data_file("point_env.json"));
  REQUIRE(r.exit_code == 0);
  Json j = codelta::parse_json_strict(r.out);
  REQUIRE(j.at("schema") == "eval/1");
  REQUIRE(j.at("type") == "R^2");
  REQUIRE(j.at("value") == Json({{"vector", {"1", "2"}}}));
}

TEST_CASE("eval runs declaration files top to bottom") {
  RunOut r = run_cli("eval " + data_file("structural.dll") + " --env " + data_file("point_env.json"));
  REQUIRE(r.exit_code == 0);
  Json j = codelta::parse_json_strict(r.out);
  const Json& results = j.at("results");
  REQUIRE(results.size() == 3);
  REQUIRE(results[0].at("name") == "u");
  REQUIRE(results[0].at("type") == "!R^2");
  REQUIRE(results[1].at("name") == "m");
  REQUIRE(results[1].at("value") == Json({{"scalar", "0"}}));
  REQUIRE(results[2].at("name") == "w");
  REQUIRE(results[2].at("value") == Json({{"vector", {"1", "2"}}}));
}

TEST_CASE("eval folds a loaded point mass through the convolution unit") {
  std::string term = "cocontract_unit_tmp.dll";
  {
    std::ofstream f(term);
    f << "cocontract(coweaken(), u)\n";
  }
  RunOut r = run_cli("eval " + term + " --env " + data_file("dirac_env.json"));
  std::remove(term.c_str());
  REQUIRE(r.exit_code == 0);
  Json j = codelta::parse_json_strict(r.out);
  REQUIRE(j.at("type") == "!R^2");
  const Json& terms = j.at("value").at("distribution").at("terms");
  REQUIRE(terms.size() == 1);
  REQUIRE(terms[0].at("coeff") == "1");
  REQUIRE(terms[0].at("base") == Json({{"vector", {"3", "5"}}}));
  REQUIRE(terms[0].at("dirs").empty());
}

TEST_CASE("eval reports spans and exits 1 on bad terms") {
  SECTION("type error") {
    RunOut r = run_cli("eval " + data_file("ill_typed.dll") + " --env " + data_file("point_env.json"), true);
    REQUIRE(r.exit_code == 1);
    REQUIRE(r.out.find("type error at 1:") != std::string::npos);
    REQUIRE(r.out.find("declaration 'b'") != std::string::npos);
  }
  SECTION("syntax error") {
    RunOut r = run_cli("eval " + data_file("bad_syntax.dll"), true);
    REQUIRE(r.exit_code == 1);
    REQUIRE(r.out.find("syntax error at 1:") != std::string::npos);
  }
  SECTION("malformed environment") {
    RunOut r = run_cli("eval " + data_file("point_eval.dll") + " --env " + data_file("bad_env.json"), true);
    REQUIRE(r.exit_code == 2);
  }
  SECTION("unbound value at evaluation time") {
    RunOut r = run_cli("eval " + data_file("point_eval.dll") + " --env " + data_file("dirac_env.json"), true);
    REQUIRE(r.exit_code == 1);
  }
}

TEST_CASE("diff is the exact directional derivative") {
  std::string poly = data_file("xxy.json");
  SECTION("x^2 y at (1,2) along (1,0)") {
    RunOut r = run_cli("diff " + poly + " --point 1,2 --direction 1,0");
    REQUIRE(r.exit_code == 0);
    Json j = codelta::parse_json_strict(r.out);
    REQUIRE(j.at("schema") == "diff/1");
    REQUIRE(j.at("value") == Json::array({"4"}));
  }
  SECTION("zero direction gives zero") {
    RunOut r = run_cli("diff " + poly + " --point 1,2 --direction 0,0");
    REQUIRE(codelta::parse_json_strict(r.out).at("value") == Json::array({"0"}));
    REQUIRE(r.exit_code == 0);
  }
  SECTION("a linear map differentiates to itself") {
    RunOut r = run_cli("diff " + data_file("linear.json") + " --point 7,-11 --direction 2,1");
    REQUIRE(codelta::parse_json_strict(r.out).at("value") == Json::array({"11"}));
    REQUIRE(r.exit_code == 0);
  }
  SECTION("rational arithmetic stays exact") {
    RunOut r = run_cli("diff " + poly + " --point 1/3,3/4 --direction 1/2,2");
    // d(x^2 y) = 2xy dx + x^2 dy = 2*(1/3)*(3/4)*(1/2) + (1/9)*2
    REQUIRE(codelta::parse_json_strict(r.out).at("value") == Json::array({"17/36"}));
    REQUIRE(r.exit_code == 0);
  }
  SECTION("dimension mismatch") {
    RunOut r = run_cli("diff " + poly + " --point 1 --direction 1,0", true);
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.out.find("expects 2") != std::string::npos);
  }
}

TEST_CASE("curve reports quotient tables and verdicts") {
  SECTION("a parabola is smooth and its second quotients are all exactly 2") {
    RunOut r = run_cli("curve " + data_file("square.csv") + " --order 2");
    REQUIRE(r.exit_code == 0);
    Json j = codelta::parse_json_strict(r.out);
    REQUIRE(j.at("schema") == "curve-report/1");
    REQUIRE(j.at("smooth") == true);
    REQUIRE(j.at("first_bad_order") == -1);
    const Json& second = j.at("orders")[1];
    REQUIRE(second.at("order") == 2);
    for (const Json& w : second.at("windows"))
      for (const Json& q : w.at("q")) REQUIRE(q == "2");
  }
  SECTION("a corner is flagged non smooth at order 2") {
    RunOut r = run_cli("curve " + data_file("corner.csv") + " --order 2");
    REQUIRE(r.exit_code == 1);
    Json j = codelta::parse_json_strict(r.out);
    REQUIRE(j.at("smooth") == false);
    REQUIRE(j.at("first_bad_order") == 2);
    REQUIRE(j.at("orders")[0].at("bounded") == true);
    REQUIRE(j.at("orders")[1].at("bounded") == false);
    REQUIRE(j.at("orders")[1].at("growth_exponent") < -0.5);
  }
  SECTION("too few samples names the required count") {
    RunOut r = run_cli("curve " + data_file("single.csv") + " --order 1", true);
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.out.find("at least 2 samples, got 1") != std::string::npos);
  }
  SECTION("order beyond the sample count") {
    RunOut r = run_cli("curve " + data_file("square.csv") + " --order 30", true);
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.out.find("at least 31 samples") != std::string::npos);
  }
}

int main(int argc, char* argv[]) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cli-binary> <data-dir> [catch2 args]\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  g_data = argv[2];
  std::vector<char*> rest;
  rest.push_back(argv[0]);
  for (int i = 3; i < argc; ++i) rest.push_back(argv[i]);
  return Catch::Session().run(static_cast<int>(rest.size()), rest.data());
}
