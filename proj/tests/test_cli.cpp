// SPDX-License-Identifier: Apache-2.0

#include "mandel/cli.hpp"

#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <sys/wait.h>
#include <vector>

using namespace mandel;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mandelcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<io::Json> json_lines(const std::string& text) {
  std::vector<io::Json> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(io::Json::parse(line));
  }
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string machine(const char* name) { return std::string(MANDEL_MACHINES_DIR) + "/" + name; }

}  // namespace

TEST_CASE("decide exit codes and payload") {
  Result in = invoke({"decide", "--re", "-2", "--im", "0"});
  CHECK(in.code == 0);
  io::Json j = io::Json::parse(in.out);
  CHECK(j["verdict"] == "in");
  CHECK(j["certificate"]["kind"] == "cycle");
  CHECK(j["certificate"]["preperiod"] == 2);

  Result out = invoke({"decide", "--re", "3", "--im", "0"});
  CHECK(out.code == 1);
  CHECK(io::Json::parse(out.out)["certificate"]["n"] == 1);

  Result unk = invoke({"decide", "--re", "1/4", "--im", "0", "--budget", "10000"});
  CHECK(unk.code == 2);

  Result quarter = invoke({"decide", "--re", "1/4", "--im", "1/4"});
  io::Json qj = io::Json::parse(quarter.out);
  for (const char* key : {"c", "verdict", "certificate", "budget", "precision"}) CHECK(qj.contains(key));
  CHECK(qj["verdict"] == "in");
  CHECK(qj["certificate"]["kind"] == "cardioid");
}

TEST_CASE("decide with oracle inputs") {
  Result r = invoke({"decide", "--re", "sqrt(2)", "--im", "0"});
  CHECK(r.code == 1);
  io::Json j = io::Json::parse(r.out);
  CHECK(j["c"]["re"] == "sqrt(2)");
  CHECK(j.contains("stage"));
  Result one = invoke({"decide", "--re", "1", "--im", "sqrt(0)"});
  CHECK(one.code == 1);
  CHECK(io::Json::parse(one.out)["stage"] == 3);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"decide", "--re", "1/0", "--im", "0"}).code == cli::kExitUsage);
  CHECK(invoke({"decide", "--re", "abc", "--im", "0"}).code == cli::kExitUsage);
  CHECK(invoke({"decide", "--re", "1"}).code == cli::kExitUsage);
  CHECK(invoke({"render", "--mode", "sideways"}).code == cli::kExitUsage);
  CHECK(invoke({"rational", "decode", "--n", "-3"}).code == cli::kExitUsage);
  CHECK(invoke({"zeno", "run", "--machine", "/no/such/file.tm"}).code == cli::kExitRuntime);
  Result help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("decide") != std::string::npos);
}

TEST_CASE("parse_oracle") {
  CHECK(cli::parse_oracle("3/4").query(5) == Rational::parse("3/4"));
  RealOracle r = cli::parse_oracle("sqrt(9/4)");
  CHECK(r.query(8) == Rational::parse("3/2"));
  CHECK_THROWS_AS(cli::parse_oracle("sqrt(2"), EncodingError);
}

TEST_CASE("render writes image and sidecar") {
  const std::string path = "cli_test_render.pgm";
  Result r = invoke({"render", "--n", "2", "--out", path});
  REQUIRE(r.code == 0);
  std::string bytes = slurp(path);
  CHECK(bytes.rfind("P5\n2 2\n255\n", 0) == 0);
  CHECK(bytes.size() == 15);
  // The four corners have |c|^2 = 8 > 4, so all escape at step 1.
  for (std::size_t i = 11; i < 15; ++i) CHECK(static_cast<unsigned char>(bytes[i]) == 1);
  io::Json side = io::Json::parse(slurp(path + ".json"));
  CHECK(side["counts"]["out"] == 4);
  CHECK(side["image"]["fnv1a"].get<std::string>().size() == 16);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("render json and csv formats") {
  const std::string jpath = "cli_test_grid.json";
  REQUIRE(invoke({"render", "--n", "3", "--budget", "20", "--format", "json", "--out", jpath}).code == 0);
  io::Json g = io::Json::parse(slurp(jpath));
  REQUIRE(g["verdicts"].size() == 3);
  CHECK(g["verdicts"][1].get<std::string>() == "iio");  // -2 is In, 0 is In, 2 is Out
  CHECK(g["first_escape"][0][0] == 1);
  std::remove(jpath.c_str());

  const std::string cpath = "cli_test_grid.csv";
  REQUIRE(invoke({"render", "--n", "3", "--budget", "20", "--format", "csv", "--out", cpath}).code == 0);
  std::string csv = slurp(cpath);
  CHECK(csv.rfind("n,mode,budget", 0) == 0);
  CHECK(csv.find("\n3,point,20,64,7,2,0,") != std::string::npos);
  std::remove(cpath.c_str());
}

TEST_CASE("area rows") {
  Result r = invoke({"area", "--n", "64", "--budgets", "10,20,30,40,50"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "budget,upper,lower,upper_approx,lower_approx");
  std::vector<Rational> uppers;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string b, up, lo;
    std::getline(row, b, ',');
    std::getline(row, up, ',');
    std::getline(row, lo, ',');
    uppers.push_back(Rational::parse(up));
    CHECK(Rational::parse(lo) <= uppers.back());
  }
  REQUIRE(uppers.size() == 5);
  for (std::size_t i = 1; i < uppers.size(); ++i) CHECK(uppers[i] <= uppers[i - 1]);

  Result j = invoke({"area", "--n", "32", "--budgets", "10", "--format", "json"});
  io::Json aj = io::Json::parse(j.out);
  CHECK(aj["rows"].size() == 1);
  CHECK(aj["rows"][0]["budget"] == 10);
}

TEST_CASE("zeno subcommands") {
  Result lamp = invoke({"zeno", "lamp", "--budget", "40"});
  REQUIRE(lamp.code == 0);
  auto lines = json_lines(lamp.out);
  CHECK(lines.size() == 42);
  CHECK(lines.back()["summary"]["limit"] == "alternating");
  CHECK(lines[1]["tape"]["0"] == "1");

  Result two = invoke({"zeno", "run", "--machine", machine("two_step.tm"), "--strict"});
  REQUIRE(two.code == 0);
  io::Json s = json_lines(two.out).back()["summary"];
  CHECK(s["halted_at"] == 2);
  CHECK(s["elapsed"] == "3/4");
  CHECK(s["limit"] == "stabilized");

  Result mb = invoke({"zeno", "mandelbrot", "--re", "1", "--im", "0", "--stages", "20"});
  REQUIRE(mb.code == 0);
  auto mlines = json_lines(mb.out);
  CHECK(mlines.size() == 21);
  CHECK(mlines.back()["summary"]["classification"] == "EscapeCofinal");
  CHECK(mlines.back()["summary"]["first_flagged_stage"] == 3);
  CHECK(mlines[0]["escaped_flag"] == false);

  Result bad = invoke({"zeno", "run", "--machine", machine("lamp.tm"), "--window", "0"});
  CHECK(bad.code == cli::kExitUsage);
}

TEST_CASE("rational subcommands") {
  CHECK(io::Json::parse(invoke({"rational", "circle", "--x", "3/5", "--y", "4/5"}).out)["on_circle"] == true);
  CHECK(io::Json::parse(invoke({"rational", "evenden", "--q", "3/6"}).out)["even_denominator"] == 1);
  io::Json epi = io::Json::parse(invoke({"rational", "epigraph", "--x", "1", "--y", "3"}).out);
  CHECK(epi["above"] == true);
  CHECK(epi["order"] == 3);
  CHECK(io::Json::parse(invoke({"rational", "encode", "--q", "-1"}).out)["n"] == "0");
  CHECK(io::Json::parse(invoke({"rational", "decode", "--n", "4"}).out)["q"] == "0");
}

TEST_CASE("decidability table") {
  io::Json t = cli::decidability_table();
  io::Json turing;
  for (const auto& row : t["rows"]) {
    if (row["circle"]["status"] == "computed") turing = row;
  }
  REQUIRE_FALSE(turing.is_null());
  CHECK(turing["circle"]["mark"] == "✓");
  CHECK(turing["circle"]["witness"]["x"] == "3/5");
  CHECK(turing["epigraph"]["mark"] == "✓");
  CHECK(turing["epigraph"]["witness"]["order"] == 3);
  CHECK(turing["mandelbrot"]["mark"] == "?");
  CHECK(turing["mandelbrot"]["stats"]["points"] == 289);
  std::size_t literature = 0;
  for (const auto& row : t["rows"]) literature += row["circle"]["status"] == "literature";
  CHECK(literature == 4);
  std::string text = cli::format_table_text(t);
  CHECK(text.find("literature (untested)") != std::string::npos);
  CHECK(text.find("settled at order 3") != std::string::npos);
}

TEST_CASE("verdict json round trip") {
  for (const char* re : {"-2", "0", "3", "13/50", "-3/4", "-1"}) {
    ComplexRational c{Rational::parse(re), Rational(0)};
    Verdict v = decide(c);
    io::Json j = io::verdict_json(io::point_json(c), v);
    Verdict back = io::verdict_from_json(io::Json::parse(j.dump()));
    CHECK(io::verdict_json(io::point_json(c), back) == j);
    CHECK(io::point_from_json(j["c"]) == c);
  }
  CHECK_THROWS(io::verdict_from_json(io::Json::parse(R"({"verdict":"maybe","certificate":{},"budget":1,"precision":1})")));
}

TEST_CASE("executable exit codes") {
  const std::string exe = MANDELCERT_EXE;
  auto status = [&](const std::string& args) {
    int raw = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("decide --re -1 --im 0") == 0);
  CHECK(status("decide --re 2 --im 0") == 1);
  CHECK(status("decide --re -3/4 --im 0") == 2);
  CHECK(status("decide --re 1/0 --im 0") == 3);
}
