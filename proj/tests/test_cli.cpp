#include "cli.hpp"
#include "config.hpp"
#include "horolab/expr.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace horolab;
using horolab::cli::run;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / ("horolab_cli_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// drop the trailing wall-time column
std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  for (const auto& l : lines_of(csv)) rows.push_back(l.substr(0, l.rfind(',')));
  return rows;
}

}  // namespace

TEST_CASE("farey subcommand") {
  const Result r = call({"farey", "--d", "2", "--Q", "3"});
  CHECK(r.code == 0);
  const auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "q,p_1,x_1");
  CHECK(ls[1] == "1,0,0");
  CHECK(ls[2] == "2,1,0.5");
  CHECK(ls[3] == "3,1,0.333333333333333");

  const Result c = call({"farey", "--d", "2", "--Q", "10000", "--count"});
  CHECK(c.code == 0);
  CHECK(json::parse(c.out).at("exact") == count_farey(2, 10000).exact);

  const Result sheared = call({"farey", "--d", "2", "--Q", "1", "--L", "1,0;1,1", "--lo", "0", "--hi", "1", "--closed"});
  CHECK(lines_of(sheared.out).size() == 3);
}

TEST_CASE("cholesky subcommand") {
  const Result r = call({"cholesky", "--u", "1,1"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("residual").get<double>() <= 1e-12);
  CHECK(j.at("B")[0][0].get<double>() == doctest::Approx(std::sqrt(1.5)));
  CHECK(j.at("det_squared").get<double>() == doctest::Approx(3.0));
}

TEST_CASE("volumes subcommand") {
  const Result r = call({"volumes", "--target", "stable", "--d", "2", "--T", "2", "--eps", "0.2"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("absolute").get<double>() == doctest::Approx(0.0303964).epsilon(1e-6));
  CHECK(j.at("exponent") == 1);

  const Result s = call({"volumes", "--target", "spherical", "--d", "2", "--T", "2", "--radius", "pi/6", "--ratio-to", "1"});
  CHECK(s.code == 0);
  CHECK(json::parse(s.out).at("limit_density").get<double>() == doctest::Approx(0.318310).epsilon(1e-6));

  const Result g = call({"volumes", "--target", "grenier-stable", "--d", "3", "--T", "1", "--alphas", "1,1", "--gammas", "2,2",
                         "--lo", "-0.1,-0.1", "--hi", "0.1,0.1"});
  CHECK(g.code == 0);
  CHECK(json::parse(g.out).at("absolute").is_null());
}

TEST_CASE("decompose subcommand") {
  const Result r = call({"decompose", "--M", "2,1;1,1", "--reduce", "gl"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("y")[0].get<double>() == doctest::Approx(1.0));
  CHECK(j.at("prefix") == "none");
  CHECK(j.contains("gamma"));
  for (const char* key : {"n", "a", "k", "x", "ys", "height", "kprime"}) CHECK(j.contains(key));
  CHECK(call({"decompose", "--M", "identity", "--d", "5", "--reduce", "sl"}).code == 3);
  CHECK(call({"decompose", "--M", "2,0;0,1"}).code == 2);
}

TEST_CASE("membership subcommand") {
  const fs::path dir = scratch_dir();
  write_file(dir / "target.json", R"({"kind": "stable", "T": 1, "eps": "1/5"})");
  const Result r = call({"membership", "--d", "2", "--target", (dir / "target.json").string(), "--x", "1/2", "--t",
                         "4.605170185988092"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("source") == json::array({1, 2}));

  const Result none = call({"membership", "--d", "2", "--target", (dir / "target.json").string(), "--x", "0.3", "--t", "0.5",
                            "--method", "direct"});
  CHECK(none.code == 0);
  CHECK(none.out == "none\n");
}

TEST_CASE("duplicates subcommand uses exact rationals") {
  const Result r = call({"duplicates", "--L", "1,0;1/2,1", "--s", "4"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("duplicate") == true);
  CHECK(j.at("exact") == true);
  CHECK(json::parse(call({"duplicates", "--L", "1,0;1/2,1", "--s", "1"}).out).at("duplicate") == false);
  CHECK(json::parse(call({"duplicates", "--L", "identity", "--d", "3"}).out).at("kind") == "torus");
}

TEST_CASE("check subcommands return 0 on pass and 1 on failure") {
  const Result m = call({"marklof-check", "--d", "2", "--Q", "100000"});
  CHECK(m.code == 0);
  CHECK(json::parse(m.out).at("pass") == true);
  CHECK(call({"marklof-check", "--d", "2", "--Q", "50", "--tolerance", "1e-9"}).code == 1);
  CHECK(call({"disjointness-sample", "--d", "2", "--n", "100"}).code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(call({"farey", "--bogus"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"--help"}).code == 0);
  const Result help = call({"sthe-run", "--help"});
  CHECK(help.code == 0);

  const fs::path dir = scratch_dir();
  write_file(dir / "broken.json", "{ not json");
  CHECK(call({"sthe-run", "--config", (dir / "broken.json").string()}).code == 2);
  write_file(dir / "unknown.json", R"({"d": 2, "A": {"lo": [0], "hi": [1]}, "target": {"kind": "stable", "eps": 0.2}, "color": 1})");
  CHECK(call({"sthe-run", "--config", (dir / "unknown.json").string()}).code == 2);
  CHECK(call({"farey", "--d", "2", "--Q", "2", "--L", "2,0;0,1"}).code == 2);
}

TEST_CASE("help documents the CSV columns") {
  std::ostringstream out, err;
  run({"--help"}, out, err);
  const std::string text = out.str() + err.str();
  CHECK(text.find("t,T,Q,estimate,predicted,rel_error,count,seconds") != std::string::npos);
}

TEST_CASE("sthe-run manifest round trip") {
  const fs::path dir = scratch_dir();
  write_file(dir / "cfg.json", R"({
    "d": 2, "L": [["2", "1"], ["1", "1"]], "A": {"lo": [0], "hi": [1]},
    "target": {"kind": "stable", "T": 1, "eps": "1/5"},
    "t_schedule": [6, 7, 8], "estimator": "monte-carlo", "samples": 20000, "seed": 5, "tolerance": 0.5
  })");
  const fs::path csv1 = dir / "a.csv", csv2 = dir / "b.csv", sum = dir / "s.json", man = dir / "m.json";
  const Result r1 = call({"sthe-run", "--config", (dir / "cfg.json").string(), "--out", csv1.string(), "--summary", sum.string(),
                          "--manifest", man.string()});
  CHECK(r1.code == 0);
  const json m = json::parse(read_file(man));
  CHECK(m.at("command") == "sthe-run");
  CHECK(m.at("seed") == 5);
  CHECK(m.at("sha256").at(csv1.string()).get<std::string>().size() == 64);
  CHECK(m.contains("version"));

  const Result r2 = call({"sthe-run", "--config", man.string(), "--out", csv2.string()});
  CHECK(r2.code == 0);
  CHECK(data_rows(read_file(csv1)) == data_rows(read_file(csv2)));
  CHECK(lines_of(read_file(csv1)).size() == 4);
  const json s = json::parse(read_file(sum));
  CHECK(s.at("results").size() == 3);
}

TEST_CASE("sthe-run exits 1 when the tolerance check fails") {
  const fs::path dir = scratch_dir();
  write_file(dir / "tight.json", R"({
    "d": 2, "A": {"lo": [0], "hi": [1]}, "target": {"kind": "stable", "eps": 0.2},
    "t_schedule": [2, 3], "tolerance": 1e-9
  })");
  CHECK(call({"sthe-run", "--config", (dir / "tight.json").string()}).code == 1);
}

TEST_CASE("numeric expressions") {
  const ParsedNumber a = parse_number("3/2");
  REQUIRE(a.exact.has_value());
  CHECK(*a.exact == Rational(3, 2));
  CHECK(a.value == 1.5);
  const ParsedNumber b = parse_number("-(1 + 2) * 4 / 6");
  CHECK(*b.exact == Rational(-2));
  const ParsedNumber c = parse_number("sqrt(2)/2");
  CHECK_FALSE(c.exact.has_value());
  CHECK(c.value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(parse_number("pi/6").value == doctest::Approx(std::numbers::pi / 6).epsilon(1e-15));
  CHECK(parse_number("2.5e-1").value == 0.25);
  CHECK_FALSE(parse_number("2.5").exact.has_value());
  CHECK(*parse_number("123456789012345678901234567890/10").exact == Rational(BigInt("12345678901234567890123456789")));
  CHECK_THROWS_AS(parse_number("1/0"), Error);
  CHECK_THROWS_AS(parse_number("2 +"), Error);
  CHECK_THROWS_AS(parse_number(""), Error);
}

TEST_CASE("config parsing") {
  using horolab::cli::ConfigError;
  const json cfg = json::parse(R"({"d": 2, "L": "identity", "A": {"center": [0.5], "radius": 0.25},
    "target": {"kind": "stable", "eps": 0.2}, "estimator": "grid", "samples": 100})");
  const ExperimentConfig c = horolab::cli::experiment_of(cfg);
  CHECK(c.A.ball_radius.has_value());
  CHECK(c.t_schedule == default_schedule(2));
  CHECK(c.estimator == Estimator::grid);
  const json exact = json::parse(R"({"d": 2, "L": [["1", "0"], ["1/2", "1"]], "A": {"lo": [0], "hi": [1]},
    "target": {"kind": "stable", "eps": 0.2}})");
  const ExperimentConfig e = horolab::cli::experiment_of(exact);
  REQUIRE(e.L_exact.has_value());
  CHECK((*e.L_exact)[1][0] == Rational(1, 2));
  json bad = exact;
  bad["T_rule"] = json{{"kind", "sideways"}};
  CHECK_THROWS_AS(horolab::cli::experiment_of(bad), ConfigError);
  bad = exact;
  bad["target"]["kind"] = "wobbly";
  CHECK_THROWS_AS(horolab::cli::experiment_of(bad), ConfigError);
}
