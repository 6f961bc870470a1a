#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qdc");
  std::ostringstream out, err;
  Run r;
  r.code = qdc::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("qdc_cli_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("estimate emits CSV by default and JSON on request") {
  const auto csv = run({"estimate", "--n-max-log", "8"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("N,ratio_sqrt,ratio_log,d_with,d_without,flags\n16,", 0) == 0);
  const auto json = run({"--format", "json", "estimate", "--n-max-log", "8"});
  REQUIRE(json.code == 0);
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["rows"].size() == 5);
  CHECK(doc["params"]["kappa"] == 1.0);
}

TEST_CASE("global options work after the subcommand too") {
  const auto a = run({"--format", "json", "sense", "--shots", "200", "--trials", "1"});
  const auto b = run({"sense", "--shots", "200", "--trials", "1", "--format", "json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("threshold presets set kappa") {
  const auto r = run({"--format", "json", "estimate", "--threshold-preset", "10"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["params"]["kappa"].get<double>() > 10.0);
  CHECK(run({"estimate", "--threshold-preset", "3"}).code == 2);
}

TEST_CASE("every command is byte-identical under a fixed seed") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--seed", "7", "estimate"},
           {"--seed", "7", "qram"},
           {"--seed", "7", "protocol", "--adversary", "measuring", "--sessions", "5"},
           {"--seed", "7", "sense", "--shots", "500", "--trials", "2"}}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  CHECK(run({"--seed", "1", "sense", "--shots", "500"}).out != run({"--seed", "2", "sense", "--shots", "500"}).out);
}

TEST_CASE("qram demos") {
  const auto r = run({"qram", "--demo", "classical", "--data", "1,2,3,0", "--addresses", "3"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["demos"][0]["terms"][0]["basis"] == "11 00");
  const auto c = run({"--format", "csv", "qram", "--demo", "compress", "--unary", "0100"});
  REQUIRE(c.code == 0);
  CHECK(c.out == "demo,basis,re,im\ncompress_unary,01,1,0\n");
  const auto bad = run({"qram", "--demo", "compress", "--unary", "0110"});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("leaked weight") != std::string::npos);
  CHECK(run({"qram", "--demo", "classical", "--addresses", "9"}).code == 2);
  CHECK(run({"qram", "--demo", "classical", "--data", "1,x"}).code == 2);
}

TEST_CASE("protocol summary and transcript") {
  const auto path = std::filesystem::temp_directory_path() / "qdc_cli_test_transcript.jsonl";
  const auto r = run({"protocol", "--sessions", "2", "--transcript", path.string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["sessions"].size() == 2);
  CHECK(doc["summary"]["min_delivered_fidelity"].get<double>() > 1 - 1e-9);
  CHECK(doc["summary"]["max_privacy_metric"].get<double>() < 1e-10);
  std::ifstream in(path);
  int lines = 0;
  for (std::string line; std::getline(in, line); ++lines) CHECK(nlohmann::json::parse(line).contains("session"));
  CHECK(lines > 0);
  std::filesystem::remove(path);

  const auto csv = run({"--format", "csv", "protocol", "--senders", "3", "--receivers", "3", "--qdcs", "3"});
  CHECK(csv.out.rfind("session,sender,receiver,fidelity\n", 0) == 0);
  CHECK(run({"protocol", "--senders", "9"}).code == 2);
  CHECK(run({"protocol", "--adversary", "sneaky"}).code == 2);
}

TEST_CASE("config file values apply and flags override them") {
  const auto cfg = temp_file("cfg.json", R"({"seed": 3, "format": "json", "sense": {"shots": 300, "trials": 1}})");
  const auto from_file = run({"--config", cfg.string(), "sense"});
  REQUIRE(from_file.code == 0);
  const auto doc = nlohmann::json::parse(from_file.out);
  CHECK(doc["shots"] == 300);
  CHECK(doc["seed"] == 3);
  const auto flagged = run({"--config", cfg.string(), "--seed", "4", "sense", "--shots", "100"});
  const auto doc2 = nlohmann::json::parse(flagged.out);
  CHECK(doc2["shots"] == 100);
  CHECK(doc2["seed"] == 4);
  std::filesystem::remove(cfg);
}

TEST_CASE("configuration errors exit with code 2") {
  const auto broken = temp_file("broken.json", "{\n  \"seed\": 1,\n  oops\n}\n");
  const auto r = run({"--config", broken.string(), "estimate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  const auto unknown = temp_file("unknown.json", R"({"estimate": {"warp": 9}})");
  CHECK(run({"--config", unknown.string(), "estimate"}).code == 2);
  const auto top = temp_file("top.json", R"({"colour": "blue"})");
  CHECK(run({"--config", top.string(), "estimate"}).code == 2);
  const auto shots = temp_file("shots.json", R"({"sense": {"shots": 0}})");
  CHECK(run({"--config", shots.string(), "sense"}).code == 2);
  for (const auto& p : {broken, unknown, top, shots}) std::filesystem::remove(p);

  CHECK(run({"sense", "--shots", "0"}).code == 2);
  CHECK(run({"sense", "--phi", "-1"}).code == 2);
  CHECK(run({"estimate", "--p", "2"}).code == 2);
  CHECK(run({"estimate", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--config", "/nonexistent/qdc.json", "estimate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("infeasible estimates exit with code 3") {
  // Without outsourcing the ratio is 1 for every kappa, so no preset can reach 0.1.
  const auto r = run({"estimate", "--f-outsourced", "0", "--threshold-preset", "0.1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("threshold") != std::string::npos);
}

TEST_CASE("--out writes the payload to a file") {
  const auto path = std::filesystem::temp_directory_path() / "qdc_cli_test_out.csv";
  const auto r = run({"--out", path.string(), "estimate", "--n-max-log", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run({"estimate", "--n-max-log", "5"}).out);
  std::filesystem::remove(path);
}
