#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hml/cli.hpp"
#include "json.hpp"

using namespace hml;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hml");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> entries(const std::string& jsonl) {
  std::vector<json> out;
  std::istringstream in(jsonl);
  for (std::string line; std::getline(in, line);) {
    json j = json::parse(line);
    if (j["record"] == "entry") out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

TEST_CASE("mean and derivative subcommands") {
  Run r = run({"mean", "--fn", "const:1", "--p", "3", "--q", "2", "--r", "0.5"});
  CHECK(r.code == kExitPass);
  auto e = entries(r.out);
  REQUIRE(e.size() == 1);
  CHECK(e[0]["value"].get<double>() == doctest::Approx(0.5625).epsilon(1e-15));

  r = run({"deriv", "--fn", "poly:0,1", "--p", "2", "--r", "0.5"});
  CHECK(r.code == kExitPass);
  e = entries(r.out);
  CHECK(e[0]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("identity subcommand") {
  const Run r = run({"identity", "--fn", "poly:0,0,1", "--p", "2", "--q", "0", "--r", "0.8", "--check", "growth"});
  CHECK(r.code == kExitPass);
  const auto e = entries(r.out);
  REQUIRE(e.size() == 1);
  CHECK(e[0]["tag"] == "growth");
  CHECK(e[0]["lhs"].get<double>() == doctest::Approx(8 * 3.141592653589793 * 0.4096).epsilon(1e-12));

  const Run all = run({"identity", "--fn", "poly:0.5,0,1", "--p", "1.5", "--q", "0", "--r", "0.6", "--check", "all",
                       "--r-schedule", "1..8"});
  CHECK(all.code == kExitPass);
  CHECK(entries(all.out).size() == 6);
}

TEST_CASE("lemma1 and rate subcommands") {
  Run r = run({"lemma1", "--fn", "poly:1,1", "--p", "2", "--r", "0.9"});
  CHECK(r.code == kExitPass);
  // A schedule stopping at eps = 2^-5 has not reached the limit.
  r = run({"lemma1", "--fn", "poly:1,1", "--p", "2", "--r", "0.9", "--eps-schedule", "3..5"});
  CHECK(r.code == kExitFail);
  CHECK(r.err.find("failed") != std::string::npos);

  r = run({"rate", "--fn", "poly:0,0,1", "--p", "2"});
  CHECK(r.code == kExitPass);
  CHECK(entries(r.out)[0]["verdict"] == "consistent-with-theorem");
}

TEST_CASE("usage and configuration errors exit with 2") {
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"frobnicate"},
      {"mean", "--fn", "poly:0,1", "--p", "abc"},
      {"mean", "--p", "2"},
      {"mean", "--fn", "poly:0,1", "--p", "0"},
      {"mean", "--fn", "poly:0,1", "--q", "-1"},
      {"mean", "--fn", "poly:0,1", "--r", "1"},
      {"mean", "--fn", "blaschke:1.2"},
      {"mean", "--fn", "poly:0,1", "--theta-min", "24"},
      {"mean", "--fn", "poly:0,1", "--format", "xml"},
      {"identity", "--fn", "poly:0,1", "--check", "nope"},
      {"identity", "--fn", "poly:0,1", "--r-schedule", "5"},
      {"identity", "--fn", "binom:0.9", "--p", "2", "--check", "corollary-limit"},
      {"lemma1", "--fn", "poly:1,1", "--z0", "0.3"},
      {"lemma1", "--fn", "poly:1,1", "--kernel", "gauss"},
      {"lemma1", "--fn", "poly:0,1", "--z0", "0", "--r", "0.9", "--eps-schedule", "0..4"},
      {"rate", "--fn", "binom:2", "--p", "1"},
      {"mean", "--fn", "blaschke:0.5", "--p", "0.5", "--r", "0.5", "--out", "/nonexistent/dir/x"},
      {"suite", "--golden", "--theta-min", "1"},
  };
  for (const auto& args : bad) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    INFO(joined);
    const Run r = run(args);
    CHECK(r.code == kExitUsage);
    CHECK_FALSE(r.err.empty());
  }
  const Run diag = run({"mean", "--fn", "blaschke:1.2"});
  CHECK(diag.err.find("zeros[0]") != std::string::npos);
}

TEST_CASE("zero on the integration circle is a usage error") {
  const Run r = run({"identity", "--fn", "blaschke:0.5", "--p", "0.5", "--r", "0.5", "--check", "growth"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("perturb") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const Run r = run({"--help"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("identity") != std::string::npos);
}

TEST_CASE("reports go to --out in the requested format") {
  const auto path = std::filesystem::temp_directory_path() / "hml_cli_test.csv";
  const Run r = run({"mean", "--fn", "poly:1,1", "--p", "2", "--r", "0.6", "--format", "csv", "--out", path.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "index,type,tag,field,value");
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(body.find("1,mean,,value,1.3599999999999999\n") != std::string::npos);
  std::filesystem::remove(path);
}
