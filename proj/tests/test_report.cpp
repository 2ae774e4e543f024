#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hml/errors.hpp"
#include "hml/function_text.hpp"
#include "hml/report.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace hml;
using nlohmann::json;

namespace {

// RFC 4180 rows, quoted cells may hold commas, quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rows.back().push_back(cell);
      cell.clear();
    } else if (c == '\n') {
      rows.back().push_back(cell);
      cell.clear();
      rows.emplace_back();
    } else {
      cell += c;
    }
  }
  if (rows.back().empty()) rows.pop_back();
  return rows;
}

// JSON value as the text the CSV writer would produce.
std::string as_csv_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return render_real(v.get<double>());
}

SuiteReport sample_report() {
  SuiteReport rep;
  rep.timestamp = "2026-01-02T03:04:05Z";
  RunConfig cfg;
  cfg.command = "suite";
  cfg.function = "poly:1,0.5-0.25i";
  rep.config = config_record(cfg);
  Record a;
  a.type = "identity";
  a.tag = "growth";
  a.add("x", 0.1).add("tiny", 5e-324).add("n", 7).add("flag", false);
  a.add("text", std::string("comma, \"quote\"\nnewline"));
  a.add("vec", std::vector<double>{1.0 / 3.0, -2.5e-17, std::numeric_limits<double>::quiet_NaN()});
  a.add("big", std::numeric_limits<double>::infinity());
  rep.entries.push_back(a);
  Record b;
  b.type = "membership";
  b.tag = "inconclusive";
  b.pass = false;
  b.informational = true;
  rep.entries.push_back(b);
  rep.entries.push_back(error_record("rate", "rate-probe", "binom:2", "refused"));
  return rep;
}

}  // namespace

TEST_CASE("function text round-trips") {
  const std::vector<AnalyticFunction> fs = {
      AnalyticFunction::polynomial({1.0, {0.5, -0.25}, 0.0, {1.0 / 3.0, 1e-300}}),
      AnalyticFunction::constant({-0.0, 2.0}),
      AnalyticFunction::rational({1.0, {0.0, 2.0}}, {3.0, -1.0}),
      AnalyticFunction::blaschke({{{0.5, 0.1}, 1}, {-0.3, 3}}, std::polar(1.0, 0.7)),
      AnalyticFunction::binomial(0.9),
      AnalyticFunction::scaled_rotation(AnalyticFunction::binomial(0.5), {2.0, -1.0}, 0.3),
  };
  std::mt19937_64 eng(3);
  for (const AnalyticFunction& f : fs) {
    const std::string text = render_function(f);
    const AnalyticFunction g = parse_function(text);
    CHECK(render_function(g) == text);
    for (int i = 0; i < 10; ++i) {
      const cplx z = oracle::random_point(eng, 0.9);
      CHECK(eval(g, z) == eval(f, z));
    }
  }
  CHECK(render_complex({1.0, -2.0}) == "1-2i");
  CHECK(render_complex({-0.5, 0.0}) == "-0.5+0i");
  CHECK(parse_complex("-3i", "c") == cplx(0.0, -3.0));
  CHECK(parse_complex("0.25+1e-3i", "c") == cplx(0.25, 1e-3));
  CHECK(render_real(0.1) == "0.10000000000000001");
  CHECK(std::abs(eval(parse_function("blaschke:0.5^2|-1"), 0.0) - cplx(-0.25, 0.0)) < 1e-15);
  CHECK(std::abs(eval(parse_function("poly:0,0,1*2@1.5707963267948966"), 0.5) - cplx(-0.5, 0.0)) < 1e-15);
}

TEST_CASE("malformed function text names the offending field") {
  for (const char* bad : {"poly:", "foo:1", "poly:1,x", "blaschke:1.2", "binom:0", "rat:1", "poly:1*0",
                          "blaschke:0.5^0", "const:1+i+i"}) {
    INFO(bad);
    try {
      parse_function(bad);
      CHECK(false);
    } catch (const ParseError& e) {
      CHECK_FALSE(e.field().empty());
    }
  }
}

TEST_CASE("JSON lines and CSV carry identical values") {
  const SuiteReport rep = sample_report();
  std::ostringstream js;
  std::ostringstream cs;
  write_jsonl(js, rep);
  write_csv(cs, rep);

  std::vector<json> lines;
  std::istringstream in(js.str());
  for (std::string line; std::getline(in, line);) lines.push_back(json::parse(line));
  REQUIRE(lines.size() == rep.entries.size() + 2);
  CHECK(lines.front()["record"] == "header");
  CHECK(lines.front()["tool_version"] == kToolVersion);
  CHECK(lines.front()["config.fn"] == "poly:1,0.5-0.25i");
  CHECK(lines.back()["record"] == "summary");
  CHECK(lines.back()["entries"] == 3);
  CHECK(lines.back()["failed"] == 1);
  CHECK(lines.back()["informational"] == 1);
  CHECK(lines.back()["overall_pass"] == false);

  const json& e = lines[1];
  CHECK(e["x"].get<double>() == 0.1);
  CHECK(e["tiny"].get<double>() == 5e-324);
  CHECK(e["n"].is_number_integer());
  CHECK(e["flag"] == false);
  CHECK(e["text"] == "comma, \"quote\"\nnewline");
  CHECK(e["vec"][0].get<double>() == 1.0 / 3.0);
  CHECK(e["vec"][2] == "nan");
  CHECK(e["big"] == "inf");

  // Every JSON field appears in the CSV with the same text.
  const auto rows = parse_csv(cs.str());
  REQUIRE(rows.front() == std::vector<std::string>{"index", "type", "tag", "field", "value"});
  std::map<std::pair<std::size_t, std::string>, std::string> csv;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 5);
    csv[{std::stoul(rows[i][0]), rows[i][3]}] = rows[i][4];
  }
  std::size_t compared = 0;
  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    for (const auto& [key, v] : lines[idx].items()) {
      if (key == "record" || key == "index" || key == "type" || key == "tag") continue;
      if (v.is_array()) {
        for (std::size_t k = 0; k < v.size(); ++k) {
          CHECK(csv.at({idx, key + "[" + std::to_string(k) + "]"}) == as_csv_text(v[k]));
          ++compared;
        }
      } else {
        CHECK(csv.at({idx, key}) == as_csv_text(v));
        ++compared;
      }
    }
  }
  CHECK(compared == csv.size());
}

TEST_CASE("suite verdict ignores informational entries") {
  SuiteReport rep;
  Record ok;
  ok.type = "identity";
  Record info;
  info.type = "membership";
  info.pass = false;
  info.informational = true;
  rep.entries = {ok, info};
  CHECK(rep.overall_pass());
  rep.entries.push_back(error_record("identity", "growth", "poly:1", "boom"));
  CHECK_FALSE(rep.overall_pass());
}

TEST_CASE("identity records carry both sides and the verdict") {
  const IdentityReport ir = check_growth_identity(AnalyticFunction::monomial(2), MeanParams(2.0, 0.0), 0.8);
  const Record rec = to_record(ir);
  CHECK(rec.type == "identity");
  CHECK(rec.tag == "growth");
  CHECK(rec.pass == ir.pass);
  std::map<std::string, RecordValue> m(rec.fields.begin(), rec.fields.end());
  CHECK(std::get<double>(m.at("lhs")) == ir.lhs);
  CHECK(std::get<double>(m.at("rhs")) == ir.rhs);
  CHECK(std::get<double>(m.at("p")) == 2.0);
}

TEST_CASE("timestamps are ISO 8601 UTC") {
  const std::string t = utc_timestamp();
  REQUIRE(t.size() == 20);
  CHECK(t[4] == '-');
  CHECK(t[10] == 'T');
  CHECK(t.back() == 'Z');
}
