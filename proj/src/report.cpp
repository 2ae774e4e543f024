#include "hml/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include "json.hpp"

#include "hml/function_text.hpp"

namespace hml {
namespace {

// Non-finite values have no JSON number form; they are written as strings.
std::string number_text(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return render_real(x);
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double x) {
  return std::isfinite(x) ? number_text(x) : json_string(number_text(x));
}

std::string json_value(const RecordValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return json_number(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return json_string(x);
        } else {
          std::string out = "[";
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) out += ',';
            out += json_number(x[i]);
          }
          return out + "]";
        }
      },
      v);
}

std::string json_object(const std::vector<std::pair<std::string, RecordValue>>& fields) {
  std::string out = "{";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += json_string(fields[i].first) + ":" + json_value(fields[i].second);
  }
  return out + "}";
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_row(std::ostream& os, std::size_t index, const std::string& type, const std::string& tag,
             const std::string& field, const std::string& value) {
  os << index << ',' << csv_cell(type) << ',' << csv_cell(tag) << ',' << csv_cell(field) << ','
     << csv_cell(value) << '\n';
}

void csv_fields(std::ostream& os, std::size_t index, const std::string& type, const std::string& tag,
                const std::vector<std::pair<std::string, RecordValue>>& fields) {
  for (const auto& [name, v] : fields) {
    if (const auto* vec = std::get_if<std::vector<double>>(&v)) {
      for (std::size_t i = 0; i < vec->size(); ++i)
        csv_row(os, index, type, tag, name + "[" + std::to_string(i) + "]", number_text((*vec)[i]));
      continue;
    }
    std::string text = std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, double>) return number_text(x);
          else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
          else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
          else if constexpr (std::is_same_v<T, std::string>) return x;
          else return {};
        },
        v);
    csv_row(os, index, type, tag, name, text);
  }
}

std::vector<std::pair<std::string, RecordValue>> header_fields(const SuiteReport& report) {
  std::vector<std::pair<std::string, RecordValue>> f;
  f.emplace_back("record", std::string("header"));
  f.emplace_back("tool_version", report.tool_version);
  f.emplace_back("timestamp", report.timestamp);
  for (const auto& kv : report.config.fields) f.emplace_back("config." + kv.first, kv.second);
  return f;
}

std::vector<std::pair<std::string, RecordValue>> entry_fields(const Record& rec) {
  std::vector<std::pair<std::string, RecordValue>> f;
  f.emplace_back("pass", rec.pass);
  f.emplace_back("informational", rec.informational);
  for (const auto& kv : rec.fields) f.push_back(kv);
  return f;
}

std::vector<std::pair<std::string, RecordValue>> summary_fields(const SuiteReport& report) {
  std::int64_t passed = 0;
  std::int64_t failed = 0;
  std::int64_t informational = 0;
  for (const Record& r : report.entries) {
    if (r.informational) ++informational;
    else if (r.pass) ++passed;
    else ++failed;
  }
  std::vector<std::pair<std::string, RecordValue>> f;
  f.emplace_back("entries", static_cast<std::int64_t>(report.entries.size()));
  f.emplace_back("passed", passed);
  f.emplace_back("failed", failed);
  f.emplace_back("informational", informational);
  f.emplace_back("overall_pass", report.overall_pass());
  return f;
}

std::vector<double> complex_pair(cplx z) { return {z.real(), z.imag()}; }

}  // namespace

bool SuiteReport::overall_pass() const noexcept {
  for (const Record& r : entries)
    if (!r.informational && !r.pass) return false;
  return true;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Record config_record(const RunConfig& cfg) {
  Record r;
  r.type = "config";
  r.add("command", cfg.command);
  r.add("fn", cfg.function);
  r.add("p", cfg.p);
  r.add("q", cfg.q);
  r.add("r", cfg.r);
  r.add("r_schedule_first", cfg.schedule.j_first);
  r.add("r_schedule_last", cfg.schedule.j_last);
  r.add("tol", cfg.quadrature.tolerance);
  r.add("theta_min", cfg.quadrature.theta_init);
  r.add("grade_depth", cfg.quadrature.grade_depth);
  std::string checks;
  for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
    if (i) checks += ',';
    checks += to_string(cfg.checks[i]);
  }
  r.add("checks", checks);
  r.add("format", cfg.format == OutputFormat::csv ? "csv" : "json");
  r.add("golden", cfg.golden);
  return r;
}

Record to_record(const IdentityReport& rep) {
  Record r;
  r.type = "identity";
  r.tag = to_string(rep.tag);
  r.pass = rep.pass && rep.converged;
  r.add("fn", rep.function);
  r.add("p", rep.p);
  r.add("q", rep.q);
  r.add("r", rep.r);
  r.add("lhs", rep.lhs);
  r.add("rhs", rep.rhs);
  r.add("abs_residual", rep.abs_residual);
  r.add("rel_residual", rep.rel_residual);
  r.add("budget", rep.budget);
  r.add("tolerance", rep.tolerance);
  r.add("identity_pass", rep.pass);
  r.add("converged", rep.converged);
  for (const auto& [name, v] : rep.diagnostics) r.add("diag." + name, v);
  return r;
}

Record to_record(const RateProbeResult& res) {
  Record r;
  r.type = "rate";
  r.tag = "rate-probe";
  r.pass = res.verdict == RateVerdict::consistent;
  r.add("fn", res.function);
  r.add("p", res.p);
  r.add("q", res.q);
  r.add("radii", res.radii);
  r.add("derivs", res.derivs);
  r.add("products", res.products);
  r.add("normalized", res.normalized);
  r.add("beta", res.beta);
  r.add("beta_stderr", res.beta_stderr);
  r.add("fit_residual", res.fit_residual);
  r.add("tail_start", res.tail_start);
  r.add("truncated", res.truncated);
  r.add("verdict", to_string(res.verdict));
  r.add("converged", res.converged);
  return r;
}

Record to_record(const LimitReport& rep) {
  Record r;
  r.type = "lemma1";
  r.tag = rep.kernel;
  r.pass = rep.pass && rep.converged;
  r.add("fn", rep.function);
  r.add("p", rep.p);
  r.add("q", rep.q);
  r.add("z0", complex_pair(rep.center));
  r.add("r", rep.r);
  r.add("eps", rep.eps);
  r.add("values", rep.values);
  r.add("expected_limit", rep.expected_limit);
  r.add("final_deviation", rep.final_deviation);
  r.add("slope", rep.slope);
  r.add("slope_bound", rep.slope_bound);
  r.add("classification", rep.classification);
  r.add("converged", rep.converged);
  return r;
}

Record to_record(const MonotonicityResult& res, const std::string& function, double p) {
  Record r;
  r.type = "monotonicity";
  r.pass = res.pass;
  r.add("fn", function);
  r.add("p", p);
  r.add("radii", res.radii);
  r.add("means", res.means);
  r.add("max_violation", res.max_violation);
  return r;
}

Record to_record(const LogConvexityResult& res, const std::string& function, double p) {
  Record r;
  r.type = "logconvexity";
  r.pass = res.pass;
  r.add("fn", function);
  r.add("p", p);
  r.add("radii", res.radii);
  r.add("log_norms", res.log_norms);
  r.add("second_differences", res.second_differences);
  r.add("min_second_difference", res.min_second_difference);
  return r;
}

Record to_record(const MembershipScanResult& res, const std::string& function,
                 const MeanParams& params, Membership hint) {
  Record r;
  r.type = "membership";
  r.tag = to_string(res.classification);
  const bool classified = res.classification != MembershipClass::inconclusive && hint != Membership::unknown;
  r.informational = !classified;
  r.pass = !classified || ((res.classification == MembershipClass::bounded) == (hint == Membership::member));
  r.add("fn", function);
  r.add("p", params.p);
  r.add("q", params.q);
  r.add("radii", res.radii);
  r.add("norms", res.norms);
  r.add("sup_estimate", res.sup_estimate);
  r.add("hint", to_string(hint));
  return r;
}

Record integral_record(const std::string& type, const std::string& function,
                       const MeanParams& params, double r, const IntegralResult& res) {
  Record rec;
  rec.type = type;
  rec.pass = res.converged;
  rec.add("fn", function);
  rec.add("p", params.p);
  rec.add("q", params.q);
  rec.add("r", r);
  rec.add("value", res.value);
  rec.add("error", res.error);
  rec.add("nodes", res.nodes);
  rec.add("levels", res.levels);
  rec.add("converged", res.converged);
  return rec;
}

Record error_record(const std::string& type, const std::string& tag, const std::string& function,
                    const std::string& message) {
  Record r;
  r.type = type;
  r.tag = tag;
  r.pass = false;
  r.add("fn", function);
  r.add("error", message);
  return r;
}

void write_jsonl(std::ostream& os, const SuiteReport& report) {
  os << json_object(header_fields(report)) << '\n';
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const Record& rec = report.entries[i];
    std::vector<std::pair<std::string, RecordValue>> f;
    f.emplace_back("record", std::string("entry"));
    f.emplace_back("index", static_cast<std::int64_t>(i + 1));
    f.emplace_back("type", rec.type);
    f.emplace_back("tag", rec.tag);
    for (auto& kv : entry_fields(rec)) f.push_back(std::move(kv));
    os << json_object(f) << '\n';
  }
  auto s = summary_fields(report);
  s.insert(s.begin(), {"record", std::string("summary")});
  os << json_object(s) << '\n';
}

void write_csv(std::ostream& os, const SuiteReport& report) {
  os << "index,type,tag,field,value\n";
  auto header = header_fields(report);
  header.erase(header.begin());
  csv_fields(os, 0, "header", "", header);
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const Record& rec = report.entries[i];
    csv_fields(os, i + 1, rec.type, rec.tag, entry_fields(rec));
  }
  csv_fields(os, report.entries.size() + 1, "summary", "", summary_fields(report));
}

void write_report(std::ostream& os, const SuiteReport& report, OutputFormat format) {
  if (format == OutputFormat::csv) write_csv(os, report);
  else write_jsonl(os, report);
}

}  // namespace hml
