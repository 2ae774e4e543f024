#pragma once

// Report records and their JSON-lines and CSV serializations.  Every float is
// written with 17 significant digits, so both formats carry identical values.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hml/asymptotics.hpp"

namespace hml {

inline constexpr const char* kToolVersion = "1.0.0";

enum class OutputFormat { jsonl, csv };

struct RunConfig {
  std::string command;
  std::string function;
  double p = 2.0;
  double q = 0.0;
  double r = 0.5;
  RadiusSchedule schedule;
  QuadratureSpec quadrature;
  std::vector<IdentityTag> checks;
  OutputFormat format = OutputFormat::jsonl;
  std::string out_path;
  bool golden = false;
};

using RecordValue = std::variant<double, std::int64_t, bool, std::string, std::vector<double>>;

/// One report entry: a type, a tag and an ordered list of named values.
struct Record {
  std::string type;
  std::string tag;
  bool pass = true;
  /// Informational entries never fail a suite.
  bool informational = false;
  std::vector<std::pair<std::string, RecordValue>> fields;

  Record& add(std::string name, RecordValue v) {
    fields.emplace_back(std::move(name), std::move(v));
    return *this;
  }
  // Exact overloads keep doubles, bools and integers from converting into each other.
  Record& add(std::string name, double v) { return add(std::move(name), RecordValue(v)); }
  Record& add(std::string name, bool v) { return add(std::move(name), RecordValue(v)); }
  Record& add(std::string name, int v) { return add(std::move(name), RecordValue(std::int64_t{v})); }
  Record& add(std::string name, std::int64_t v) { return add(std::move(name), RecordValue(v)); }
  Record& add(std::string name, const char* v) { return add(std::move(name), RecordValue(std::string(v))); }
  Record& add(std::string name, std::string v) { return add(std::move(name), RecordValue(std::move(v))); }
  Record& add(std::string name, std::vector<double> v) {
    return add(std::move(name), RecordValue(std::move(v)));
  }
};

struct SuiteReport {
  std::string tool_version = kToolVersion;
  std::string timestamp;
  Record config;
  std::vector<Record> entries;

  bool overall_pass() const noexcept;
};

/// ISO 8601 UTC.
std::string utc_timestamp();

Record config_record(const RunConfig& cfg);
Record to_record(const IdentityReport& rep);
Record to_record(const RateProbeResult& res);
Record to_record(const LimitReport& rep);
Record to_record(const MonotonicityResult& res, const std::string& function, double p);
Record to_record(const LogConvexityResult& res, const std::string& function, double p);
Record to_record(const MembershipScanResult& res, const std::string& function,
                 const MeanParams& params, Membership hint);
/// type is "mean" or "deriv".
Record integral_record(const std::string& type, const std::string& function,
                       const MeanParams& params, double r, const IntegralResult& res);
/// A check that threw; always a failure.
Record error_record(const std::string& type, const std::string& tag, const std::string& function,
                    const std::string& message);

/// Header line, one line per entry, summary line.
void write_jsonl(std::ostream& os, const SuiteReport& report);
/// Long format: index,type,tag,field,value.  Index 0 is the header, the last index the summary.
void write_csv(std::ostream& os, const SuiteReport& report);
void write_report(std::ostream& os, const SuiteReport& report, OutputFormat format);

}  // namespace hml
