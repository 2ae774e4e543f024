#include "hml/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "hml/errors.hpp"
#include "hml/function_text.hpp"
#include "hml/golden.hpp"
#include "hml/identities.hpp"

namespace hml {
namespace {

// Raised for anything the user must fix in the invocation.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string fn;
  double p = 2.0;
  double q = 0.0;
  double r = 0.5;
  std::string r_schedule;
  std::string eps_schedule = "3..14";
  double tol = QuadratureSpec{}.tolerance;
  int theta_min = QuadratureSpec{}.theta_init;
  int grade_depth = 0;
  std::string checks;
  std::string format = "json";
  std::string out;
  bool golden = false;
  std::string z0 = "0";
  std::string kernel = "log_r";
};

std::pair<int, int> parse_range(const std::string& text, const std::string& field) {
  static const std::regex pattern(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw ParseError(field, "expected 'j0..j1'");
  return {std::stoi(m.str(1)), std::stoi(m.str(2))};
}

std::vector<IdentityTag> parse_checks(const std::string& text) {
  if (text.empty() || text == "all") return all_identity_tags();
  std::vector<IdentityTag> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto tag = identity_tag_from_string(item);
    if (!tag) throw ParseError("check", "unknown identity tag '" + item + "'");
    out.push_back(*tag);
  }
  return out;
}

Kernel parse_kernel(const std::string& text, double r) {
  if (text == "log_r") return Kernel::log_r_over_abs(r);
  if (text == "log_one") return Kernel::log_one_over_abs();
  if (text == "one_minus_abs_sq") return Kernel::one_minus_abs_sq();
  throw ParseError("kernel", "expected log_r, log_one or one_minus_abs_sq");
}

RunConfig make_config(const std::string& command, const Options& o, bool needs_fn) {
  RunConfig cfg;
  cfg.command = command;
  cfg.function = o.fn;
  cfg.p = o.p;
  cfg.q = o.q;
  cfg.r = o.r;
  cfg.golden = o.golden;
  cfg.out_path = o.out;
  if (o.format == "json" || o.format == "jsonl") cfg.format = OutputFormat::jsonl;
  else if (o.format == "csv") cfg.format = OutputFormat::csv;
  else throw ParseError("format", "expected json or csv");
  cfg.quadrature.tolerance = o.tol;
  cfg.quadrature.theta_init = o.theta_min;
  cfg.quadrature.grade_depth = o.grade_depth;
  try {
    cfg.quadrature.validate();
  } catch (const InvariantError& e) {
    throw ParseError("quadrature", e.what());
  }
  try {
    MeanParams(o.p, o.q).validate();
  } catch (const InvariantError& e) {
    throw ParseError("p/q", e.what());
  }
  if (!o.r_schedule.empty()) {
    const auto [a, b] = parse_range(o.r_schedule, "r-schedule");
    cfg.schedule = {a, b};
    try {
      cfg.schedule.validate();
    } catch (const InvariantError& e) {
      throw ParseError("r-schedule", e.what());
    }
  }
  cfg.checks = parse_checks(o.checks);
  if (needs_fn && o.fn.empty()) throw ParseError("fn", "--fn is required");
  return cfg;
}

void check_radius_option(double r) {
  try {
    checked_radius(r);
  } catch (const InvariantError& e) {
    throw ParseError("r", e.what());
  }
}

SuiteReport run_mean(const RunConfig& cfg, bool deriv) {
  check_radius_option(cfg.r);
  const AnalyticFunction f = parse_function(cfg.function);
  const MeanParams mp(cfg.p, cfg.q);
  SuiteReport rep;
  const IntegralResult res = deriv ? circle_mean_deriv(f, mp, cfg.r, cfg.quadrature)
                                   : circle_mean(f, mp, cfg.r, cfg.quadrature);
  rep.entries.push_back(integral_record(deriv ? "deriv" : "mean", render_function(f), mp, cfg.r, res));
  return rep;
}

SuiteReport run_identities(const RunConfig& cfg, const AnalyticFunction& f) {
  const MeanParams mp(cfg.p, cfg.q);
  SuiteReport rep;
  for (IdentityTag tag : cfg.checks) {
    if (tag != IdentityTag::corollary_limit) check_radius_option(cfg.r);
    rep.entries.push_back(to_record(run_identity(tag, f, mp, cfg.r, cfg.schedule, cfg.quadrature)));
  }
  return rep;
}

SuiteReport run_lemma1(const RunConfig& cfg, const Options& o) {
  check_radius_option(cfg.r);
  const AnalyticFunction f = parse_function(cfg.function);
  const cplx z0 = parse_complex(o.z0, "z0");
  const Kernel kernel = parse_kernel(o.kernel, cfg.r);
  const auto [a, b] = parse_range(o.eps_schedule, "eps-schedule");
  std::vector<double> eps;
  try {
    eps = eps_schedule(a, b);
  } catch (const InvariantError& e) {
    throw ParseError("eps-schedule", e.what());
  }
  SuiteReport rep;
  rep.entries.push_back(to_record(
      check_lemma1_limits(f, MeanParams(cfg.p, cfg.q), z0, kernel, cfg.r, eps, cfg.quadrature)));
  return rep;
}

SuiteReport run_rate(const RunConfig& cfg, const Options& o) {
  const AnalyticFunction f = parse_function(cfg.function);
  const RadiusSchedule schedule = o.r_schedule.empty() ? RadiusSchedule{2, 10} : cfg.schedule;
  SuiteReport rep;
  rep.entries.push_back(to_record(rate_probe(f, MeanParams(cfg.p, cfg.q), schedule, cfg.quadrature)));
  return rep;
}

int emit(const RunConfig& cfg, SuiteReport rep, std::ostream& out, std::ostream& err) {
  rep.timestamp = utc_timestamp();
  rep.config = config_record(cfg);
  if (cfg.out_path.empty()) {
    write_report(out, rep, cfg.format);
  } else {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + cfg.out_path + "'");
    write_report(file, rep, cfg.format);
  }
  std::size_t failed = 0;
  for (const Record& r : rep.entries)
    if (!r.informational && !r.pass) ++failed;
  if (failed) err << "hml: " << failed << " of " << rep.entries.size() << " entries failed\n";
  return rep.overall_pass() ? kExitPass : kExitFail;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Hardy-space mean values and identity checks", "hml"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_fn) {
    if (with_fn) sub->add_option("--fn", o.fn, "function description, e.g. poly:0,0,1");
    sub->add_option("--p", o.p, "exponent p > 0");
    sub->add_option("--q", o.q, "weight exponent q >= 0");
    sub->add_option("--tol", o.tol, "relative quadrature tolerance");
    sub->add_option("--theta-min", o.theta_min, "starting angular node count (power of two, >= 16)");
    sub->add_option("--grade-depth", o.grade_depth, "dyadic grading depth (0 = automatic)");
    sub->add_option("--format", o.format, "json or csv");
    sub->add_option("--out", o.out, "report path (default stdout)");
  };

  CLI::App* mean = app.add_subcommand("mean", "p-th power weighted circle mean");
  add_common(mean, true);
  mean->add_option("--r", o.r, "radius in (0, 1)");
  CLI::App* deriv = app.add_subcommand("deriv", "radial derivative of the circle mean");
  add_common(deriv, true);
  deriv->add_option("--r", o.r, "radius in (0, 1)");
  CLI::App* identity = app.add_subcommand("identity", "check Green-type identities");
  add_common(identity, true);
  identity->add_option("--r", o.r, "radius in (0, 1)");
  identity->add_option("--r-schedule", o.r_schedule, "j0..j1 for r_j = 1 - 2^-j");
  identity->add_option("--check", o.checks, "comma-separated identity tags, or all");
  CLI::App* lemma1 = app.add_subcommand("lemma1", "small-ring integrals around z0");
  add_common(lemma1, true);
  lemma1->add_option("--r", o.r, "outer radius in (0, 1)");
  lemma1->add_option("--z0", o.z0, "ring center (origin or a zero of f)");
  lemma1->add_option("--kernel", o.kernel, "log_r, log_one or one_minus_abs_sq");
  lemma1->add_option("--eps-schedule", o.eps_schedule, "j0..j1 for eps_j = 2^-j");
  CLI::App* rate = app.add_subcommand("rate", "probe the derivative rate as r -> 1");
  add_common(rate, true);
  rate->add_option("--r-schedule", o.r_schedule, "j0..j1 for r_j = 1 - 2^-j");
  CLI::App* suite = app.add_subcommand("suite", "run the golden suite or a check list");
  add_common(suite, true);
  suite->add_option("--r", o.r, "radius in (0, 1)");
  suite->add_option("--r-schedule", o.r_schedule, "j0..j1 for r_j = 1 - 2^-j");
  suite->add_option("--check", o.checks, "comma-separated identity tags, or all");
  suite->add_flag("--golden", o.golden, "run the curated golden families");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "hml: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (mean->parsed() || deriv->parsed()) {
      const RunConfig cfg = make_config(mean->parsed() ? "mean" : "deriv", o, true);
      return emit(cfg, run_mean(cfg, deriv->parsed()), out, err);
    }
    if (identity->parsed()) {
      const RunConfig cfg = make_config("identity", o, true);
      return emit(cfg, run_identities(cfg, parse_function(cfg.function)), out, err);
    }
    if (lemma1->parsed()) {
      const RunConfig cfg = make_config("lemma1", o, true);
      return emit(cfg, run_lemma1(cfg, o), out, err);
    }
    if (rate->parsed()) {
      const RunConfig cfg = make_config("rate", o, true);
      return emit(cfg, run_rate(cfg, o), out, err);
    }
    const RunConfig cfg = make_config("suite", o, !o.golden);
    if (cfg.golden) return emit(cfg, golden_suite(cfg.quadrature), out, err);
    return emit(cfg, run_identities(cfg, parse_function(cfg.function)), out, err);
  } catch (const ParseError& e) {
    err << "hml: config error in field '" << e.field() << "': " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "hml: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "hml: refused: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GeometryError& e) {
    err << "hml: geometry error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "hml: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CircleProximityError& e) {
    err << "hml: " << e.what() << " (retry with r perturbed by about " << kRadiusPerturbation << ")\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "hml: numerical failure: " << e.what() << "\n";
    return kExitFail;
  }
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_command(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace hml
