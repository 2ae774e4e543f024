#include "hml/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hml/errors.hpp"
#include "hml/extrapolation.hpp"
#include "hml/function_text.hpp"
#include "hml/parallel.hpp"

namespace hml {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct TagName {
  IdentityTag tag;
  const char* name;
};

constexpr TagName kTagNames[] = {
    {IdentityTag::growth, "growth"},
    {IdentityTag::lemma2, "lemma2"},
    {IdentityTag::theorem1, "theorem1"},
    {IdentityTag::corollary_finite, "corollary-finite"},
    {IdentityTag::corollary_limit, "corollary-limit"},
    {IdentityTag::hardy_stein, "hardy-stein"},
};

std::string describe(const AnalyticFunction& f) {
  try {
    return render_function(f);
  } catch (const Error&) {
    return "<nested>";
  }
}

IdentityReport start(IdentityTag tag, const AnalyticFunction& f, const MeanParams& params, double r,
                     const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  checked_radius(r);
  zeros_in_disk(f, r);
  IdentityReport rep;
  rep.tag = tag;
  rep.function = describe(f);
  rep.p = params.p;
  rep.q = params.q;
  rep.r = r;
  rep.tolerance = spec.tolerance;
  return rep;
}

double abs_f0_pow(const AnalyticFunction& f, double p) { return std::pow(std::abs(eval(f, 0.0)), p); }

void note(IdentityReport& rep, const char* name, const IntegralResult& res) {
  rep.diagnostics.emplace_back(name, res.value);
  rep.diagnostics.emplace_back(std::string(name) + ".error", res.error);
  rep.converged = rep.converged && res.converged;
}

}  // namespace

const char* to_string(IdentityTag tag) noexcept {
  for (const auto& t : kTagNames)
    if (t.tag == tag) return t.name;
  return "unknown";
}

std::optional<IdentityTag> identity_tag_from_string(const std::string& s) {
  for (const auto& t : kTagNames)
    if (s == t.name) return t.tag;
  return std::nullopt;
}

std::vector<IdentityTag> all_identity_tags() {
  std::vector<IdentityTag> out;
  for (const auto& t : kTagNames) out.push_back(t.tag);
  return out;
}

void finalize(IdentityReport& rep) {
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.rel_residual = scale > 0.0 ? rep.abs_residual / scale : 0.0;
  const double allowed = std::max(rep.budget, rep.tolerance * std::max(1.0, std::abs(rep.lhs)));
  rep.pass = std::isfinite(rep.abs_residual) && rep.abs_residual <= allowed;
}

IdentityReport check_growth_identity(const AnalyticFunction& f, const MeanParams& params, double r,
                                     const QuadratureSpec& spec) {
  IdentityReport rep = start(IdentityTag::growth, f, params, r, spec);
  const Fields fields(f, params);
  const IntegralResult d = circle_mean_deriv(fields, r, spec);
  const IntegralResult g = disk_integral_G(fields, r, Kernel::one(), spec);
  note(rep, "mean_deriv", d);
  note(rep, "int_G", g);
  rep.lhs = kTwoPi * r * d.value;
  rep.rhs = g.value;
  rep.budget = kTwoPi * r * d.error + g.error;
  finalize(rep);
  return rep;
}

IdentityReport check_lemma2_identity(const AnalyticFunction& f, const MeanParams& params, double r,
                                     const QuadratureSpec& spec) {
  IdentityReport rep = start(IdentityTag::lemma2, f, params, r, spec);
  const Fields fields(f, params);
  const IntegralResult m = circle_mean(fields, r, spec);
  const IntegralResult g = disk_integral_G(fields, r, Kernel::log_r_over_abs(r), spec);
  note(rep, "mean", m);
  note(rep, "int_logr_G", g);
  const double f0 = abs_f0_pow(f, params.p);
  rep.diagnostics.emplace_back("abs_f0_pow", f0);
  rep.lhs = kTwoPi * m.value - kTwoPi * f0;
  rep.rhs = g.value;
  rep.budget = kTwoPi * m.error + g.error;
  finalize(rep);
  return rep;
}

IdentityReport check_theorem1_identity(const AnalyticFunction& f, const MeanParams& params,
                                       double r, const QuadratureSpec& spec) {
  IdentityReport rep = start(IdentityTag::theorem1, f, params, r, spec);
  const Fields fields(f, params);
  const IntegralResult m = circle_mean(fields, r, spec);
  const IntegralResult d = circle_mean_deriv(fields, r, spec);
  const IntegralResult g = disk_integral_G(fields, r, Kernel::log_one_over_abs(), spec);
  note(rep, "mean", m);
  note(rep, "mean_deriv", d);
  note(rep, "int_log1_G", g);
  const double f0 = abs_f0_pow(f, params.p);
  rep.diagnostics.emplace_back("abs_f0_pow", f0);
  const double c = kTwoPi * r * std::log(r);
  rep.lhs = kTwoPi * m.value - c * d.value - kTwoPi * f0;
  rep.rhs = g.value;
  rep.budget = kTwoPi * m.error + std::abs(c) * d.error + g.error;
  finalize(rep);
  return rep;
}

namespace {

// One radius of the finite corollary: the two area integrals and the boundary term.
struct CorollarySample {
  IntegralResult mean;
  IntegralResult deriv;
  IntegralResult g;
  IntegralResult w;
  double area_side() const { return g.value + 4.0 * w.value; }
  double area_error() const { return g.error + 4.0 * w.error; }
};

CorollarySample corollary_sample(const Fields& fields, double r, const QuadratureSpec& spec,
                                 bool need_deriv) {
  CorollarySample s;
  s.mean = circle_mean(fields, r, spec);
  if (need_deriv) s.deriv = circle_mean_deriv(fields, r, spec);
  s.g = disk_integral_G(fields, r, Kernel::one_minus_abs_sq(), spec);
  s.w = disk_integral_W(fields, r, Kernel::one(), spec);
  return s;
}

}  // namespace

IdentityReport check_corollary_finite(const AnalyticFunction& f, const MeanParams& params, double r,
                                      const QuadratureSpec& spec) {
  IdentityReport rep = start(IdentityTag::corollary_finite, f, params, r, spec);
  const Fields fields(f, params);
  const CorollarySample s = corollary_sample(fields, r, spec, true);
  note(rep, "mean", s.mean);
  note(rep, "mean_deriv", s.deriv);
  note(rep, "int_1ms2_G", s.g);
  note(rep, "int_W", s.w);
  const double a = 1.0 - r * r;
  rep.lhs = s.area_side();
  rep.rhs = kTwoPi * r * (a * s.deriv.value + 2.0 * r * s.mean.value);
  rep.budget = s.area_error() + kTwoPi * r * (a * s.deriv.error + 2.0 * r * s.mean.error);
  finalize(rep);
  return rep;
}

std::vector<double> RadiusSchedule::radii() const {
  validate();
  std::vector<double> out;
  for (int j = j_first; j <= j_last; ++j) out.push_back(1.0 - std::ldexp(1.0, -j));
  return out;
}

void RadiusSchedule::validate() const {
  if (j_first < 1 || j_last > 30 || j_last - j_first < 2)
    throw InvariantError("radius schedule needs 1 <= j_first, j_last <= 30 and at least three radii");
}

IdentityReport check_corollary_limit(const AnalyticFunction& f, const MeanParams& params,
                                     const RadiusSchedule& schedule, const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  if (membership_hint(f, params.p, params.q) == Membership::non_member)
    throw PreconditionError("corollary limit refused: f is not in the weighted Hardy space");
  const std::vector<double> radii = schedule.radii();
  for (double r : radii) zeros_in_disk(f, r);

  IdentityReport rep;
  rep.tag = IdentityTag::corollary_limit;
  rep.function = describe(f);
  rep.p = params.p;
  rep.q = params.q;
  rep.r = 1.0;
  rep.tolerance = spec.tolerance;

  const Fields fields(f, params);
  std::vector<CorollarySample> samples(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    samples[i] = corollary_sample(fields, radii[i], spec, false);
  });

  std::vector<double> lhs_seq;
  std::vector<double> rhs_seq;
  for (const CorollarySample& s : samples) {
    lhs_seq.push_back(2.0 * kTwoPi * s.mean.value);
    rhs_seq.push_back(s.area_side());
    rep.converged = rep.converged && s.mean.converged && s.g.converged && s.w.converged;
  }
  const Extrapolation lx = richardson_halving(lhs_seq);
  const Extrapolation rx = richardson_halving(rhs_seq);
  rep.lhs = lx.value;
  rep.rhs = rx.value;
  rep.converged = rep.converged && lx.converged && rx.converged;
  const CorollarySample& last = samples.back();
  rep.budget = lx.spread + rx.spread + 2.0 * kTwoPi * last.mean.error + last.area_error();
  rep.diagnostics.emplace_back("lhs_order", lx.order);
  rep.diagnostics.emplace_back("rhs_order", rx.order);
  rep.diagnostics.emplace_back("lhs_spread", lx.spread);
  rep.diagnostics.emplace_back("rhs_spread", rx.spread);
  rep.diagnostics.emplace_back("lhs_last", lhs_seq.back());
  rep.diagnostics.emplace_back("rhs_last", rhs_seq.back());
  rep.diagnostics.emplace_back("r_last", radii.back());
  finalize(rep);
  return rep;
}

IdentityReport check_hardy_stein(const AnalyticFunction& f, double p, double r,
                                 const QuadratureSpec& spec) {
  const MeanParams params(p, 0.0);
  IdentityReport rep = start(IdentityTag::hardy_stein, f, params, r, spec);
  const Fields fields(f, params);
  const IntegralResult m = circle_mean(fields, r, spec);
  const IntegralResult g = disk_integral_G(fields, r, Kernel::log_r_over_abs(r), spec);
  note(rep, "mean", m);
  note(rep, "int_logr_G", g);
  const double f0 = abs_f0_pow(f, p);
  rep.diagnostics.emplace_back("abs_f0_pow", f0);
  rep.lhs = m.value;
  rep.rhs = f0 + g.value / kTwoPi;
  rep.budget = m.error + g.error / kTwoPi;
  finalize(rep);
  return rep;
}

IdentityReport run_identity(IdentityTag tag, const AnalyticFunction& f, const MeanParams& params,
                            double r, const RadiusSchedule& schedule, const QuadratureSpec& spec) {
  switch (tag) {
    case IdentityTag::growth: return check_growth_identity(f, params, r, spec);
    case IdentityTag::lemma2: return check_lemma2_identity(f, params, r, spec);
    case IdentityTag::theorem1: return check_theorem1_identity(f, params, r, spec);
    case IdentityTag::corollary_finite: return check_corollary_finite(f, params, r, spec);
    case IdentityTag::corollary_limit: return check_corollary_limit(f, params, schedule, spec);
    case IdentityTag::hardy_stein: return check_hardy_stein(f, params.p, r, spec);
  }
  throw InvariantError("unknown identity tag");
}

std::vector<double> eps_schedule(int j_first, int j_last) {
  if (j_first < 0 || j_last > 40 || j_last - j_first < 2)
    throw InvariantError("eps schedule needs 0 <= j_first, j_last <= 40 and at least three points");
  std::vector<double> out;
  for (int j = j_first; j <= j_last; ++j) out.push_back(std::ldexp(1.0, -j));
  return out;
}

LimitReport check_lemma1_limits(const AnalyticFunction& f, const MeanParams& params, cplx center,
                                const Kernel& kernel, double r, const std::vector<double>& eps,
                                const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  checked_radius(r);
  if (eps.size() < 3) throw InvariantError("eps schedule needs at least three points");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1])) throw InvariantError("eps schedule must be strictly decreasing");

  const std::vector<Zero> zeros = f.zeros_in_unit_disk();
  int order = 0;
  for (const Zero& z : zeros)
    if (std::abs(z.location - center) <= 1e-9) order = z.order;
  const bool at_origin = std::abs(center) <= 1e-15;
  if (!at_origin && order == 0)
    throw PreconditionError("ring center must be the origin or a zero of f");

  LimitReport rep;
  rep.function = describe(f);
  rep.p = params.p;
  rep.q = params.q;
  rep.center = center;
  rep.kernel = kernel.name();
  rep.r = r;
  rep.eps = eps;
  rep.expected_limit =
      at_origin && kernel.singular_at_origin() ? kTwoPi * abs_f0_pow(f, params.p) : 0.0;
  // The ring bound |I| <= C eps^min(kp, k+1) holds at a zero away from the origin.
  rep.slope_bound = !at_origin ? std::min(order * params.p, order + 1.0) - 0.2
                               : std::numeric_limits<double>::quiet_NaN();

  const Fields fields(f, params);
  std::vector<IntegralResult> res(eps.size());
  parallel_for(eps.size(), [&](std::size_t i) {
    res[i] = ring_integral(fields, center, eps[i], kernel, r, spec);
  });
  std::vector<double> dev;
  for (const IntegralResult& x : res) {
    rep.values.push_back(x.value);
    rep.converged = rep.converged && x.converged;
    dev.push_back(std::abs(x.value - rep.expected_limit));
  }
  rep.final_deviation = dev.back();

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    if (dev[i] > 0.0) {
      lx.push_back(std::log(eps[i]));
      ly.push_back(std::log(dev[i]));
    }
  }
  rep.slope = lx.size() >= 2 ? fit_line(lx, ly).slope : std::numeric_limits<double>::infinity();

  bool monotone = true;
  for (std::size_t i = 1; i < dev.size(); ++i) monotone = monotone && dev[i] <= dev[i - 1];
  const bool close = rep.final_deviation <= kLimitTolerance;
  const bool decaying = rep.expected_limit == 0.0 && monotone && rep.slope > 0.0;
  const bool slope_ok = std::isnan(rep.slope_bound) || rep.slope >= rep.slope_bound;
  rep.classification = close ? "converged" : decaying ? "decaying" : "not-converging";
  rep.pass = (close || decaying) && slope_ok;
  return rep;
}

}  // namespace hml
