#include "hml/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "hml/errors.hpp"
#include "hml/extrapolation.hpp"
#include "hml/function_text.hpp"
#include "hml/parallel.hpp"

namespace hml {
namespace {

std::string describe(const AnalyticFunction& f) {
  try {
    return render_function(f);
  } catch (const Error&) {
    return "<nested>";
  }
}

void check_grid(const std::vector<double>& radii, std::size_t min_size) {
  if (radii.size() < min_size)
    throw InvariantError("radius grid needs at least " + std::to_string(min_size) + " points");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    checked_radius(radii[i]);
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw InvariantError("radius grid must be strictly increasing");
  }
}

std::vector<IntegralResult> means_on(const Fields& fields, const std::vector<double>& radii,
                                     const QuadratureSpec& spec) {
  std::vector<IntegralResult> out(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { out[i] = circle_mean(fields, radii[i], spec); });
  return out;
}

}  // namespace

const char* to_string(RateVerdict v) noexcept {
  switch (v) {
    case RateVerdict::consistent: return "consistent-with-theorem";
    case RateVerdict::inconsistent: return "inconsistent";
    case RateVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* to_string(MembershipClass m) noexcept {
  switch (m) {
    case MembershipClass::bounded: return "bounded";
    case MembershipClass::diverging: return "diverging";
    case MembershipClass::inconclusive: return "inconclusive";
  }
  return "unknown";
}

RateProbeResult rate_probe(const AnalyticFunction& f, const MeanParams& params,
                           const RadiusSchedule& schedule, const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  if (membership_hint(f, params.p, params.q) != Membership::member)
    throw PreconditionError("rate probe refused: f is not a known member of the weighted Hardy space");
  const std::vector<double> radii = schedule.radii();

  RateProbeResult res;
  res.function = describe(f);
  res.p = params.p;
  res.q = params.q;

  const Fields fields(f, params);
  std::vector<IntegralResult> d(radii.size());
  std::vector<IntegralResult> m(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    d[i] = circle_mean_deriv(fields, radii[i], spec);
    m[i] = circle_mean(fields, radii[i], spec);
  });

  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!d[i].converged || !m[i].converged) {
      res.truncated = static_cast<int>(radii.size() - i);
      res.converged = false;
      break;
    }
    res.radii.push_back(radii[i]);
    res.derivs.push_back(d[i].value);
    res.products.push_back((1.0 - radii[i]) * d[i].value);
    res.normalized.push_back(m[i].value != 0.0 ? d[i].value / m[i].value : 0.0);
  }

  const std::size_t n = res.radii.size();
  if (n < 4) {
    res.verdict = RateVerdict::inconclusive;
    return res;
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = n - 4; i < n; ++i) {
    if (res.derivs[i] == 0.0) continue;
    lx.push_back(-std::log1p(-res.radii[i]));
    ly.push_back(std::log(std::abs(res.derivs[i])));
  }
  // With D identically zero the products are all zero and trivially o(1).
  const bool all_zero = lx.empty() && std::all_of(res.derivs.begin(), res.derivs.end(),
                                                  [](double x) { return x == 0.0; });
  if (all_zero) {
    res.verdict = RateVerdict::consistent;
    return res;
  }
  if (lx.size() < 4) {
    res.verdict = RateVerdict::inconclusive;
    return res;
  }
  const LinearFit fit = fit_line(lx, ly);
  res.beta = fit.slope;
  res.beta_stderr = fit.slope_stderr;
  res.fit_residual = fit.residual;

  // The decreasing tail of |products| must cover at least the last four radii;
  // the halving test compares against where that tail starts, so a sign change
  // of D near the first radius does not count as the initial value.
  std::size_t tail = n - 1;
  while (tail > 0 && std::abs(res.products[tail]) < std::abs(res.products[tail - 1])) --tail;
  res.tail_start = static_cast<int>(tail);
  const bool decreasing = tail + 4 <= n;
  const bool halved = std::abs(res.products.back()) < 0.5 * std::abs(res.products[tail]);
  const bool slow = res.beta < 1.0 - 2.0 * res.beta_stderr;
  res.verdict = decreasing && halved && slow ? RateVerdict::consistent : RateVerdict::inconsistent;
  return res;
}

std::vector<double> default_monotone_grid() {
  std::vector<double> out;
  for (int i = 0; i <= 16; ++i) out.push_back(0.1 + 0.05 * i);
  return out;
}

std::vector<double> default_convexity_grid() {
  std::vector<double> out;
  const double ratio = std::pow(9.0, 1.0 / 15.0);
  for (int i = 0; i < 16; ++i) out.push_back(0.1 * std::pow(ratio, i));
  out.back() = 0.9;
  return out;
}

MonotonicityResult monotonicity_check(const AnalyticFunction& f, double p,
                                      const std::vector<double>& radii,
                                      const QuadratureSpec& spec) {
  spec.validate();
  check_grid(radii, 16);
  const Fields fields(f, MeanParams(p, 0.0));
  const std::vector<IntegralResult> m = means_on(fields, radii, spec);
  MonotonicityResult res;
  res.radii = radii;
  res.pass = true;
  for (std::size_t i = 0; i < m.size(); ++i) {
    res.means.push_back(m[i].value);
    if (i == 0) continue;
    const double drop = m[i - 1].value - m[i].value;
    res.max_violation = std::max(res.max_violation, drop);
    if (drop > kMonotoneSlack * std::max(1.0, std::abs(m[i - 1].value))) res.pass = false;
  }
  return res;
}

LogConvexityResult logconvexity_check(const AnalyticFunction& f, double p,
                                      const std::vector<double>& radii,
                                      const QuadratureSpec& spec) {
  spec.validate();
  check_grid(radii, 3);
  const double ratio = radii[1] / radii[0];
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (std::abs(radii[i] / radii[i - 1] - ratio) > 1e-9 * ratio)
      throw InvariantError("log-convexity grid must be geometric");
  const Fields fields(f, MeanParams(p, 0.0));
  const std::vector<IntegralResult> m = means_on(fields, radii, spec);
  LogConvexityResult res;
  res.radii = radii;
  for (const IntegralResult& x : m) {
    if (!(x.value > 0.0)) throw PreconditionError("log-convexity refused: f vanishes on the grid");
    res.log_norms.push_back(std::log(x.value) / p);
  }
  res.min_second_difference = 0.0;
  for (std::size_t i = 1; i + 1 < res.log_norms.size(); ++i) {
    const double d2 = res.log_norms[i - 1] - 2.0 * res.log_norms[i] + res.log_norms[i + 1];
    res.second_differences.push_back(d2);
    res.min_second_difference = i == 1 ? d2 : std::min(res.min_second_difference, d2);
  }
  res.pass = res.min_second_difference >= -kConvexitySlack;
  return res;
}

MembershipScanResult membership_scan(const AnalyticFunction& f, const MeanParams& params,
                                     const RadiusSchedule& schedule, const QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  MembershipScanResult res;
  res.radii = schedule.radii();
  const Fields fields(f, params);
  const std::vector<IntegralResult> m = means_on(fields, res.radii, spec);
  for (const IntegralResult& x : m) res.norms.push_back(std::pow(std::max(x.value, 0.0), 1.0 / params.p));
  res.sup_estimate = *std::max_element(res.norms.begin(), res.norms.end());

  const std::size_t n = res.norms.size();
  const double first = res.norms.front();
  const double last = res.norms.back();
  const double prev = res.norms[n - 2];
  const bool tail_nonincreasing = res.norms[n - 1] <= res.norms[n - 2] && res.norms[n - 2] <= res.norms[n - 3];
  if (first > 0.0 && last / first > 10.0) {
    res.classification = MembershipClass::diverging;
  } else if (std::abs(last - prev) <= 1e-3 * std::max(std::abs(last), 1e-300) || tail_nonincreasing) {
    res.classification = MembershipClass::bounded;
  } else {
    res.classification = MembershipClass::inconclusive;
  }
  return res;
}

}  // namespace hml
