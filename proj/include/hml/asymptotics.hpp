#pragma once

// Boundary behaviour as r -> 1: the derivative rate of the weighted mean,
// the classical monotonicity and log-convexity of unweighted means, and a
// heuristic membership scan.

#include <string>
#include <vector>

#include "hml/identities.hpp"

namespace hml {

enum class RateVerdict { consistent, inconsistent, inconclusive };
const char* to_string(RateVerdict v) noexcept;

struct RateProbeResult {
  std::string function;
  double p = 0.0;
  double q = 0.0;
  std::vector<double> radii;
  /// d/dr of the p-th power mean at each radius.
  std::vector<double> derivs;
  /// (1 - r) D(r).
  std::vector<double> products;
  /// D(r) divided by the mean itself, (d/dr M) / M.
  std::vector<double> normalized;
  /// Least-squares exponent of |D| against 1/(1 - r) over the last four radii.
  double beta = 0.0;
  double beta_stderr = 0.0;
  double fit_residual = 0.0;
  /// Index where the strictly decreasing tail of |products| begins.
  int tail_start = 0;
  /// Radii dropped because their quadrature did not converge.
  int truncated = 0;
  RateVerdict verdict = RateVerdict::inconclusive;
  bool converged = true;
};

/// Consistent with the theorem when |products| strictly decreases over at
/// least the last four radii, the last product is below half the value where
/// that decrease starts, and beta < 1 - 2 stderr.  Refuses anything but a
/// known member with PreconditionError.
RateProbeResult rate_probe(const AnalyticFunction& f, const MeanParams& params,
                           const RadiusSchedule& schedule = {2, 10},
                           const QuadratureSpec& spec = {});

struct MonotonicityResult {
  std::vector<double> radii;
  std::vector<double> means;
  /// Largest drop M(r_i) - M(r_{i+1}) beyond the slack, 0 when none.
  double max_violation = 0.0;
  bool pass = false;
};

inline constexpr double kMonotoneSlack = 1e-10;
inline constexpr double kConvexitySlack = 1e-8;

/// Default grid 0.1, 0.15, ..., 0.9.
std::vector<double> default_monotone_grid();
/// Default 16 radii geometric from 0.1 to 0.9.
std::vector<double> default_convexity_grid();

MonotonicityResult monotonicity_check(const AnalyticFunction& f, double p,
                                      const std::vector<double>& radii,
                                      const QuadratureSpec& spec = {});

struct LogConvexityResult {
  std::vector<double> radii;
  std::vector<double> log_norms;
  /// Second divided differences of log ||f_r||_p against log r.
  std::vector<double> second_differences;
  double min_second_difference = 0.0;
  bool pass = false;
};

/// Radii must be geometric (equal ratios); refuses f vanishing on the grid.
LogConvexityResult logconvexity_check(const AnalyticFunction& f, double p,
                                      const std::vector<double>& radii,
                                      const QuadratureSpec& spec = {});

enum class MembershipClass { bounded, diverging, inconclusive };
const char* to_string(MembershipClass m) noexcept;

struct MembershipScanResult {
  std::vector<double> radii;
  /// ||f_r||_{p,q} (the p-th root of the weighted mean).
  std::vector<double> norms;
  double sup_estimate = 0.0;
  MembershipClass classification = MembershipClass::inconclusive;
};

MembershipScanResult membership_scan(const AnalyticFunction& f, const MeanParams& params,
                                     const RadiusSchedule& schedule = {1, 12},
                                     const QuadratureSpec& spec = {});

}  // namespace hml
