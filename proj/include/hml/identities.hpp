#pragma once

// Both sides of each weighted Green-type identity, with residuals measured
// against the error estimates of the integrals that produced them.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hml/quadrature.hpp"

namespace hml {

enum class IdentityTag {
  growth,            // 2 pi r D(r) = int_{D_r} G
  lemma2,            // int W - 2 pi |f(0)|^p = int_{D_r} log(r/|z|) G
  theorem1,          // int W - 2 pi r log r D(r) - 2 pi |f(0)|^p = int_{D_r} log(1/|z|) G
  corollary_finite,  // int (1-|z|^2) G + 4 int W = r int [(1-r^2) dW/dr + 2 r W]
  corollary_limit,   // the same as r -> 1, by extrapolation
  hardy_stein,       // q = 0 mean = |f(0)|^p + (1/2pi) int log(r/|z|) G
};

const char* to_string(IdentityTag tag) noexcept;
std::optional<IdentityTag> identity_tag_from_string(const std::string& s);
std::vector<IdentityTag> all_identity_tags();

struct IdentityReport {
  IdentityTag tag = IdentityTag::growth;
  std::string function;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double budget = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Every component integral met its tolerance.
  bool converged = true;
  /// Named extra quantities (fitted orders, spreads, component values).
  std::vector<std::pair<std::string, double>> diagnostics;
};

/// Fills residuals and the pass flag from lhs, rhs, budget and tolerance.
void finalize(IdentityReport& report);

IdentityReport check_growth_identity(const AnalyticFunction& f, const MeanParams& params, double r,
                                     const QuadratureSpec& spec = {});
IdentityReport check_lemma2_identity(const AnalyticFunction& f, const MeanParams& params, double r,
                                     const QuadratureSpec& spec = {});
IdentityReport check_theorem1_identity(const AnalyticFunction& f, const MeanParams& params,
                                       double r, const QuadratureSpec& spec = {});
IdentityReport check_corollary_finite(const AnalyticFunction& f, const MeanParams& params, double r,
                                      const QuadratureSpec& spec = {});

/// Radii r_j = 1 - 2^-j for j in [j_first, j_last].
struct RadiusSchedule {
  int j_first = 1;
  int j_last = 10;
  std::vector<double> radii() const;
  void validate() const;
};

/// Refuses non-members with PreconditionError.
IdentityReport check_corollary_limit(const AnalyticFunction& f, const MeanParams& params,
                                     const RadiusSchedule& schedule = {},
                                     const QuadratureSpec& spec = {});
IdentityReport check_hardy_stein(const AnalyticFunction& f, double p, double r,
                                 const QuadratureSpec& spec = {});

IdentityReport run_identity(IdentityTag tag, const AnalyticFunction& f, const MeanParams& params,
                            double r, const RadiusSchedule& schedule, const QuadratureSpec& spec);

/// Ring integrals I_eps (or J_eps) around z0 as eps -> 0.
struct LimitReport {
  std::string function;
  double p = 0.0;
  double q = 0.0;
  cplx center;
  std::string kernel;
  double r = 0.0;
  std::vector<double> eps;
  std::vector<double> values;
  double expected_limit = 0.0;
  double final_deviation = 0.0;
  /// Log-log slope of |I_eps - limit| against eps.
  double slope = 0.0;
  /// One-sided lower bound on the slope; NaN when none applies.
  double slope_bound = 0.0;
  std::string classification;  // "converged", "decaying", "not-converging"
  bool pass = false;
  bool converged = true;
};

inline constexpr double kLimitTolerance = 1e-5;

/// Geometric schedule eps = 2^-j, j in [j_first, j_last].
std::vector<double> eps_schedule(int j_first, int j_last);

/// z0 must be the origin or a zero of f.
LimitReport check_lemma1_limits(const AnalyticFunction& f, const MeanParams& params, cplx center,
                                const Kernel& kernel, double r, const std::vector<double>& eps,
                                const QuadratureSpec& spec = {});

}  // namespace hml
