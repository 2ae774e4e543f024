#pragma once

// Circle means, their radial derivatives, small-ring contour integrals and
// kernel-weighted area integrals over D_r = {|z| < r}.
//
// Area integrals use a polar product mesh: Gauss-Legendre annular cells in
// the radius, the equispaced periodic rule in the angle.  Cells are graded
// dyadically toward the origin; every zero where |f|^p is not smooth gets a
// local polar patch of its own, blended into the global mesh with a smooth
// partition of unity, and graded toward the zero.  The innermost cell of each
// graded sequence is closed analytically from the known local power law.

#include <cstdint>
#include <string>

#include "hml/fields.hpp"

namespace hml {

enum class KernelKind { log_r_over_abs, log_one_over_abs, one, one_minus_abs_sq };

/// Radial weight functions appearing in the Green-type identities.
struct Kernel {
  KernelKind kind = KernelKind::one;
  double radius = 1.0;  // only used by log_r_over_abs

  static Kernel log_r_over_abs(double r) { return {KernelKind::log_r_over_abs, r}; }
  static Kernel log_one_over_abs() { return {KernelKind::log_one_over_abs, 1.0}; }
  static Kernel one() { return {KernelKind::one, 1.0}; }
  static Kernel one_minus_abs_sq() { return {KernelKind::one_minus_abs_sq, 1.0}; }

  bool singular_at_origin() const noexcept {
    return kind == KernelKind::log_r_over_abs || kind == KernelKind::log_one_over_abs;
  }
  /// K at modulus s.
  double value(double s) const noexcept;
  /// grad K at z, as a complex number.
  cplx gradient(cplx z) const noexcept;
  /// Integral of s^(a-1) K(s) over (0, h).
  double power_moment(double a, double h) const noexcept;

  std::string name() const;
};

struct QuadratureSpec {
  /// Starting angular node count; power of two, at least 16.
  int theta_init = 16;
  /// Angular doubling stops at 2^theta_cap_log2 nodes.
  int theta_cap_log2 = 20;
  /// Uniform annuli laid over [r_in, r_out] before refinement.
  int initial_annuli = 4;
  /// Dyadic grading depth toward the origin and each zero; 0 picks ceil(log2(1/tolerance)).
  int grade_depth = 0;
  double tolerance = 1e-7;
  int gauss_order = 10;
  /// Radial cell budget of one area integral.
  int max_cells = 6000;
  /// Halves every initial cell and doubles the starting angular count this many times.
  int refine = 0;

  void validate() const;
  int effective_grade_depth() const noexcept;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  std::int64_t nodes = 0;
  int levels = 0;
  bool converged = true;
};

// Fields-based overloads reuse the zero list; the AnalyticFunction overloads build it.

/// (1/2pi) int W(r e^{i theta}) d theta, the p-th power of the weighted mean.
IntegralResult circle_mean(const Fields& fields, double r, const QuadratureSpec& spec);
IntegralResult circle_mean(const AnalyticFunction& f, const MeanParams& params, double r,
                           const QuadratureSpec& spec = {});

/// d/dr of circle_mean, by differentiating under the integral.
IntegralResult circle_mean_deriv(const Fields& fields, double r, const QuadratureSpec& spec);
IntegralResult circle_mean_deriv(const AnalyticFunction& f, const MeanParams& params, double r,
                                 const QuadratureSpec& spec = {});

/// int over r_in < |z| < r_out of K(z) * field(z) dx dy.
IntegralResult annulus_integral(const Fields& fields, FieldKind field, double r_in, double r_out,
                                const Kernel& kernel, const QuadratureSpec& spec);

/// int over D_r of K(z) G(z) dx dy.
IntegralResult disk_integral_G(const Fields& fields, double r, const Kernel& kernel,
                               const QuadratureSpec& spec);
IntegralResult disk_integral_G(const AnalyticFunction& f, const MeanParams& params, double r,
                               const Kernel& kernel, const QuadratureSpec& spec = {});

/// int over D_r of weight(z) W(z) dx dy, weight in {one, one_minus_abs_sq}.
IntegralResult disk_integral_W(const Fields& fields, double r, const Kernel& weight,
                               const QuadratureSpec& spec);
IntegralResult disk_integral_W(const AnalyticFunction& f, const MeanParams& params, double r,
                               const Kernel& weight, const QuadratureSpec& spec = {});

/// Contour integral over |z - z0| = eps of (K dW/dn - W dK/dn), normal pointing away from z0.
IntegralResult ring_integral(const Fields& fields, cplx center, double eps, const Kernel& kernel,
                             double r, const QuadratureSpec& spec);
IntegralResult ring_integral(const AnalyticFunction& f, const MeanParams& params, cplx center,
                             double eps, const Kernel& kernel, double r,
                             const QuadratureSpec& spec = {});

}  // namespace hml
