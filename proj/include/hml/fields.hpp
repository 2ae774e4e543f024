#pragma once

// Pointwise integrands built from W(z) = |f(z)|^p (1 - |z|^2)^q.

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hml/function_model.hpp"

namespace hml {

/// Points closer than this to a zero are reported singular when the field blows up there.
inline constexpr double kFieldGuard = 1e-10;

struct MeanParams {
  double p = 2.0;
  double q = 0.0;

  MeanParams() = default;
  MeanParams(double p_, double q_);
  void validate() const;
};

/// Validates 0 < r < 1.
double checked_radius(double r);

struct FieldValue {
  double value = 0.0;
  bool singular = false;
  double singularity_distance = std::numeric_limits<double>::infinity();
};

struct GradientValue {
  std::array<double, 2> grad{0.0, 0.0};
  bool singular = false;
  double singularity_distance = std::numeric_limits<double>::infinity();
};

/// Which scalar field an area integral runs over.
enum class FieldKind { laplacian_G, weight_W, radial_deriv_W };

/// Binds f and (p, q) together with the zero list used for singularity detection.
class Fields {
 public:
  Fields(AnalyticFunction f, MeanParams params);

  const AnalyticFunction& function() const noexcept { return f_; }
  const MeanParams& params() const noexcept { return params_; }
  std::span<const Zero> zeros() const noexcept { return zeros_; }

  double W(cplx z) const;
  GradientValue grad_W(cplx z) const;
  FieldValue G(cplx z) const;
  /// dW/dr along the ray through z.
  FieldValue radial_deriv_W(cplx z) const;

  /// Local power of |z - z0| that the field follows near a zero of the given order.
  double singular_exponent(FieldKind kind, int order) const noexcept;
  /// False when |f|^p is smooth (p an even integer), so zeros need no special mesh.
  bool zeros_are_nonsmooth() const noexcept { return !p_even_integer_; }
  /// False when |f|^p is smooth at a zero of this order (kp an even integer).
  bool zero_is_nonsmooth(int order) const noexcept {
    const double half = order * params_.p / 2.0;
    return half != std::floor(half);
  }

  /// Batched evaluation of G, W or dW/dr at points z.  Entries that fall inside the
  /// guard of a singular zero get NaN and set the return flag.
  bool eval_batch(FieldKind kind, simd::ConstComplexSpan z, std::span<double> out) const;

 private:
  struct Nearest {
    double distance;
    int order;
    cplx location;
  };
  Nearest nearest_zero(cplx z) const noexcept;
  double abs_pow(double abs_sq, double exponent) const noexcept;
  bool singular_for_G(double abs_sq, Nearest near) const noexcept;
  double lap_at_zero(cplx z) const;

  AnalyticFunction f_;
  MeanParams params_;
  std::vector<Zero> zeros_;
  bool p_even_integer_;
};

double eval_W(const AnalyticFunction& f, const MeanParams& params, cplx z);
GradientValue eval_grad_W(const AnalyticFunction& f, const MeanParams& params, cplx z);
/// Throws SingularPointError at a zero where G is unbounded.
FieldValue eval_G(const AnalyticFunction& f, const MeanParams& params, cplx z);
FieldValue eval_radial_deriv_W(const AnalyticFunction& f, const MeanParams& params, cplx z);

}  // namespace hml
