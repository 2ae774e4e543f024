#pragma once

// Analytic test functions on the unit disk.
//
// Every model evaluates itself and its derivative in closed form and knows
// its zeros, so integrands never have to be differenced numerically and the
// quadrature layer can place singularity-adapted meshes.

#include <complex>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "hml/simd/kernels.hpp"

namespace hml {

using cplx = std::complex<double>;

inline constexpr int kMaxPolynomialDegree = 64;
/// Zeros closer than this to |z| = r make zeros_in_disk refuse r.
inline constexpr double kCircleGuard = 1e-8;
/// Suggested perturbation of r when the circle guard trips.
inline constexpr double kRadiusPerturbation = 1e-6;

struct Zero {
  cplx location;
  int order = 1;
  friend bool operator==(const Zero&, const Zero&) = default;
};

/// Dense complex polynomial, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() : Polynomial(std::vector<cplx>{0.0}) {}
  explicit Polynomial(std::vector<cplx> coeffs);

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == cplx{}; }

  cplx eval(cplx z) const noexcept;
  cplx eval_deriv(cplx z) const noexcept;
  Polynomial derivative() const;

  /// Batched p(z), p'(z) through the active SIMD kernel table.
  void eval_batch(simd::ConstComplexSpan z, simd::ComplexSpan value, simd::ComplexSpan deriv) const;
  void eval_batch(simd::ConstComplexSpan z, simd::ComplexSpan value) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::vector<cplx> coeffs_;
  std::vector<double> re_;
  std::vector<double> im_;
};

struct PolynomialFn {
  Polynomial poly;
  friend bool operator==(const PolynomialFn&, const PolynomialFn&) = default;
};

/// num/den with every root of den strictly outside the closed unit disk.
struct RationalFn {
  Polynomial num;
  Polynomial den;
  friend bool operator==(const RationalFn&, const RationalFn&) = default;
};

struct BlaschkeFactor {
  cplx zero;
  int multiplicity = 1;
  friend bool operator==(const BlaschkeFactor&, const BlaschkeFactor&) = default;
};

/// prefactor * prod ((a - z) / (1 - conj(a) z))^m.
struct BlaschkeFn {
  std::vector<BlaschkeFactor> factors;
  cplx prefactor{1.0, 0.0};
  friend bool operator==(const BlaschkeFn&, const BlaschkeFn&) = default;
};

/// Principal branch of (1 - z)^(-alpha).
struct BinomialFn {
  double alpha = 1.0;
  friend bool operator==(const BinomialFn&, const BinomialFn&) = default;
};

class AnalyticFunction;

/// scale * inner(exp(i rotation) z).
struct ScaledRotationFn {
  std::shared_ptr<const AnalyticFunction> inner;
  cplx scale{1.0, 0.0};
  double rotation = 0.0;
  friend bool operator==(const ScaledRotationFn& a, const ScaledRotationFn& b);
};

class AnalyticFunction {
 public:
  using Variant = std::variant<PolynomialFn, RationalFn, BlaschkeFn, BinomialFn, ScaledRotationFn>;

  static AnalyticFunction polynomial(std::vector<cplx> coeffs);
  static AnalyticFunction constant(cplx c);
  static AnalyticFunction monomial(int n, cplx c = 1.0);
  static AnalyticFunction rational(std::vector<cplx> num, std::vector<cplx> den);
  static AnalyticFunction blaschke(std::vector<BlaschkeFactor> factors, cplx prefactor = 1.0);
  static AnalyticFunction binomial(double alpha);
  static AnalyticFunction scaled_rotation(AnalyticFunction inner, cplx scale, double rotation);

  const Variant& variant() const noexcept { return *model_; }

  /// Every zero of the model in the plane (polynomial roots may lie outside the disk).
  std::span<const Zero> all_zeros() const noexcept { return *zeros_; }
  /// Zeros strictly inside the unit disk.
  std::vector<Zero> zeros_in_unit_disk() const;

  /// True when the model blows up somewhere on the unit circle.
  bool boundary_singular() const noexcept;

  friend bool operator==(const AnalyticFunction& a, const AnalyticFunction& b) {
    return *a.model_ == *b.model_;
  }

 private:
  AnalyticFunction(Variant v, std::vector<Zero> zeros);

  std::shared_ptr<const Variant> model_;
  std::shared_ptr<const std::vector<Zero>> zeros_;
};

cplx eval(const AnalyticFunction& f, cplx z);
cplx eval_deriv(const AnalyticFunction& f, cplx z);

/// f and f' at many points; polynomial and rational models go through the SIMD kernels.
void eval_batch(const AnalyticFunction& f, simd::ConstComplexSpan z, simd::ComplexSpan value,
                simd::ComplexSpan deriv);

/// Zeros with |location| < r, with multiplicity, ordered by modulus then argument.
/// Throws CircleProximityError if any zero is within kCircleGuard of |z| = r.
std::vector<Zero> zeros_in_disk(const AnalyticFunction& f, double r);

enum class Membership { member, non_member, unknown };

Membership membership_hint(const AnalyticFunction& f, double p, double q);
const char* to_string(Membership m) noexcept;

/// Roots of a polynomial by Aberth-Ehrlich simultaneous iteration, clustered
/// into zeros with multiplicity.  Exact zeros at the origin come from the
/// vanishing low-order coefficients.
std::vector<Zero> polynomial_zeros(std::span<const cplx> coeffs);

}  // namespace hml
