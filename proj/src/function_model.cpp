#include "hml/function_model.hpp"

#include <algorithm>
#include <cmath>

#include "hml/errors.hpp"

namespace hml {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (const cplx& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InvariantError("polynomial coefficient is not finite");
  while (coeffs_.size() > 1 && coeffs_.back() == cplx{}) coeffs_.pop_back();
  if (degree() > kMaxPolynomialDegree) throw InvariantError("polynomial degree exceeds 64");
  re_.reserve(coeffs_.size());
  im_.reserve(coeffs_.size());
  for (const cplx& c : coeffs_) {
    re_.push_back(c.real());
    im_.push_back(c.imag());
  }
}

cplx Polynomial::eval(cplx z) const noexcept {
  cplx f = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) f = f * z + coeffs_[k];
  return f;
}

cplx Polynomial::eval_deriv(cplx z) const noexcept {
  cplx f = coeffs_.back();
  cplx d = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
    d = d * z + f;
    f = f * z + coeffs_[k];
  }
  return d;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial({0.0});
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

void Polynomial::eval_batch(simd::ConstComplexSpan z, simd::ComplexSpan value,
                            simd::ComplexSpan deriv) const {
  simd::active().horner_with_deriv({re_, im_}, z, value, deriv);
}

void Polynomial::eval_batch(simd::ConstComplexSpan z, simd::ComplexSpan value) const {
  simd::active().horner({re_, im_}, z, value);
}

// ---------------------------------------------------------------------------
// Construction

bool operator==(const ScaledRotationFn& a, const ScaledRotationFn& b) {
  return a.scale == b.scale && a.rotation == b.rotation &&
         (a.inner == b.inner || (a.inner && b.inner && *a.inner == *b.inner));
}

AnalyticFunction::AnalyticFunction(Variant v, std::vector<Zero> zeros)
    : model_(std::make_shared<const Variant>(std::move(v))),
      zeros_(std::make_shared<const std::vector<Zero>>(std::move(zeros))) {}

AnalyticFunction AnalyticFunction::polynomial(std::vector<cplx> coeffs) {
  Polynomial poly(std::move(coeffs));
  if (poly.is_zero()) throw InvariantError("function must not vanish identically");
  auto zeros = polynomial_zeros(poly.coeffs());
  return AnalyticFunction(PolynomialFn{std::move(poly)}, std::move(zeros));
}

AnalyticFunction AnalyticFunction::constant(cplx c) { return polynomial({c}); }

AnalyticFunction AnalyticFunction::monomial(int n, cplx c) {
  if (n < 0) throw InvariantError("monomial degree must be non-negative");
  std::vector<cplx> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
  coeffs.back() = c;
  return polynomial(std::move(coeffs));
}

AnalyticFunction AnalyticFunction::rational(std::vector<cplx> num, std::vector<cplx> den) {
  Polynomial n(std::move(num));
  Polynomial d(std::move(den));
  if (n.is_zero()) throw InvariantError("rational numerator must not vanish identically");
  if (d.is_zero()) throw InvariantError("rational denominator is zero");
  for (const Zero& pole : polynomial_zeros(d.coeffs()))
    if (std::abs(pole.location) <= 1.0)
      throw InvariantError("rational denominator has a root in the closed unit disk");
  auto zeros = polynomial_zeros(n.coeffs());
  return AnalyticFunction(RationalFn{std::move(n), std::move(d)}, std::move(zeros));
}

AnalyticFunction AnalyticFunction::blaschke(std::vector<BlaschkeFactor> factors, cplx prefactor) {
  if (std::abs(std::abs(prefactor) - 1.0) > 1e-12)
    throw InvariantError("blaschke prefactor must be unimodular");
  std::vector<Zero> zeros;
  for (const BlaschkeFactor& bf : factors) {
    if (!(std::abs(bf.zero) < 1.0)) throw InvariantError("blaschke zero modulus must be < 1");
    if (bf.multiplicity < 1) throw InvariantError("blaschke multiplicity must be >= 1");
    auto it = std::find_if(zeros.begin(), zeros.end(),
                           [&](const Zero& z) { return z.location == bf.zero; });
    if (it != zeros.end())
      it->order += bf.multiplicity;
    else
      zeros.push_back({bf.zero, bf.multiplicity});
  }
  return AnalyticFunction(BlaschkeFn{std::move(factors), prefactor}, std::move(zeros));
}

AnalyticFunction AnalyticFunction::binomial(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvariantError("binomial exponent must be positive");
  return AnalyticFunction(BinomialFn{alpha}, {});
}

AnalyticFunction AnalyticFunction::scaled_rotation(AnalyticFunction inner, cplx scale,
                                                   double rotation) {
  if (scale == cplx{} || !std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
    throw InvariantError("scale must be finite and nonzero");
  if (!std::isfinite(rotation)) throw InvariantError("rotation must be finite");
  const cplx unrotate = std::polar(1.0, -rotation);
  std::vector<Zero> zeros;
  for (const Zero& z : inner.all_zeros()) zeros.push_back({z.location * unrotate, z.order});
  auto shared = std::make_shared<const AnalyticFunction>(std::move(inner));
  return AnalyticFunction(ScaledRotationFn{std::move(shared), scale, rotation}, std::move(zeros));
}

std::vector<Zero> AnalyticFunction::zeros_in_unit_disk() const {
  std::vector<Zero> out;
  for (const Zero& z : *zeros_)
    if (std::abs(z.location) < 1.0) out.push_back(z);
  return out;
}

bool AnalyticFunction::boundary_singular() const noexcept {
  return std::visit(
      [](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BinomialFn>)
          return true;
        else if constexpr (std::is_same_v<T, ScaledRotationFn>)
          return m.inner->boundary_singular();
        else
          return false;
      },
      *model_);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

cplx blaschke_factor(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

cplx blaschke_factor_deriv(cplx a, cplx z) {
  const cplx den = 1.0 - std::conj(a) * z;
  return (std::norm(a) - 1.0) / (den * den);
}

void check_binomial_domain(cplx z) {
  if (z.imag() == 0.0 && z.real() >= 1.0)
    throw DomainError("binomial family is not defined at z = 1 (branch point)");
}

struct ValueAndDeriv {
  cplx value;
  cplx deriv;
};

ValueAndDeriv evaluate(const AnalyticFunction& f, cplx z);

ValueAndDeriv evaluate_model(const PolynomialFn& m, cplx z) {
  return {m.poly.eval(z), m.poly.eval_deriv(z)};
}

ValueAndDeriv evaluate_model(const RationalFn& m, cplx z) {
  const cplx n = m.num.eval(z);
  const cplx dn = m.num.eval_deriv(z);
  const cplx d = m.den.eval(z);
  const cplx dd = m.den.eval_deriv(z);
  return {n / d, (dn * d - n * dd) / (d * d)};
}

ValueAndDeriv evaluate_model(const BlaschkeFn& m, cplx z) {
  const std::size_t k = m.factors.size();
  std::vector<cplx> powers(k);
  for (std::size_t i = 0; i < k; ++i)
    powers[i] = std::pow(blaschke_factor(m.factors[i].zero, z), m.factors[i].multiplicity);
  cplx value = m.prefactor;
  for (const cplx& pw : powers) value *= pw;
  cplx deriv = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const BlaschkeFactor& bf = m.factors[i];
    cplx term = m.prefactor * static_cast<double>(bf.multiplicity) *
                std::pow(blaschke_factor(bf.zero, z), bf.multiplicity - 1) *
                blaschke_factor_deriv(bf.zero, z);
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) term *= powers[j];
    deriv += term;
  }
  return {value, deriv};
}

ValueAndDeriv evaluate_model(const BinomialFn& m, cplx z) {
  check_binomial_domain(z);
  const cplx log1mz = std::log(1.0 - z);
  const cplx value = std::exp(-m.alpha * log1mz);
  return {value, m.alpha * value / (1.0 - z)};
}

ValueAndDeriv evaluate_model(const ScaledRotationFn& m, cplx z) {
  const cplx rot = std::polar(1.0, m.rotation);
  const auto inner = evaluate(*m.inner, rot * z);
  return {m.scale * inner.value, m.scale * rot * inner.deriv};
}

ValueAndDeriv evaluate(const AnalyticFunction& f, cplx z) {
  return std::visit([z](const auto& m) { return evaluate_model(m, z); }, f.variant());
}

}  // namespace

cplx eval(const AnalyticFunction& f, cplx z) {
  return std::visit(
      [z](const auto& m) -> cplx {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PolynomialFn>)
          return m.poly.eval(z);
        else if constexpr (std::is_same_v<T, RationalFn>)
          return m.num.eval(z) / m.den.eval(z);
        else if constexpr (std::is_same_v<T, ScaledRotationFn>)
          return m.scale * eval(*m.inner, std::polar(1.0, m.rotation) * z);
        else if constexpr (std::is_same_v<T, BinomialFn>) {
          check_binomial_domain(z);
          return std::exp(-m.alpha * std::log(1.0 - z));
        } else
          return evaluate_model(m, z).value;
      },
      f.variant());
}

cplx eval_deriv(const AnalyticFunction& f, cplx z) { return evaluate(f, z).deriv; }

void eval_batch(const AnalyticFunction& f, simd::ConstComplexSpan z, simd::ComplexSpan value,
                simd::ComplexSpan deriv) {
  const std::size_t n = z.size();
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PolynomialFn>) {
          m.poly.eval_batch(z, value, deriv);
        } else if constexpr (std::is_same_v<T, RationalFn>) {
          std::vector<double> buf(4 * n);
          simd::ComplexSpan dv{{buf.data(), n}, {buf.data() + n, n}};
          simd::ComplexSpan dd{{buf.data() + 2 * n, n}, {buf.data() + 3 * n, n}};
          m.num.eval_batch(z, value, deriv);
          m.den.eval_batch(z, dv, dd);
          for (std::size_t i = 0; i < n; ++i) {
            const cplx nv{value.re[i], value.im[i]};
            const cplx nd{deriv.re[i], deriv.im[i]};
            const cplx d{dv.re[i], dv.im[i]};
            const cplx ddv{dd.re[i], dd.im[i]};
            const cplx v = nv / d;
            const cplx dz = (nd * d - nv * ddv) / (d * d);
            value.re[i] = v.real();
            value.im[i] = v.imag();
            deriv.re[i] = dz.real();
            deriv.im[i] = dz.imag();
          }
        } else {
          for (std::size_t i = 0; i < n; ++i) {
            const auto r = evaluate_model(m, cplx{z.re[i], z.im[i]});
            value.re[i] = r.value.real();
            value.im[i] = r.value.imag();
            deriv.re[i] = r.deriv.real();
            deriv.im[i] = r.deriv.imag();
          }
        }
      },
      f.variant());
}

std::vector<Zero> zeros_in_disk(const AnalyticFunction& f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw InvariantError("radius must satisfy 0 < r < 1");
  std::vector<Zero> out;
  for (const Zero& z : f.all_zeros()) {
    const double m = std::abs(z.location);
    if (std::abs(m - r) < kCircleGuard)
      throw CircleProximityError("zero lies within 1e-8 of the circle |z| = r", r,
                                 std::abs(m - r));
    if (m < r) out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](const Zero& a, const Zero& b) {
    const double ma = std::abs(a.location);
    const double mb = std::abs(b.location);
    if (ma != mb) return ma < mb;
    return std::arg(a.location) < std::arg(b.location);
  });
  return out;
}

Membership membership_hint(const AnalyticFunction& f, double p, double q) {
  if (!(p > 0.0) || !(q >= 0.0)) throw InvariantError("membership requires p > 0 and q >= 0");
  return std::visit(
      [p, q](const auto& m) -> Membership {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BinomialFn>) {
          const double lhs = m.alpha * p;
          const double edge = q + 1.0;
          if (std::abs(lhs - edge) <= 1e-12 * edge) return Membership::unknown;
          return lhs < edge ? Membership::member : Membership::non_member;
        } else if constexpr (std::is_same_v<T, ScaledRotationFn>) {
          return membership_hint(*m.inner, p, q);
        } else {
          return Membership::member;
        }
      },
      f.variant());
}

const char* to_string(Membership m) noexcept {
  switch (m) {
    case Membership::member:
      return "member";
    case Membership::non_member:
      return "non-member";
    case Membership::unknown:
      return "unknown";
  }
  return "unknown";
}

}  // namespace hml
