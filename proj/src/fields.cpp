#include "hml/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hml/errors.hpp"

namespace hml {

MeanParams::MeanParams(double p_, double q_) : p(p_), q(q_) { validate(); }

void MeanParams::validate() const {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvariantError("p must satisfy 0 < p < inf");
  if (!(q >= 0.0) || !std::isfinite(q)) throw InvariantError("q must satisfy 0 <= q < inf");
}

double checked_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) throw InvariantError("radius must satisfy 0 < r < 1");
  return r;
}

Fields::Fields(AnalyticFunction f, MeanParams params)
    : f_(std::move(f)), params_(params), zeros_(f_.zeros_in_unit_disk()) {
  params_.validate();
  const double half = params_.p / 2.0;
  p_even_integer_ = half == std::floor(half);
}

double Fields::singular_exponent(FieldKind kind, int order) const noexcept {
  const double kp = order * params_.p;
  switch (kind) {
    case FieldKind::laplacian_G:
      return kp - 2.0;
    case FieldKind::radial_deriv_W:
      return kp - 1.0;
    case FieldKind::weight_W:
      break;
  }
  return kp;
}

Fields::Nearest Fields::nearest_zero(cplx z) const noexcept {
  Nearest best{std::numeric_limits<double>::infinity(), 0, {}};
  for (const Zero& zero : zeros_) {
    const double d = std::abs(z - zero.location);
    if (d < best.distance) best = {d, zero.order, zero.location};
  }
  return best;
}

// A zero of order k keeps G bounded when kp >= 2 (it tends to 0 for kp > 2).
bool Fields::singular_for_G(double abs_sq, Nearest near) const noexcept {
  if (near.distance < kFieldGuard) return near.order * params_.p < 2.0;
  return abs_sq == 0.0 && params_.p < 2.0;
}

// |f|^e from |f|^2.  At |f| = 0 the positive powers are exactly 0.
double Fields::abs_pow(double abs_sq, double exponent) const noexcept {
  if (exponent == 0.0) return 1.0;
  if (abs_sq == 0.0)
    return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::exp(0.5 * exponent * std::log(abs_sq));
}

// Laplacian of |f|^p at a zero of order k with kp >= 2: 4|c_k|^p when kp = 2,
// 0 above.  c_k comes from a Cauchy integral on a small circle.
double Fields::lap_at_zero(cplx z) const {
  const double p = params_.p;
  // Clustered multiple zeros carry an error of roughly eps^(1/k).
  constexpr double kOrderRadius = 1e-6;
  const Nearest near = nearest_zero(z);
  const int k = near.order > 0 && near.distance < kOrderRadius ? near.order : 1;
  if (k * p != 2.0) return 0.0;
  if (k == 1) return 4.0 * std::norm(eval_deriv(f_, z));
  double rho = 0.25 * (1.0 - std::abs(z));
  for (const Zero& other : zeros_)
    if (other.location != near.location) rho = std::min(rho, 0.25 * std::abs(other.location - z));
  constexpr int kNodes = 32;
  cplx acc{};
  for (int j = 0; j < kNodes; ++j) {
    const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * j / kNodes);
    acc += eval(f_, z + rho * u) * std::pow(u, -k);
  }
  const double ck = std::abs(acc) / (kNodes * std::pow(rho, k));
  return 4.0 * std::pow(ck, p);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Weight {
  double w;       // (1 - s)^q
  double w_q1;    // (1 - s)^(q-1), 0 when q = 0
  double lap_w;   // Laplacian of (1 - s)^q
};

Weight weight_terms(double q, double s) {
  if (q == 0.0) return {1.0, 0.0, 0.0};
  const double om = 1.0 - s;
  const double w = std::pow(om, q);
  const double w_q1 = std::pow(om, q - 1.0);
  const double w_q2 = q == 1.0 ? 0.0 : (q - 1.0) * s * std::pow(om, q - 2.0);
  return {w, w_q1, 4.0 * q * (-w_q1 + w_q2)};
}

}  // namespace

double Fields::W(cplx z) const {
  const cplx fz = eval(f_, z);
  const double s = std::norm(z);
  const double w = params_.q == 0.0 ? 1.0 : std::pow(1.0 - s, params_.q);
  return abs_pow(std::norm(fz), params_.p) * w;
}

GradientValue Fields::grad_W(cplx z) const {
  const double p = params_.p;
  const double q = params_.q;
  const cplx fz = eval(f_, z);
  const cplx dz = eval_deriv(f_, z);
  const double m2 = std::norm(fz);
  GradientValue out;
  const Nearest near = nearest_zero(z);
  out.singularity_distance = near.distance;
  if ((near.distance < kFieldGuard && near.order * p < 1.0) || (m2 == 0.0 && p < 1.0)) {
    out.singular = true;
    out.grad = {std::nan(""), std::nan("")};
    return out;
  }
  const Weight wt = weight_terms(q, std::norm(z));
  // grad |f|^p as a complex number: p |f|^(p-2) f conj(f').
  const cplx grad_u = m2 == 0.0 ? cplx{} : p * abs_pow(m2, p - 2.0) * fz * std::conj(dz);
  const cplx grad_w = -2.0 * q * wt.w_q1 * z;
  const cplx g = wt.w * grad_u + abs_pow(m2, p) * grad_w;
  out.grad = {g.real(), g.imag()};
  return out;
}

FieldValue Fields::G(cplx z) const {
  const double p = params_.p;
  const double q = params_.q;
  const cplx fz = eval(f_, z);
  const cplx dz = eval_deriv(f_, z);
  const double m2 = std::norm(fz);
  FieldValue out;
  const Nearest near = nearest_zero(z);
  out.singularity_distance = near.distance;
  if (singular_for_G(m2, near)) {
    out.singular = true;
    out.value = std::nan("");
    return out;
  }
  const double s = std::norm(z);
  const Weight wt = weight_terms(q, s);
  const double d2 = std::norm(dz);
  double lap_u = 0.0;
  double cross = 0.0;
  if (m2 != 0.0) {
    const double pm2 = abs_pow(m2, p - 2.0);
    lap_u = d2 == 0.0 ? 0.0 : p * p * pm2 * d2;
    if (q != 0.0) cross = 2.0 * (-2.0 * q * wt.w_q1) * p * pm2 * std::real(fz * std::conj(dz * z));
  } else {
    lap_u = lap_at_zero(z);
  }
  out.value = wt.w * lap_u + cross + abs_pow(m2, p) * wt.lap_w;
  return out;
}

FieldValue Fields::radial_deriv_W(cplx z) const {
  const double r = std::abs(z);
  if (!(r > 0.0)) throw DomainError("radial derivative is undefined at the origin");
  const GradientValue g = grad_W(z);
  FieldValue out;
  out.singular = g.singular;
  out.singularity_distance = g.singularity_distance;
  out.value = g.singular ? std::nan("") : (g.grad[0] * z.real() + g.grad[1] * z.imag()) / r;
  return out;
}

bool Fields::eval_batch(FieldKind kind, simd::ConstComplexSpan z, std::span<double> out) const {
  const std::size_t n = z.size();
  const double p = params_.p;
  const double q = params_.q;
  std::vector<double> buf(4 * n);
  simd::ComplexSpan fv{{buf.data(), n}, {buf.data() + n, n}};
  simd::ComplexSpan dv{{buf.data() + 2 * n, n}, {buf.data() + 3 * n, n}};
  hml::eval_batch(f_, z, fv, dv);

  const bool check_zeros = kind == FieldKind::laplacian_G && p < 2.0 && !zeros_.empty();
  bool any_singular = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = z.re[i];
    const double y = z.im[i];
    const double fr = fv.re[i];
    const double fi = fv.im[i];
    const double m2 = fr * fr + fi * fi;
    const double s = x * x + y * y;
    if (kind == FieldKind::weight_W) {
      const double w = q == 0.0 ? 1.0 : std::pow(1.0 - s, q);
      out[i] = abs_pow(m2, p) * w;
      continue;
    }
    if (kind == FieldKind::radial_deriv_W) {
      const Nearest near = zeros_.empty() || p >= 1.0 ? Nearest{kInf, 0, {}} : nearest_zero(cplx{x, y});
      if ((near.distance < kFieldGuard && near.order * p < 1.0) || (m2 == 0.0 && p < 1.0)) {
        out[i] = std::nan("");
        any_singular = true;
        continue;
      }
      const Weight wt = weight_terms(q, s);
      const double dr = dv.re[i];
      const double di = dv.im[i];
      // grad u = p |f|^(p-2) f conj(f'), grad w = -2q (1-s)^(q-1) z
      double gr = 0.0;
      double gi = 0.0;
      if (m2 != 0.0) {
        const double c = p * abs_pow(m2, p - 2.0) * wt.w;
        gr = c * (fr * dr + fi * di);
        gi = c * (fi * dr - fr * di);
      }
      const double cw = -2.0 * q * wt.w_q1 * abs_pow(m2, p);
      gr += cw * x;
      gi += cw * y;
      out[i] = (gr * x + gi * y) / std::sqrt(s);
      continue;
    }
    if (check_zeros || (m2 == 0.0 && p < 2.0)) {
      if (singular_for_G(m2, nearest_zero(cplx{x, y}))) {
        out[i] = std::nan("");
        any_singular = true;
        continue;
      }
    }
    const Weight wt = weight_terms(q, s);
    const double dr = dv.re[i];
    const double di = dv.im[i];
    const double d2 = dr * dr + di * di;
    double lap_u = 0.0;
    double cross = 0.0;
    if (m2 != 0.0) {
      const double pm2 = abs_pow(m2, p - 2.0);
      lap_u = d2 == 0.0 ? 0.0 : p * p * pm2 * d2;
      if (q != 0.0) {
        // Re(f * conj(f' z))
        const double gzr = dr * x - di * y;
        const double gzi = dr * y + di * x;
        const double re = fr * gzr + fi * gzi;
        cross = 2.0 * (-2.0 * q * wt.w_q1) * p * pm2 * re;
      }
    } else {
      lap_u = lap_at_zero(cplx{x, y});
    }
    out[i] = wt.w * lap_u + cross + abs_pow(m2, p) * wt.lap_w;
  }
  return any_singular;
}

double eval_W(const AnalyticFunction& f, const MeanParams& params, cplx z) {
  return Fields(f, params).W(z);
}

GradientValue eval_grad_W(const AnalyticFunction& f, const MeanParams& params, cplx z) {
  return Fields(f, params).grad_W(z);
}

FieldValue eval_G(const AnalyticFunction& f, const MeanParams& params, cplx z) {
  const Fields fields(f, params);
  FieldValue v = fields.G(z);
  if (v.singular && (v.singularity_distance == 0.0 || eval(f, z) == cplx{}))
    throw SingularPointError("G is unbounded at a zero of f when kp < 2");
  return v;
}

FieldValue eval_radial_deriv_W(const AnalyticFunction& f, const MeanParams& params, cplx z) {
  return Fields(f, params).radial_deriv_W(z);
}

}  // namespace hml
