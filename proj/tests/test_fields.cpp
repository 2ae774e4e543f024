#include <random>

#include "doctest.h"
#include "hml/errors.hpp"
#include "hml/fields.hpp"
#include "hml/golden.hpp"
#include "oracles.hpp"

using namespace hml;

namespace {

// Points at least `gap` away from every zero and the boundary.
cplx generic_point(std::mt19937_64& eng, const Fields& fl, double gap) {
  for (;;) {
    const cplx z = oracle::random_point(eng, 0.85);
    bool ok = std::abs(z) > gap;
    for (const Zero& zz : fl.zeros()) ok = ok && std::abs(z - zz.location) > gap;
    if (ok) return z;
  }
}

}  // namespace

TEST_CASE("W, grad W and G match finite differences on the golden families") {
  std::mt19937_64 eng(2024);
  for (const GoldenFunction& g : golden_functions()) {
    for (const MeanParams mp : {MeanParams(2.0, 0.0), MeanParams(1.5, 1.0), MeanParams(0.5, 0.5)}) {
      const Fields fl(g.f, mp);
      auto w = [&](cplx z) { return fl.W(z); };
      for (int i = 0; i < 40; ++i) {
        const cplx z = generic_point(eng, fl, 0.05);
        const auto [gx, gy] = oracle::fd_gradient(w, z, 1e-6);
        const GradientValue gv = fl.grad_W(z);
        const double scale = 1.0 + std::hypot(gx, gy);
        CHECK(std::abs(gv.grad[0] - gx) <= 1e-6 * scale);
        CHECK(std::abs(gv.grad[1] - gy) <= 1e-6 * scale);
        const double lap = oracle::fd_laplacian(w, z, 1e-3);
        const FieldValue gval = fl.G(z);
        CHECK_FALSE(gval.singular);
        CHECK(std::abs(gval.value - lap) <= 1e-4 * (1.0 + std::abs(lap)));
        // Radial derivative along the ray through z.
        const cplx e = z / std::abs(z);
        const double dr = (fl.W(z + 1e-6 * e) - fl.W(z - 1e-6 * e)) / 2e-6;
        CHECK(std::abs(fl.radial_deriv_W(z).value - dr) <= 1e-6 * (1.0 + std::abs(dr)));
      }
    }
  }
}

TEST_CASE("monomial Laplacian closed form") {
  for (int n = 1; n <= 3; ++n) {
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
      const AnalyticFunction f = AnalyticFunction::monomial(n);
      const cplx z = std::polar(0.6, 0.9);
      const double a = n * p;
      const double expect = a * a * std::pow(0.6, a - 2.0);
      if (a < 2.0 && std::abs(z) == 0.0) continue;
      CHECK(eval_G(f, MeanParams(p, 0.0), z).value == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  // Constant with weight: Laplacian of (1 - s)^q at s = |z|^2.
  const double q = 1.5;
  const double s = 0.25;
  const double expect = 4.0 * q * (-std::pow(1 - s, q - 1) + (q - 1) * s * std::pow(1 - s, q - 2));
  CHECK(eval_G(AnalyticFunction::constant(1.0), MeanParams(3.0, q), 0.5).value ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("singular points are flagged") {
  const AnalyticFunction f = AnalyticFunction::monomial(1);
  CHECK_THROWS_AS(eval_G(f, MeanParams(1.0, 0.0), 0.0), SingularPointError);
  // kp >= 2: G is bounded at the zero.
  CHECK(eval_G(f, MeanParams(2.0, 0.0), 0.0).value == doctest::Approx(4.0));
  CHECK(eval_G(AnalyticFunction::monomial(2), MeanParams(1.0, 0.0), 0.0).value == doctest::Approx(4.0));
  // Double zero at 0.4: |f|^p ~ |c|^p |z - 0.4|^2 with c = 1 / (1 - 0.16)^2.
  const AnalyticFunction dbl = AnalyticFunction::blaschke({{0.4, 2}});
  CHECK(eval_G(dbl, MeanParams(1.0, 0.0), 0.4).value == doctest::Approx(4.0 / (0.84 * 0.84)).epsilon(1e-10));
  CHECK(eval_G(dbl, MeanParams(1.5, 0.0), 0.4).value == 0.0);
  CHECK(eval_grad_W(f, MeanParams(0.5, 0.0), 0.0).singular);
  CHECK_FALSE(eval_grad_W(f, MeanParams(1.5, 0.0), 0.0).singular);
  CHECK(eval_W(f, MeanParams(0.5, 0.0), 0.0) == 0.0);
  const Fields fl(f, MeanParams(1.0, 0.0));
  CHECK(fl.singular_exponent(FieldKind::laplacian_G, 1) == doctest::Approx(-1.0));
  CHECK(fl.singular_exponent(FieldKind::weight_W, 2) == doctest::Approx(2.0));
  CHECK(fl.zeros_are_nonsmooth());
  CHECK_FALSE(Fields(f, MeanParams(2.0, 0.0)).zeros_are_nonsmooth());
  CHECK(fl.zero_is_nonsmooth(1));
  CHECK_FALSE(fl.zero_is_nonsmooth(2));
  CHECK(fl.zero_is_nonsmooth(3));
}

TEST_CASE("batched field evaluation matches pointwise values") {
  const AnalyticFunction f = golden_random_polynomial();
  const Fields fl(f, MeanParams(1.5, 0.5));
  std::mt19937_64 eng(8);
  std::vector<double> zr(29), zi(29), out(29);
  for (std::size_t i = 0; i < zr.size(); ++i) {
    const cplx z = oracle::random_point(eng, 0.9);
    zr[i] = z.real();
    zi[i] = z.imag();
  }
  for (FieldKind kind : {FieldKind::laplacian_G, FieldKind::weight_W, FieldKind::radial_deriv_W}) {
    CHECK_FALSE(fl.eval_batch(kind, {zr, zi}, out));
    for (std::size_t i = 0; i < zr.size(); ++i) {
      const cplx z(zr[i], zi[i]);
      const double ref = kind == FieldKind::laplacian_G ? fl.G(z).value
                         : kind == FieldKind::weight_W  ? fl.W(z)
                                                        : fl.radial_deriv_W(z).value;
      CHECK(out[i] == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  // A point on a zero with kp < 2 is reported as NaN and flags the batch.
  const Fields sing(AnalyticFunction::monomial(1), MeanParams(1.0, 0.0));
  std::vector<double> r1 = {0.0, 0.5}, i1 = {0.0, 0.0}, o1(2);
  CHECK(sing.eval_batch(FieldKind::laplacian_G, {r1, i1}, o1));
  CHECK(std::isnan(o1[0]));
  CHECK(o1[1] == doctest::Approx(2.0));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(MeanParams(0.0, 0.0).validate(), InvariantError);
  CHECK_THROWS_AS(MeanParams(1.0, -0.5).validate(), InvariantError);
  CHECK_THROWS_AS(checked_radius(1.0), InvariantError);
  CHECK_THROWS_AS(checked_radius(0.0), InvariantError);
  CHECK(checked_radius(0.5) == 0.5);
}
