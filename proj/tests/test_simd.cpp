#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "hml/simd/kernels.hpp"

using namespace hml::simd;

namespace {

struct Data {
  std::vector<double> cre, cim, zre, zim;
};

Data make_data(std::size_t degree, std::size_t points, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Data d;
  for (std::size_t i = 0; i <= degree; ++i) {
    d.cre.push_back(u(eng));
    d.cim.push_back(u(eng));
  }
  for (std::size_t i = 0; i < points; ++i) {
    d.zre.push_back(u(eng));
    d.zim.push_back(u(eng));
  }
  return d;
}

}  // namespace

TEST_CASE("scalar table reports the scalar isa") {
  CHECK(scalar_kernels().isa == Isa::scalar);
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("avx2 horner is bit-identical to the scalar reference") {
  const KernelTable* avx = avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  // Point counts cover full vectors plus every tail length.
  for (std::size_t degree : {0u, 1u, 5u, 17u, 64u}) {
    for (std::size_t n : {1u, 3u, 4u, 5u, 7u, 64u, 1001u}) {
      const Data d = make_data(degree, n, 1000 * degree + n);
      std::vector<double> vre(n), vim(n), dre(n), dim(n), vre2(n), vim2(n), dre2(n), dim2(n);
      const ConstComplexSpan c{d.cre, d.cim};
      const ConstComplexSpan z{d.zre, d.zim};
      scalar_kernels().horner_with_deriv(c, z, {vre, vim}, {dre, dim});
      avx->horner_with_deriv(c, z, {vre2, vim2}, {dre2, dim2});
      CHECK(vre == vre2);
      CHECK(vim == vim2);
      CHECK(dre == dre2);
      CHECK(dim == dim2);
      scalar_kernels().horner(c, z, {vre2, vim2});
      CHECK(vre == vre2);
      avx->horner(c, z, {vre2, vim2});
      CHECK(vim == vim2);
    }
  }
}

TEST_CASE("scalar horner matches std::complex evaluation") {
  const Data d = make_data(9, 50, 7);
  std::vector<double> vre(50), vim(50), dre(50), dim(50);
  scalar_kernels().horner_with_deriv({d.cre, d.cim}, {d.zre, d.zim}, {vre, vim}, {dre, dim});
  for (std::size_t i = 0; i < 50; ++i) {
    const std::complex<double> z(d.zre[i], d.zim[i]);
    std::complex<double> v = 0.0, dv = 0.0;
    for (std::size_t k = d.cre.size(); k-- > 0;) {
      dv = dv * z + v;
      v = v * z + std::complex<double>(d.cre[k], d.cim[k]);
    }
    CHECK(std::abs(std::complex<double>(vre[i], vim[i]) - v) <= 1e-14 * (1 + std::abs(v)));
    CHECK(std::abs(std::complex<double>(dre[i], dim[i]) - dv) <= 1e-14 * (1 + std::abs(dv)));
  }
}

TEST_CASE("compensated reductions agree across variants and beat naive summation") {
  std::vector<double> x;
  // 1 followed by many tiny terms: naive summation loses them all.
  x.push_back(1.0);
  for (int i = 0; i < 10001; ++i) x.push_back(1e-16);
  x.push_back(-1.0);
  const double exact = 10001 * 1e-16;
  const double s = scalar_kernels().compensated_sum(x);
  CHECK(std::abs(s - exact) <= 1e-12 * exact);
  CHECK(scalar_kernels().abs_sum(x) == doctest::Approx(2.0 + exact));
  std::vector<double> w(x.size(), 2.0);
  CHECK(std::abs(scalar_kernels().compensated_dot(x, w) - 2 * exact) <= 1e-12 * exact);
  if (const KernelTable* avx = avx2_kernels()) {
    CHECK(std::abs(avx->compensated_sum(x) - exact) <= 1e-12 * exact);
    CHECK(std::abs(avx->compensated_dot(x, w) - 2 * exact) <= 1e-12 * exact);
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 9u, 1000u}) {
      std::vector<double> y(n), v(n);
      for (auto& e : y) e = u(eng);
      for (auto& e : v) e = u(eng);
      const double a = scalar_kernels().compensated_sum(y);
      CHECK(std::abs(avx->compensated_sum(y) - a) <= 1e-15 * (1 + std::abs(a)));
      const double b = scalar_kernels().compensated_dot(y, v);
      CHECK(std::abs(avx->compensated_dot(y, v) - b) <= 1e-15 * (1 + std::abs(b)));
      const double c = scalar_kernels().abs_sum(y);
      CHECK(std::abs(avx->abs_sum(y) - c) <= 1e-13 * (1 + c));
    }
  }
}

TEST_CASE("active table is one of the two variants") {
  const KernelTable& t = active();
  CHECK((&t == &scalar_kernels() || &t == avx2_kernels()));
}
