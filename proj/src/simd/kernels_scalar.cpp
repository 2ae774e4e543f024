#include "hml/simd/kernels.hpp"

#include <cmath>

namespace hml::simd {
namespace {

void horner_with_deriv_scalar(ConstComplexSpan c, ConstComplexSpan z, ComplexSpan v,
                              ComplexSpan d) {
  const std::size_t nc = c.size();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double zr = z.re[i];
    const double zi = z.im[i];
    double fr = c.re[nc - 1];
    double fi = c.im[nc - 1];
    double dr = 0.0;
    double di = 0.0;
    for (std::size_t k = nc - 1; k-- > 0;) {
      // d = d*z + f
      const double ndr = (dr * zr - di * zi) + fr;
      const double ndi = (dr * zi + di * zr) + fi;
      // f = f*z + c_k
      const double nfr = (fr * zr - fi * zi) + c.re[k];
      const double nfi = (fr * zi + fi * zr) + c.im[k];
      dr = ndr;
      di = ndi;
      fr = nfr;
      fi = nfi;
    }
    v.re[i] = fr;
    v.im[i] = fi;
    d.re[i] = dr;
    d.im[i] = di;
  }
}

void horner_scalar(ConstComplexSpan c, ConstComplexSpan z, ComplexSpan v) {
  const std::size_t nc = c.size();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double zr = z.re[i];
    const double zi = z.im[i];
    double fr = c.re[nc - 1];
    double fi = c.im[nc - 1];
    for (std::size_t k = nc - 1; k-- > 0;) {
      const double nfr = (fr * zr - fi * zi) + c.re[k];
      const double nfi = (fr * zi + fi * zr) + c.im[k];
      fr = nfr;
      fi = nfi;
    }
    v.re[i] = fr;
    v.im[i] = fi;
  }
}

double compensated_sum_scalar(std::span<const double> x) {
  double s = 0.0;
  double comp = 0.0;
  for (double v : x) {
    const double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
      comp += (s - t) + v;
    else
      comp += (v - t) + s;
    s = t;
  }
  return s + comp;
}

double compensated_dot_scalar(std::span<const double> x, std::span<const double> w) {
  double s = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i] * w[i];
    const double t = s + v;
    if (std::fabs(s) >= std::fabs(v))
      comp += (s - t) + v;
    else
      comp += (v - t) + s;
    s = t;
  }
  return s + comp;
}

double abs_sum_scalar(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::fabs(v);
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::scalar,           &horner_with_deriv_scalar,
                                 &horner_scalar,         &compensated_sum_scalar,
                                 &compensated_dot_scalar, &abs_sum_scalar};
  return table;
}

}  // namespace hml::simd
