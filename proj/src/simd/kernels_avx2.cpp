// Compiled with -mavx2 only; selected at runtime after a CPUID check.
#include "hml/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace hml::simd {
namespace {

inline __m256d cmul_re(__m256d ar, __m256d ai, __m256d br, __m256d bi) {
  return _mm256_sub_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi));
}
inline __m256d cmul_im(__m256d ar, __m256d ai, __m256d br, __m256d bi) {
  return _mm256_add_pd(_mm256_mul_pd(ar, bi), _mm256_mul_pd(ai, br));
}

void horner_with_deriv_avx2(ConstComplexSpan c, ConstComplexSpan z, ComplexSpan v,
                            ComplexSpan d) {
  const std::size_t nc = c.size();
  const std::size_t n = z.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zr = _mm256_loadu_pd(z.re.data() + i);
    const __m256d zi = _mm256_loadu_pd(z.im.data() + i);
    __m256d fr = _mm256_set1_pd(c.re[nc - 1]);
    __m256d fi = _mm256_set1_pd(c.im[nc - 1]);
    __m256d dr = _mm256_setzero_pd();
    __m256d di = _mm256_setzero_pd();
    for (std::size_t k = nc - 1; k-- > 0;) {
      const __m256d ndr = _mm256_add_pd(cmul_re(dr, di, zr, zi), fr);
      const __m256d ndi = _mm256_add_pd(cmul_im(dr, di, zr, zi), fi);
      const __m256d nfr = _mm256_add_pd(cmul_re(fr, fi, zr, zi), _mm256_set1_pd(c.re[k]));
      const __m256d nfi = _mm256_add_pd(cmul_im(fr, fi, zr, zi), _mm256_set1_pd(c.im[k]));
      dr = ndr;
      di = ndi;
      fr = nfr;
      fi = nfi;
    }
    _mm256_storeu_pd(v.re.data() + i, fr);
    _mm256_storeu_pd(v.im.data() + i, fi);
    _mm256_storeu_pd(d.re.data() + i, dr);
    _mm256_storeu_pd(d.im.data() + i, di);
  }
  if (i < n) {
    const std::size_t m = n - i;
    scalar_kernels().horner_with_deriv(
        c, {z.re.subspan(i, m), z.im.subspan(i, m)}, {v.re.subspan(i, m), v.im.subspan(i, m)},
        {d.re.subspan(i, m), d.im.subspan(i, m)});
  }
}

void horner_avx2(ConstComplexSpan c, ConstComplexSpan z, ComplexSpan v) {
  const std::size_t nc = c.size();
  const std::size_t n = z.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zr = _mm256_loadu_pd(z.re.data() + i);
    const __m256d zi = _mm256_loadu_pd(z.im.data() + i);
    __m256d fr = _mm256_set1_pd(c.re[nc - 1]);
    __m256d fi = _mm256_set1_pd(c.im[nc - 1]);
    for (std::size_t k = nc - 1; k-- > 0;) {
      const __m256d nfr = _mm256_add_pd(cmul_re(fr, fi, zr, zi), _mm256_set1_pd(c.re[k]));
      const __m256d nfi = _mm256_add_pd(cmul_im(fr, fi, zr, zi), _mm256_set1_pd(c.im[k]));
      fr = nfr;
      fi = nfi;
    }
    _mm256_storeu_pd(v.re.data() + i, fr);
    _mm256_storeu_pd(v.im.data() + i, fi);
  }
  if (i < n) {
    const std::size_t m = n - i;
    scalar_kernels().horner(c, {z.re.subspan(i, m), z.im.subspan(i, m)},
                            {v.re.subspan(i, m), v.im.subspan(i, m)});
  }
}

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// Per-lane Neumaier step.
inline void neumaier_step(__m256d& s, __m256d& comp, __m256d v) {
  const __m256d t = _mm256_add_pd(s, v);
  const __m256d s_big = _mm256_cmp_pd(abs_pd(s), abs_pd(v), _CMP_GE_OQ);
  const __m256d a = _mm256_add_pd(_mm256_sub_pd(s, t), v);
  const __m256d b = _mm256_add_pd(_mm256_sub_pd(v, t), s);
  comp = _mm256_add_pd(comp, _mm256_blendv_pd(b, a, s_big));
  s = t;
}

// Lane sums, lane compensations and the scalar tail go through one compensated
// sum in a fixed order, so no intermediate rounding happens before the tail.
double fold_lanes(__m256d s, __m256d comp, std::span<const double> tail_x,
                  std::span<const double> tail_w) {
  alignas(32) double ls[4];
  alignas(32) double lc[4];
  _mm256_store_pd(ls, s);
  _mm256_store_pd(lc, comp);
  double parts[4 + 4 + 3];
  std::size_t m = 0;
  for (int l = 0; l < 4; ++l) {
    parts[m++] = ls[l];
    parts[m++] = lc[l];
  }
  for (std::size_t i = 0; i < tail_x.size(); ++i)
    parts[m++] = tail_w.empty() ? tail_x[i] : tail_x[i] * tail_w[i];
  return scalar_kernels().compensated_sum(std::span<const double>(parts, m));
}

double compensated_sum_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d s = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) neumaier_step(s, comp, _mm256_loadu_pd(x.data() + i));
  return fold_lanes(s, comp, x.subspan(i), {});
}

double compensated_dot_avx2(std::span<const double> x, std::span<const double> w) {
  const std::size_t n = x.size();
  __m256d s = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    neumaier_step(s, comp,
                  _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(w.data() + i)));
  return fold_lanes(s, comp, x.subspan(i), w.subspan(i));
}

double abs_sum_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d s = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) s = _mm256_add_pd(s, abs_pd(_mm256_loadu_pd(x.data() + i)));
  alignas(32) double ls[4];
  _mm256_store_pd(ls, s);
  double acc = (ls[0] + ls[1]) + (ls[2] + ls[3]);
  for (; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
  static const KernelTable table{Isa::avx2,           &horner_with_deriv_avx2,
                                 &horner_avx2,         &compensated_sum_avx2,
                                 &compensated_dot_avx2, &abs_sum_avx2};
  return table;
}

}  // namespace hml::simd
