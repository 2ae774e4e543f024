#pragma once

// Data-parallel inner loops used by the quadrature layer.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2 variant.  The active table is chosen once at runtime from CPUID and
// can be forced with HML_SIMD=scalar|avx2.  The polynomial kernels use the
// same operation order in both variants and are bit-identical (the build
// disables FMA contraction); the reductions differ only in association.

#include <cstddef>
#include <span>
#include <string_view>

namespace hml::simd {

enum class Isa { scalar, avx2 };

/// Structure-of-arrays view of complex values.
struct ComplexSpan {
  std::span<double> re;
  std::span<double> im;
  std::size_t size() const noexcept { return re.size(); }
};

struct ConstComplexSpan {
  std::span<const double> re;
  std::span<const double> im;
  std::size_t size() const noexcept { return re.size(); }
};

struct KernelTable {
  Isa isa;
  // p(z) and p'(z) for coefficients in ascending order.
  void (*horner_with_deriv)(ConstComplexSpan coeffs, ConstComplexSpan z,
                            ComplexSpan value, ComplexSpan deriv);
  // p(z) only.
  void (*horner)(ConstComplexSpan coeffs, ConstComplexSpan z, ComplexSpan value);
  // Neumaier-compensated sum.
  double (*compensated_sum)(std::span<const double> x);
  // Compensated sum of x[i]*w[i].
  double (*compensated_dot)(std::span<const double> x, std::span<const double> w);
  // Sum of |x[i]|, uncompensated.
  double (*abs_sum)(std::span<const double> x);
};

const KernelTable& scalar_kernels() noexcept;
/// Null when the AVX2 translation unit is not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;
std::string_view isa_name(Isa isa) noexcept;

}  // namespace hml::simd
