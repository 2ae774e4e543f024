#include <cstdlib>
#include <cstring>

#include "hml/simd/kernels.hpp"

namespace hml::simd {

#ifdef HML_HAVE_AVX2_TU
const KernelTable& avx2_kernel_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#ifdef HML_HAVE_AVX2_TU
  static const bool supported = __builtin_cpu_supports("avx2");
  if (supported) return &avx2_kernel_table();
#endif
  return nullptr;
}

namespace {

const KernelTable& select() noexcept {
  const char* forced = std::getenv("HML_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace hml::simd
