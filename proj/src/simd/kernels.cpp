#include "chernoff/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace chernoff::simd {

const KernelTable* avx2_kernels_compiled() noexcept;

const KernelTable* avx2_kernels() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_kernels_compiled() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() noexcept {
  static const KernelTable* active = [] {
    const char* env = std::getenv("CHERNOFF_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
    const KernelTable* wide = avx2_kernels();
    return wide != nullptr ? wide : &scalar_kernels();
  }();
  return *active;
}

void philox_fill(std::uint32_t key0, std::uint32_t key1, std::uint64_t stream,
                 std::uint64_t first_block, std::span<std::uint32_t> out) {
  kernels().philox_fill(key0, key1, stream, first_block, out.size() / 4, out.data());
}

void add_poly(std::span<const double> t, std::span<double> v, std::span<const double> coeffs) {
  kernels().add_poly(t.data(), v.data(), v.size(), coeffs.data(), coeffs.size());
}

MaxLoc max_poly(std::span<const double> t, std::span<const double> v,
                std::span<const double> coeffs) {
  return kernels().max_poly(t.data(), v.data(), v.size(), coeffs.data(), coeffs.size());
}

}  // namespace chernoff::simd
