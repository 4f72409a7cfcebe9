#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// where the build and the CPU allow it, an AVX2 version. The variants produce
// bit-identical results; the active table is picked once at runtime.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace chernoff::simd {

struct MaxLoc {
  double value;
  std::size_t index;
};

struct KernelTable {
  std::string_view name;

  // Philox4x32-10 blocks for counters (first_block + b, stream) under `key`.
  // Writes 4 * n_blocks words, block-major.
  void (*philox_fill)(std::uint32_t key0, std::uint32_t key1, std::uint64_t stream,
                      std::uint64_t first_block, std::size_t n_blocks, std::uint32_t* out);

  // v[i] += p(t[i]) with p given by ascending coefficients, evaluated by Horner.
  void (*add_poly)(const double* t, double* v, std::size_t n, const double* coeffs,
                   std::size_t n_coeffs);

  // max_i v[i] + p(t[i]) and the first index attaining it.
  MaxLoc (*max_poly)(const double* t, const double* v, std::size_t n, const double* coeffs,
                     std::size_t n_coeffs);
};

const KernelTable& scalar_kernels() noexcept;

/// Null when the AVX2 variants were not compiled or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Dispatched table. CHERNOFF_SIMD=scalar in the environment forces the
/// reference kernels.
const KernelTable& kernels() noexcept;

// Span front-ends over the dispatched table.

void philox_fill(std::uint32_t key0, std::uint32_t key1, std::uint64_t stream,
                 std::uint64_t first_block, std::span<std::uint32_t> out);

void add_poly(std::span<const double> t, std::span<double> v, std::span<const double> coeffs);

MaxLoc max_poly(std::span<const double> t, std::span<const double> v,
                std::span<const double> coeffs);

}  // namespace chernoff::simd
