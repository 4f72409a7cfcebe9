// Compiled with -mavx2 only; reached through avx2_kernels() after a CPU check.

#include "chernoff/simd/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <limits>

#include "philox_constants.hpp"

namespace chernoff::simd {
namespace {

using namespace detail;

// 32x32 -> 64 products of all eight lanes against a broadcast constant.
inline void mulhilo8(__m256i x, __m256i m, __m256i& hi, __m256i& lo) {
  const __m256i even = _mm256_mul_epu32(x, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

void philox_fill_avx2(std::uint32_t key0, std::uint32_t key1, std::uint64_t stream,
                      std::uint64_t first_block, std::size_t n_blocks, std::uint32_t* out) {
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
  const __m256i s_lo = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream)));
  const __m256i s_hi = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream >> 32)));

  std::size_t b = 0;
  alignas(32) std::uint32_t c0[8], c1[8], r0[8], r1[8], r2[8], r3[8];
  for (; b + 8 <= n_blocks; b += 8) {
    for (int l = 0; l < 8; ++l) {
      const std::uint64_t block = first_block + b + static_cast<std::uint64_t>(l);
      c0[l] = static_cast<std::uint32_t>(block);
      c1[l] = static_cast<std::uint32_t>(block >> 32);
    }
    __m256i x0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c0));
    __m256i x1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c1));
    __m256i x2 = s_lo;
    __m256i x3 = s_hi;
    std::uint32_t k0 = key0;
    std::uint32_t k1 = key1;
    for (int r = 0; r < kPhiloxRounds; ++r) {
      if (r > 0) {
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
      }
      __m256i hi0, lo0, hi1, lo1;
      mulhilo8(x0, m0, hi0, lo0);
      mulhilo8(x2, m1, hi1, lo1);
      const __m256i kv0 = _mm256_set1_epi32(static_cast<int>(k0));
      const __m256i kv1 = _mm256_set1_epi32(static_cast<int>(k1));
      x0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), kv0);
      x1 = lo1;
      x2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), kv1);
      x3 = lo0;
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(r0), x0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r1), x1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r2), x2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(r3), x3);
    std::uint32_t* dst = out + 4 * b;
    for (int l = 0; l < 8; ++l) {
      dst[4 * l + 0] = r0[l];
      dst[4 * l + 1] = r1[l];
      dst[4 * l + 2] = r2[l];
      dst[4 * l + 3] = r3[l];
    }
  }
  if (b < n_blocks) {
    scalar_kernels().philox_fill(key0, key1, stream, first_block + b, n_blocks - b, out + 4 * b);
  }
}

inline __m256d horner4(const double* c, std::size_t n, __m256d t) {
  __m256d p = _mm256_set1_pd(c[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) {
    p = _mm256_add_pd(_mm256_mul_pd(p, t), _mm256_set1_pd(c[k]));
  }
  return p;
}

inline double horner1(const double* c, std::size_t n, double t) {
  double p = c[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) p = p * t + c[k];
  return p;
}

void add_poly_avx2(const double* t, double* v, std::size_t n, const double* coeffs,
                   std::size_t n_coeffs) {
  if (n_coeffs == 0) return;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = horner4(coeffs, n_coeffs, _mm256_loadu_pd(t + i));
    _mm256_storeu_pd(v + i, _mm256_add_pd(_mm256_loadu_pd(v + i), p));
  }
  for (; i < n; ++i) v[i] = v[i] + horner1(coeffs, n_coeffs, t[i]);
}

MaxLoc max_poly_avx2(const double* t, const double* v, std::size_t n, const double* coeffs,
                     std::size_t n_coeffs) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  __m256d best = _mm256_set1_pd(kNegInf);
  __m256i best_idx = _mm256_setzero_si256();
  __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
  const __m256i four = _mm256_set1_epi64x(4);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(v + i);
    if (n_coeffs != 0) x = _mm256_add_pd(x, horner4(coeffs, n_coeffs, _mm256_loadu_pd(t + i)));
    const __m256d gt = _mm256_cmp_pd(x, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, x, gt);
    best_idx = _mm256_blendv_epi8(best_idx, idx, _mm256_castpd_si256(gt));
    idx = _mm256_add_epi64(idx, four);
  }

  alignas(32) double lane_val[4];
  alignas(32) long long lane_idx[4];
  _mm256_store_pd(lane_val, best);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_idx), best_idx);
  MaxLoc out{kNegInf, 0};
  for (int l = 0; l < 4; ++l) {
    const auto li = static_cast<std::size_t>(lane_idx[l]);
    if (lane_val[l] > out.value || (lane_val[l] == out.value && li < out.index)) {
      out = {lane_val[l], li};
    }
  }
  for (; i < n; ++i) {
    const double x = n_coeffs == 0 ? v[i] : v[i] + horner1(coeffs, n_coeffs, t[i]);
    if (x > out.value) out = {x, i};
  }
  return out;
}

}  // namespace

const KernelTable* avx2_kernels_compiled() noexcept {
  static const KernelTable table{"avx2", &philox_fill_avx2, &add_poly_avx2, &max_poly_avx2};
  return &table;
}

}  // namespace chernoff::simd

#else

namespace chernoff::simd {
const KernelTable* avx2_kernels_compiled() noexcept { return nullptr; }
}  // namespace chernoff::simd

#endif
