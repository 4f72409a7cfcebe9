#include "chernoff/simd/kernels.hpp"

#include <limits>

#include "philox_constants.hpp"

namespace chernoff::simd {
namespace {

using namespace detail;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

void philox_fill_scalar(std::uint32_t key0, std::uint32_t key1, std::uint64_t stream,
                        std::uint64_t first_block, std::size_t n_blocks, std::uint32_t* out) {
  const auto s_lo = static_cast<std::uint32_t>(stream);
  const auto s_hi = static_cast<std::uint32_t>(stream >> 32);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::uint64_t block = first_block + b;
    std::uint32_t x0 = static_cast<std::uint32_t>(block);
    std::uint32_t x1 = static_cast<std::uint32_t>(block >> 32);
    std::uint32_t x2 = s_lo;
    std::uint32_t x3 = s_hi;
    std::uint32_t k0 = key0;
    std::uint32_t k1 = key1;
    for (int r = 0; r < kPhiloxRounds; ++r) {
      if (r > 0) {
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
      }
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(kPhiloxM0, x0, hi0, lo0);
      mulhilo(kPhiloxM1, x2, hi1, lo1);
      const std::uint32_t y0 = hi1 ^ x1 ^ k0;
      const std::uint32_t y2 = hi0 ^ x3 ^ k1;
      x0 = y0;
      x1 = lo1;
      x2 = y2;
      x3 = lo0;
    }
    out[4 * b + 0] = x0;
    out[4 * b + 1] = x1;
    out[4 * b + 2] = x2;
    out[4 * b + 3] = x3;
  }
}

inline double horner(const double* c, std::size_t n, double t) {
  double p = c[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) p = p * t + c[k];
  return p;
}

void add_poly_scalar(const double* t, double* v, std::size_t n, const double* coeffs,
                     std::size_t n_coeffs) {
  if (n_coeffs == 0) return;
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] + horner(coeffs, n_coeffs, t[i]);
}

MaxLoc max_poly_scalar(const double* t, const double* v, std::size_t n, const double* coeffs,
                       std::size_t n_coeffs) {
  MaxLoc best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = n_coeffs == 0 ? v[i] : v[i] + horner(coeffs, n_coeffs, t[i]);
    if (x > best.value) best = {x, i};
  }
  return best;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", &philox_fill_scalar, &add_poly_scalar,
                                 &max_poly_scalar};
  return table;
}

}  // namespace chernoff::simd
