#include "chernoff/rng.hpp"

#include <cmath>
#include <numbers>

#include "chernoff/simd/kernels.hpp"

namespace chernoff {

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
  const std::uint64_t block = static_cast<std::uint64_t>(counter[0]) |
                              (static_cast<std::uint64_t>(counter[1]) << 32);
  const std::uint64_t stream = static_cast<std::uint64_t>(counter[2]) |
                               (static_cast<std::uint64_t>(counter[3]) << 32);
  PhiloxCounter out{};
  simd::scalar_kernels().philox_fill(key[0], key[1], stream, block, 1, out.data());
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) noexcept {
  return splitmix64(master_seed ^ splitmix64(tag ^ 0x6A09E667F3BCC909ull));
}

namespace {

constexpr int kLayers = 256;
constexpr double kZigR = 3.6541528853610088;

struct Ziggurat {
  double x[kLayers + 1];
  double ratio[kLayers];

  Ziggurat() {
    const double f_r = std::exp(-0.5 * kZigR * kZigR);
    const double tail = std::sqrt(2.0 * std::numbers::pi) * 0.5 *
                        std::erfc(kZigR / std::numbers::sqrt2);
    const double v = kZigR * f_r + tail;
    x[0] = v / f_r;
    x[1] = kZigR;
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(v / x[i - 1] + std::exp(-0.5 * x[i - 1] * x[i - 1])));
    }
    x[kLayers] = 0.0;
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const Ziggurat& ziggurat() {
  static const Ziggurat z;
  return z;
}

constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t id) noexcept : seed_(seed), id_(id) {}

void Stream::refill() noexcept {
  simd::kernels().philox_fill(static_cast<std::uint32_t>(seed_),
                              static_cast<std::uint32_t>(seed_ >> 32), id_, next_block_,
                              kBufferBlocks, buffer_.data());
  next_block_ += kBufferBlocks;
  pos_ = 0;
}

std::uint32_t Stream::next_u32() noexcept {
  if (pos_ == kBufferWords) refill();
  return buffer_[pos_++];
}

std::uint64_t Stream::next_u64() noexcept {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double Stream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoPowMinus53;
}

double Stream::normal_tail(bool negative) noexcept {
  double x, y;
  do {
    x = std::log(uniform()) / kZigR;
    y = std::log(uniform());
  } while (-2.0 * y < x * x);
  return negative ? x - kZigR : kZigR - x;
}

double Stream::normal() noexcept {
  const Ziggurat& z = ziggurat();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int i = static_cast<int>(bits & 0xff);
    const double u = 2.0 * ((static_cast<double>(bits >> 11) + 0.5) * kTwoPowMinus53) - 1.0;
    if (std::fabs(u) < z.ratio[i]) return u * z.x[i];
    if (i == 0) return normal_tail(u < 0.0);
    const double x = u * z.x[i];
    const double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - x * x));
    const double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - x * x));
    if (f1 + uniform() * (f0 - f1) < 1.0) return x;
  }
}

void Stream::fill_normal(std::span<double> out) noexcept {
  for (double& v : out) v = normal();
}

Stream Stream::fork() noexcept {
  ++forks_;
  return Stream(seed_, splitmix64(splitmix64(id_) + forks_));
}

}  // namespace chernoff
