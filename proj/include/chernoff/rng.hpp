#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace chernoff {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32-10 block (Salmon et al. counter-based generator).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// SplitMix64 finalizer; used to derive keys and stream ids.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for a named sub-experiment of a master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) noexcept;

/**
 * Counter-based random stream.
 *
 * A stream is identified by (seed, id); its output is the Philox sequence for
 * counters (block, id) with block = 0, 1, 2, ... and key = seed. Two streams
 * with distinct ids are independent, so replication r of an experiment owns
 * stream (seed, r) regardless of which worker runs it.
 */
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t id() const noexcept { return id_; }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;

  /// Standard normal (256-layer ziggurat).
  double normal() noexcept;

  void fill_normal(std::span<double> out) noexcept;

  /// Independent child stream. Successive forks of the same parent differ.
  Stream fork() noexcept;

 private:
  static constexpr std::size_t kBufferBlocks = 64;
  static constexpr std::size_t kBufferWords = 4 * kBufferBlocks;

  void refill() noexcept;
  double normal_tail(bool negative) noexcept;

  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t next_block_ = 0;
  std::uint64_t forks_ = 0;
  std::size_t pos_ = kBufferWords;
  std::array<std::uint32_t, kBufferWords> buffer_{};
};

}  // namespace chernoff
