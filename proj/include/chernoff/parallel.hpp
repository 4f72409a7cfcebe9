#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "chernoff/rng.hpp"

namespace chernoff {

/// Runs body(i, worker) for i in [0, n) on `workers` threads. Indices are
/// handed out in chunks; the caller must make body(i) depend on i only.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, unsigned)>& body);

using Sampler = std::function<double(Stream&)>;
/// Called once per worker; the returned sampler may own scratch space.
using SamplerFactory = std::function<Sampler()>;

/// Draw r uses Stream(seed, r), so the result does not depend on `workers`.
std::vector<double> parallel_draw(const SamplerFactory& factory, std::size_t n_reps,
                                  std::uint64_t seed, unsigned workers);

unsigned default_workers() noexcept;

}  // namespace chernoff
