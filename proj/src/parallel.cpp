#include "chernoff/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace chernoff {

unsigned default_workers() noexcept {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t, unsigned)>& body) {
  if (n == 0) return;
  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i, 0);
    return;
  }
  const std::size_t chunk = std::max<std::size_t>(1, n / (static_cast<std::size_t>(workers) * 16));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&](unsigned w) {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= n) return;
        const std::size_t end = std::min(n, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) body(i, w);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      next.store(n);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> parallel_draw(const SamplerFactory& factory, std::size_t n_reps,
                                  std::uint64_t seed, unsigned workers) {
  workers = std::max(1u, workers);
  std::vector<Sampler> samplers;
  samplers.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) samplers.push_back(factory());
  std::vector<double> out(n_reps);
  parallel_for(n_reps, workers, [&](std::size_t r, unsigned w) {
    Stream rng(seed, r);
    out[r] = samplers[w](rng);
  });
  return out;
}

}  // namespace chernoff
