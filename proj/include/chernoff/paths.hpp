#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "chernoff/drift.hpp"
#include "chernoff/rng.hpp"

namespace chernoff {

/// Strictly increasing time points containing 0.
class Grid {
 public:
  explicit Grid(std::vector<double> times);

  /// Times k * step for every integer k with left <= k * step <= right.
  static Grid uniform(double left, double right, double step);

  std::span<const double> times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }
  std::size_t zero_index() const noexcept { return zero_; }
  double front() const noexcept { return times_.front(); }
  double back() const noexcept { return times_.back(); }
  /// Common spacing for uniform grids, 0 otherwise.
  double step() const noexcept { return step_; }

 private:
  Grid(std::vector<double> times, double step);

  std::vector<double> times_;
  std::size_t zero_ = 0;
  double step_ = 0.0;
};

struct TwoSidedPath {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;

  std::span<const double> times() const noexcept { return grid->times(); }
  std::size_t size() const noexcept { return values.size(); }
};

/// Standard Brownian motion on the grid with B(0) = 0. Increments are drawn
/// outward from 0: the right half from `rng`, the left half from `rng.fork()`,
/// so extending the horizon leaves earlier values unchanged.
TwoSidedPath sample_bm(std::shared_ptr<const Grid> grid, Stream& rng);

/// Allocation-free variant; `out` must have grid.size() entries.
void sample_bm_values(const Grid& grid, Stream& rng, std::span<double> out);

TwoSidedPath add_drift(TwoSidedPath path, const DriftSpec& drift);

/// values[i] += p(times[i]) in place.
void add_polynomial(std::span<const double> times, std::span<double> values, const Polynomial& p);

}  // namespace chernoff
