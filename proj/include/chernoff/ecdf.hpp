#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace chernoff {

struct EmpiricalCdf {
  std::vector<double> t_grid;
  std::vector<double> probs;
  std::uint64_t n_reps = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fraction of samples <= t for each t. `sorted` must be ascending.
EmpiricalCdf ecdf_from_sorted(std::span<const double> sorted, std::span<const double> t_grid,
                              std::uint64_t seed);

/// Evenly spaced grid lo, lo + step, ..., hi computed as lo + k * step.
std::vector<double> linear_grid(double lo, double hi, double step);

/// {l/5 : 1 <= l <= 10}.
std::vector<double> default_gap_grid();

}  // namespace chernoff

namespace chernoff {

/// Entries of `table` at the points of `t_grid` (matched to 1e-12).
EmpiricalCdf restrict_to_grid(const EmpiricalCdf& table, std::span<const double> t_grid);

}  // namespace chernoff
