#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chernoff {

struct RegressionSample {
  std::vector<double> xs;     // nondecreasing
  std::vector<double> ys;
  std::vector<double> truth;  // f0(xs) when known, else empty

  void validate() const;
  std::size_t size() const noexcept { return ys.size(); }
};

struct Block {
  std::size_t begin;  // inclusive
  std::size_t end;    // exclusive
  double level;
  double weight;
};

struct IsotonicFit {
  std::vector<Block> blocks;  // levels strictly increasing
  std::vector<double> fitted;

  /// Block holding index i.
  const Block& block_of(std::size_t i) const;
};

/// Weighted pool-adjacent-violators; `weights` empty means unit weights.
IsotonicFit pava(std::span<const double> ys, std::span<const double> weights = {});
IsotonicFit pava(const RegressionSample& sample);

/// Index whose fitted value the step-function convention assigns to x_star:
/// the first design point at or to the right of x_star.
std::size_t evaluation_index(std::span<const double> xs, double x_star);

struct TouchPoints {
  double h1_star = 0.0;
  double h2_star = 0.0;
  double u_star = 0.0;
  double v_star = 0.0;
};

struct MaxMinResult {
  double value;
  std::size_t first;  // window indices, inclusive
  std::size_t last;
  double u_star;
  double v_star;
};

/// max over u <= x_star of min over v >= x_star of the window average,
/// by direct enumeration. Ties go to the widest window.
MaxMinResult maxmin_at(double x_star, const RegressionSample& sample);

/// Touch points from the max-min window, in units of r_n.
TouchPoints touch_points(const RegressionSample& sample, double x_star, double r_n);

/// Same window read off the PAVA block containing the evaluation index; O(n).
TouchPoints touch_points(const IsotonicFit& fit, std::span<const double> xs, double x_star,
                         double r_n);

}  // namespace chernoff
