#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace chernoff {

/// Vertices of a greatest convex minorant or least concave majorant.
/// Collinear interior points are not vertices.
struct Hull {
  enum class Kind { Convex, Concave };

  Kind kind = Kind::Convex;
  std::vector<std::size_t> indices;  // into the input points
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const noexcept { return times.size(); }
  /// Slope of the segment between vertices k and k + 1.
  double slope(std::size_t k) const noexcept;
  /// Piecewise-linear interpolant of the vertices.
  double value_at(double t) const;
};

Hull gcm(std::span<const double> t, std::span<const double> v);
Hull lcm(std::span<const double> t, std::span<const double> v);

/// Slope of the segment whose interval (prev, this] contains t.
double left_slope_at(const Hull& hull, double t);

/// Left derivative at 0; when 0 is the first vertex, the first segment slope.
double slope_at_zero(const Hull& hull);

/// Left derivative at t[k] of the GCM of (t, v), without materialising the
/// hull. `stack` is scratch space. Requires 0 < k < n.
double gcm_left_slope_at_index(std::span<const double> t, std::span<const double> v,
                               std::size_t k, std::vector<std::size_t>& stack);

/// Smallest index attaining max_i v[i] - a * t[i].
std::size_t first_argmax_index(std::span<const double> t, std::span<const double> v, double a);
double first_argmax(std::span<const double> t, std::span<const double> v, double a);

}  // namespace chernoff
