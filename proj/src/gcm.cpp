#include "chernoff/gcm.hpp"

#include <algorithm>

#include "chernoff/errors.hpp"
#include "chernoff/simd/kernels.hpp"

namespace chernoff {
namespace {

void check_points(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw InputError("hull: times and values differ in length");
  if (t.size() < 2) throw InputError("hull needs at least two points");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw InputError("hull: times not strictly increasing");
  }
}

// Lower hull indices; pops on non-left turns so collinear points drop out.
void lower_hull(std::span<const double> t, std::span<const double> v,
                std::vector<std::size_t>& stack) {
  stack.clear();
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (stack.size() >= 2) {
      const std::size_t o = stack[stack.size() - 2];
      const std::size_t a = stack.back();
      const double cross = (t[a] - t[o]) * (v[i] - v[o]) - (v[a] - v[o]) * (t[i] - t[o]);
      if (cross > 0.0) break;
      stack.pop_back();
    }
    stack.push_back(i);
  }
}

}  // namespace

double Hull::slope(std::size_t k) const noexcept {
  return (values[k + 1] - values[k]) / (times[k + 1] - times[k]);
}

double Hull::value_at(double t) const {
  if (t < times.front() || t > times.back()) throw DomainError("hull evaluated off its domain");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  const auto j = static_cast<std::size_t>(it - times.begin());
  if (times[j] == t) return values[j];
  const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

Hull gcm(std::span<const double> t, std::span<const double> v) {
  check_points(t, v);
  Hull h;
  lower_hull(t, v, h.indices);
  h.times.reserve(h.indices.size());
  h.values.reserve(h.indices.size());
  for (std::size_t i : h.indices) {
    h.times.push_back(t[i]);
    h.values.push_back(v[i]);
  }
  return h;
}

Hull lcm(std::span<const double> t, std::span<const double> v) {
  check_points(t, v);
  std::vector<double> neg(v.begin(), v.end());
  for (double& x : neg) x = -x;
  Hull h = gcm(t, neg);
  h.kind = Hull::Kind::Concave;
  for (double& x : h.values) x = -x;
  return h;
}

double left_slope_at(const Hull& hull, double t) {
  if (hull.size() < 2) throw DomainError("hull has no segments");
  if (!(t > hull.times.front()) || t > hull.times.back()) {
    throw DomainError("left slope requested outside (first, last] vertex times");
  }
  const auto it = std::lower_bound(hull.times.begin(), hull.times.end(), t);
  const auto j = static_cast<std::size_t>(it - hull.times.begin());
  return hull.slope(j - 1);
}

double slope_at_zero(const Hull& hull) {
  if (hull.size() >= 2 && hull.times.front() == 0.0) return hull.slope(0);
  return left_slope_at(hull, 0.0);
}

double gcm_left_slope_at_index(std::span<const double> t, std::span<const double> v,
                               std::size_t k, std::vector<std::size_t>& stack) {
  if (t.size() != v.size()) throw InputError("hull: times and values differ in length");
  if (k == 0 || k >= t.size()) throw DomainError("left slope needs a point on the left");
  lower_hull(t, v, stack);
  const auto it = std::lower_bound(stack.begin(), stack.end(), k);
  const std::size_t b = *it;
  const std::size_t a = *(it - 1);
  return (v[b] - v[a]) / (t[b] - t[a]);
}

std::size_t first_argmax_index(std::span<const double> t, std::span<const double> v, double a) {
  if (t.empty() || t.size() != v.size()) throw InputError("argmax: bad input lengths");
  const double coeffs[2] = {0.0, -a};
  return simd::max_poly(t, v, coeffs).index;
}

double first_argmax(std::span<const double> t, std::span<const double> v, double a) {
  return t[first_argmax_index(t, v, a)];
}

}  // namespace chernoff
