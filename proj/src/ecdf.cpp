#include "chernoff/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chernoff/errors.hpp"

namespace chernoff {

void EmpiricalCdf::validate() const {
  if (t_grid.size() != probs.size()) throw InputError("cdf grid and probabilities differ in length");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) throw InputError("cdf value outside [0, 1]");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw InputError("cdf grid not increasing");
    if (i > 0 && probs[i] < probs[i - 1]) throw InputError("cdf decreasing");
  }
}

EmpiricalCdf ecdf_from_sorted(std::span<const double> sorted, std::span<const double> t_grid,
                              std::uint64_t seed) {
  if (sorted.empty()) throw InputError("empirical cdf of empty sample");
  EmpiricalCdf out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.probs.reserve(t_grid.size());
  out.n_reps = sorted.size();
  out.seed = seed;
  const double n = static_cast<double>(sorted.size());
  for (double t : t_grid) {
    const auto k = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    out.probs.push_back(static_cast<double>(k) / n);
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InputError("bad linear grid");
  std::vector<double> out;
  const double inv = 1.0 / step;
  const double m = std::round(inv);
  if (std::fabs(inv - m) < 1e-9 * m) {
    // Rational grid k / m: points shared with other grids compare equal.
    const auto k_lo = static_cast<long long>(std::llround(lo * m));
    const auto k_hi = static_cast<long long>(std::llround(hi * m));
    for (long long k = k_lo; k <= k_hi; ++k) out.push_back(static_cast<double>(k) / m);
    return out;
  }
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  for (long long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

std::vector<double> default_gap_grid() {
  std::vector<double> g;
  for (int l = 1; l <= 10; ++l) g.push_back(l / 5.0);
  return g;
}

}  // namespace chernoff

namespace chernoff {

EmpiricalCdf restrict_to_grid(const EmpiricalCdf& table, std::span<const double> t_grid) {
  EmpiricalCdf out;
  out.n_reps = table.n_reps;
  out.seed = table.seed;
  for (double t : t_grid) {
    const auto it = std::lower_bound(table.t_grid.begin(), table.t_grid.end(), t - 1e-12);
    if (it == table.t_grid.end() || std::fabs(*it - t) > 1e-12) {
      throw InputError("table has no entry at t = " + std::to_string(t));
    }
    out.t_grid.push_back(t);
    out.probs.push_back(table.probs[static_cast<std::size_t>(it - table.t_grid.begin())]);
  }
  return out;
}

}  // namespace chernoff
