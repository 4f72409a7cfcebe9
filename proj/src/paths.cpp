#include "chernoff/paths.hpp"

#include <cmath>
#include <utility>

#include "chernoff/errors.hpp"
#include "chernoff/simd/kernels.hpp"

namespace chernoff {

Grid::Grid(std::vector<double> times) : Grid(std::move(times), 0.0) {}

Grid::Grid(std::vector<double> times, double step) : times_(std::move(times)), step_(step) {
  if (times_.empty()) throw InputError("grid is empty");
  bool found = false;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw InputError("grid time not finite");
    if (i > 0 && !(times_[i] > times_[i - 1])) throw InputError("grid not strictly increasing");
    if (times_[i] == 0.0) {
      zero_ = i;
      found = true;
    }
  }
  if (!found) throw InputError("grid does not contain 0");
}

Grid Grid::uniform(double left, double right, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("grid step must be positive");
  if (!(left <= 0.0 && right >= 0.0)) throw InputError("uniform grid must straddle 0");
  const auto k_lo = static_cast<long long>(-std::floor(-left / step + 1e-9));
  const auto k_hi = static_cast<long long>(std::floor(right / step + 1e-9));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long long k = k_lo; k <= k_hi; ++k) times.push_back(static_cast<double>(k) * step);
  return Grid(std::move(times), step);
}

void sample_bm_values(const Grid& grid, Stream& rng, std::span<double> out) {
  if (out.size() != grid.size()) throw InputError("path buffer length differs from grid");
  const auto t = grid.times();
  const std::size_t z = grid.zero_index();
  const std::size_t n = grid.size();
  out[z] = 0.0;

  if (grid.step() > 0.0) {
    const double sd = std::sqrt(grid.step());
    double acc = 0.0;
    for (std::size_t i = z + 1; i < n; ++i) {
      acc += sd * rng.normal();
      out[i] = acc;
    }
    Stream left = rng.fork();
    acc = 0.0;
    for (std::size_t i = z; i-- > 0;) {
      acc += sd * left.normal();
      out[i] = acc;
    }
    return;
  }

  for (std::size_t i = z + 1; i < n; ++i) {
    out[i] = out[i - 1] + std::sqrt(t[i] - t[i - 1]) * rng.normal();
  }
  Stream left = rng.fork();
  for (std::size_t i = z; i-- > 0;) {
    out[i] = out[i + 1] + std::sqrt(t[i + 1] - t[i]) * left.normal();
  }
}

TwoSidedPath sample_bm(std::shared_ptr<const Grid> grid, Stream& rng) {
  if (!grid) throw InputError("null grid");
  TwoSidedPath path{grid, std::vector<double>(grid->size())};
  sample_bm_values(*grid, rng, path.values);
  return path;
}

void add_polynomial(std::span<const double> times, std::span<double> values,
                    const Polynomial& p) {
  if (times.size() != values.size()) throw InputError("drift: length mismatch");
  simd::add_poly(times, values, p.coeffs);
}

TwoSidedPath add_drift(TwoSidedPath path, const DriftSpec& drift) {
  add_polynomial(path.times(), path.values, drift.poly);
  return path;
}

}  // namespace chernoff
