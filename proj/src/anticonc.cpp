#include "chernoff/anticonc.hpp"

#include <algorithm>
#include <cmath>

#include "chernoff/errors.hpp"
#include "chernoff/simd/kernels.hpp"
#include "chernoff/stats.hpp"

namespace chernoff {

double sup_bm_linear_drift_cdf(double y, double mu) {
  if (y <= 0.0) return 1.0;
  const double p = normal_sf(y - mu) + std::exp(2.0 * mu * y + log_normal_sf(y + mu));
  return std::clamp(p, 0.0, 1.0);
}

double sup_bm_linear_drift_pdf(double y, double mu) {
  if (y < 0.0) return 0.0;
  return 2.0 * normal_pdf(y - mu) - 2.0 * mu * std::exp(2.0 * mu * y + log_normal_sf(y + mu));
}

SupSampler::SupSampler(Polynomial drift, double step, SupMethod method)
    : grid_(std::make_shared<const Grid>(Grid::uniform(0.0, 1.0, step))),
      drift_(std::move(drift)),
      method_(method) {}

double SupSampler::evaluate(std::span<const double> bm) const {
  return simd::max_poly(grid_->times(), bm, drift_.coeffs).value;
}

double SupSampler::bridge_max(std::span<const double> path, Stream& rng) const {
  const auto& t = grid_->times();
  double best = path[0];
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double a = path[i - 1], b = path[i];
    const double d = b - a;
    const double m = 0.5 * (a + b + std::sqrt(d * d - 2.0 * (t[i] - t[i - 1]) * std::log(rng.uniform())));
    best = std::max(best, m);
  }
  return best;
}

double SupSampler::sample(Stream& rng, std::vector<double>& values) const {
  values.resize(grid_->size());
  sample_bm_values(*grid_, rng, values);
  if (method_ == SupMethod::Grid) return evaluate(values);
  simd::add_poly(grid_->times(), values, drift_.coeffs);
  return bridge_max(values, rng);
}

double sample_sup_drifted_bm(const Polynomial& drift, double step, Stream& rng, SupMethod method) {
  SupSampler s(drift, step, method);
  std::vector<double> values;
  return s.sample(rng, values);
}

double levy_concentration(std::span<const double> sorted, double eps) {
  if (sorted.empty()) throw InputError("concentration of an empty sample");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double width = 2.0 * eps;
  std::size_t best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (j < i) j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] - sorted[i] <= width) ++j;
    best = std::max(best, j - i + 1);
  }
  return static_cast<double>(best) / static_cast<double>(sorted.size());
}

namespace {
double log_plus(double x) { return std::max(1.0, std::log(x)); }
}  // namespace

double anticonc_envelope(double eps, double b) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const double bb = std::max(1.0, b);
  const double lb = log_plus(bb / eps);
  const double L = bb * lb * std::max(1.0, bb * eps / log_plus(1.0 / eps)) * std::max(bb, lb);
  return eps * L;
}

ConcentrationProfile concentration_profile(std::span<const double> sorted,
                                           std::span<const double> eps_grid, double b) {
  ConcentrationProfile p;
  p.n_samples = sorted.size();
  p.b = b;
  for (double e : eps_grid) {
    p.eps_grid.push_back(e);
    p.levels.push_back(levy_concentration(sorted, e));
    p.envelopes.push_back(anticonc_envelope(e, b));
  }
  return p;
}

}  // namespace chernoff
