#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chernoff/drift.hpp"
#include "chernoff/paths.hpp"
#include "chernoff/rng.hpp"

namespace chernoff {

/// P(sup_{0 <= h <= 1} B(h) + mu h >= y).
double sup_bm_linear_drift_cdf(double y, double mu);

/// Density of sup_{0 <= h <= 1} B(h) + mu h.
double sup_bm_linear_drift_pdf(double y, double mu);

/// Grid: max over {0, step, ..., 1} of B(h) + P(h).
/// Bridge: on each grid cell the process is treated as a Brownian bridge
/// between its endpoint values (drift linearly interpolated) and the cell
/// maximum is drawn exactly. Exact in law for linear drifts.
enum class SupMethod { Grid, Bridge };

class SupSampler {
 public:
  SupSampler(Polynomial drift, double step, SupMethod method = SupMethod::Grid);

  double sample(Stream& rng, std::vector<double>& values) const;
  /// The supremum for a given standard BM path on grid().
  double evaluate(std::span<const double> bm_values) const;
  /// Bridge maxima for a path already on grid() (values include the drift).
  double bridge_max(std::span<const double> path, Stream& rng) const;
  const Grid& grid() const noexcept { return *grid_; }
  SupMethod method() const noexcept { return method_; }

 private:
  std::shared_ptr<const Grid> grid_;
  Polynomial drift_;
  SupMethod method_;
};

double sample_sup_drifted_bm(const Polynomial& drift, double step, Stream& rng,
                             SupMethod method = SupMethod::Grid);

/// sup_u of the fraction of sorted samples in [u - eps, u + eps].
double levy_concentration(std::span<const double> sorted, double eps);

/// eps * b' log+(b'/eps) max(1, b' eps / log+(1/eps)) max(b', log+(b'/eps)),
/// b' = max(1, b), log+ = max(1, log).
double anticonc_envelope(double eps, double b);

struct ConcentrationProfile {
  std::vector<double> eps_grid;
  std::vector<double> levels;
  std::vector<double> envelopes;
  std::uint64_t n_samples = 0;
  double b = 0.0;
};

ConcentrationProfile concentration_profile(std::span<const double> sorted,
                                           std::span<const double> eps_grid, double b);

}  // namespace chernoff
