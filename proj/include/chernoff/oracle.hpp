#pragma once

#include <cstddef>

#include "chernoff/dgp.hpp"
#include "chernoff/drift.hpp"
#include "chernoff/isotonic.hpp"

namespace chernoff {

struct OracleRates {
  double r_n;
  double omega_inv;  // sqrt(n r_n)
  double B_n;        // Berry-Esseen order, no constant
  double B_exponent; // B_n = n^-B_exponent (log n)^B_log_power
  double B_log_power;
};

OracleRates oracle_rates(const ScenarioSpec& spec, std::size_t n);

DriftSpec drift_Q(const ScenarioSpec& spec);

/// Mean of ys over design points in [x* - h1 r_n, x* + h2 r_n].
double local_average(double x_star, double r_n, double h1, double h2,
                     const RegressionSample& sample);

struct BiasExpansion {
  double leading;         // mean of f0(X) - f0(x*) over the window, leading order
  double remainder_order; // magnitude of the neglected terms
};

BiasExpansion bias_expansion(const ScenarioSpec& spec, std::size_t n, double h1, double h2);

/// P(B_{sigma,Lambda0,Q}(h1, h2) <= t); the law is Gaussian.
double oracle_limit_cdf(double t, double h1, double h2, double sigma, double lambda0,
                        const DriftSpec& Q);

}  // namespace chernoff
