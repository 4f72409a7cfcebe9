#pragma once

#include <functional>
#include <span>

namespace chernoff {

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;

/// 1 - Phi(x), accurate in the upper tail.
double normal_sf(double x) noexcept;

/// log(1 - Phi(x)); finite for all finite x (asymptotic series past x = 25).
double log_normal_sf(double x) noexcept;

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  // unbiased
double correlation(std::span<const double> xs, std::span<const double> ys);

/// sup_t |F_n(t) - F(t)| for sorted samples.
double ks_one_sample(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// sup_t |F_a(t) - F_b(t)| for two sorted samples.
double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

/// Empirical quantile by linear interpolation between order statistics.
double quantile(std::span<const double> sorted, double p);

}  // namespace chernoff
