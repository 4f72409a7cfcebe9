#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "chernoff/dgp.hpp"
#include "chernoff/ecdf.hpp"
#include "chernoff/oracle.hpp"
#include "chernoff/parallel.hpp"

namespace chernoff {

/// One draw of omega_n^-1 (f_hat_n(x*) - f0(x*)) and the PAVA touch points.
struct LseDraw {
  double stat;
  double h_star;  // max(h1*, h2*)
};

/// Reusable per-thread state for the isotonic statistic at a fixed n.
class LseStatSampler {
 public:
  LseStatSampler(const ScenarioSpec& spec, std::size_t n);

  LseDraw draw(Stream& rng);
  double operator()(Stream& rng) { return draw(rng).stat; }

  double omega_inv() const noexcept { return rates_.omega_inv; }
  double r_n() const noexcept { return rates_.r_n; }

 private:
  ScenarioSpec spec_;
  std::size_t n_;
  OracleRates rates_;
  double x_star_;
  double f_star_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> truth_;
  std::vector<double> errors_;
};

double standardized_lse_stat(const ScenarioSpec& spec, std::size_t n, Stream& rng);

/// omega_n^-1 (local average - f0(x*)) with the oracle bandwidth.
class OracleStatSampler {
 public:
  OracleStatSampler(const ScenarioSpec& spec, std::size_t n, double h1, double h2);
  double operator()(Stream& rng);

 private:
  ScenarioSpec spec_;
  std::size_t n_;
  OracleRates rates_;
  double x_star_;
  double f_star_;
  double h1_, h2_;
  std::vector<double> xs_;
  std::vector<double> errors_;
};

EmpiricalCdf empirical_cdf(const SamplerFactory& factory, std::span<const double> t_grid,
                           std::size_t n_reps, std::uint64_t seed, unsigned workers = 1);

/// max_t |a(t) - b(t)| over a shared grid.
double berry_esseen_gap(const EmpiricalCdf& a, const EmpiricalCdf& b);
double berry_esseen_gap(const EmpiricalCdf& a, const std::function<double(double)>& cdf);

struct RateFit {
  std::vector<std::pair<double, double>> pairs;  // (n, E_n)
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

/// OLS of log E_n on log n.
RateFit fit_rate(std::vector<std::pair<double, double>> pairs);

struct DiagnosticsReport {
  double K_t = 0.0;
  double K_tau = 0.0;
  double t_n = 0.0;
  double tau_n = 0.0;
  double freq_stat_exceeds = 0.0;
  double freq_touch_exceeds = 0.0;
  std::uint64_t n_reps = 0;
};

/// tau_n uses (log n)^(1/(2 alpha)), or sqrt(log n) in the boundary branch
/// rho < 1/(2 alpha + 1), or 1 for alpha = infinity.
double localization_tau_base(const ScenarioSpec& spec, std::size_t n);

std::vector<LseDraw> lse_draws(const ScenarioSpec& spec, std::size_t n, std::size_t n_reps,
                               std::uint64_t seed, unsigned workers = 1);

DiagnosticsReport localization_report(const ScenarioSpec& spec, std::size_t n,
                                      std::span<const LseDraw> draws, double K_t, double K_tau);

DiagnosticsReport localization_diagnostics(const ScenarioSpec& spec, std::size_t n,
                                           std::size_t n_reps, double K_t, double K_tau,
                                           std::uint64_t seed, unsigned workers = 1);

}  // namespace chernoff
