#include "chernoff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "chernoff/errors.hpp"
#include "chernoff/isotonic.hpp"

namespace chernoff {

LseStatSampler::LseStatSampler(const ScenarioSpec& spec, std::size_t n)
    : spec_(spec), n_(n) {
  spec_.validate();
  if (n < 10) throw DomainError("the isotonic statistic needs n >= 10");
  rates_ = oracle_rates(spec_, n);
  x_star_ = x_star(spec_, n);
  f_star_ = spec_.truth_function().f(x_star_);
  errors_.resize(n);
  ys_.resize(n);
  if (!spec_.random_design()) {
    Stream unused(0, 0);
    xs_ = gen_design(spec_, n, unused);
    truth_.resize(n);
    const auto& f = spec_.truth_function().f;
    for (std::size_t i = 0; i < n; ++i) truth_[i] = f(xs_[i]);
  }
}

LseDraw LseStatSampler::draw(Stream& rng) {
  if (spec_.random_design()) {
    xs_ = gen_design(spec_, n_, rng);
    truth_.resize(n_);
    const auto& f = spec_.truth_function().f;
    for (std::size_t i = 0; i < n_; ++i) truth_[i] = f(xs_[i]);
  }
  gen_errors(spec_.error, spec_.sigma, rng, errors_);
  for (std::size_t i = 0; i < n_; ++i) ys_[i] = truth_[i] + errors_[i];
  const IsotonicFit fit = pava(ys_);
  const std::size_t k = evaluation_index(xs_, x_star_);
  const TouchPoints tp = touch_points(fit, xs_, x_star_, rates_.r_n);
  return {rates_.omega_inv * (fit.fitted[k] - f_star_), std::max(tp.h1_star, tp.h2_star)};
}

double standardized_lse_stat(const ScenarioSpec& spec, std::size_t n, Stream& rng) {
  LseStatSampler s(spec, n);
  return s.draw(rng).stat;
}

OracleStatSampler::OracleStatSampler(const ScenarioSpec& spec, std::size_t n, double h1,
                                     double h2)
    : spec_(spec), n_(n), h1_(h1), h2_(h2) {
  spec_.validate();
  if (!(h1 > 0.0 && h2 > 0.0)) throw DomainError("oracle window needs h1, h2 > 0");
  rates_ = oracle_rates(spec_, n);
  x_star_ = x_star(spec_, n);
  f_star_ = spec_.truth_function().f(x_star_);
  errors_.resize(n);
  if (!spec_.random_design()) {
    Stream unused(0, 0);
    xs_ = gen_design(spec_, n, unused);
  }
}

double OracleStatSampler::operator()(Stream& rng) {
  if (spec_.random_design()) xs_ = gen_design(spec_, n_, rng);
  gen_errors(spec_.error, spec_.sigma, rng, errors_);
  const auto& f = spec_.truth_function().f;
  const double lo = x_star_ - h1_ * rates_.r_n;
  const double hi = x_star_ + h2_ * rates_.r_n;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (xs_[i] >= lo && xs_[i] <= hi) {
      sum += f(xs_[i]) + errors_[i];
      ++count;
    }
  }
  if (count == 0) throw DomainError("local average window holds no design point");
  return rates_.omega_inv * (sum / static_cast<double>(count) - f_star_);
}

EmpiricalCdf empirical_cdf(const SamplerFactory& factory, std::span<const double> t_grid,
                           std::size_t n_reps, std::uint64_t seed, unsigned workers) {
  if (n_reps == 0) throw InputError("need at least one replication");
  std::vector<double> draws = parallel_draw(factory, n_reps, seed, workers);
  std::sort(draws.begin(), draws.end());
  return ecdf_from_sorted(draws, t_grid, seed);
}

double berry_esseen_gap(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  if (a.t_grid.size() != b.t_grid.size() || a.probs.size() != a.t_grid.size() ||
      b.probs.size() != b.t_grid.size()) {
    throw InputError("gap: grids differ in length");
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < a.t_grid.size(); ++i) {
    if (std::fabs(a.t_grid[i] - b.t_grid[i]) > 1e-12) throw InputError("gap: grids differ");
    gap = std::max(gap, std::fabs(a.probs[i] - b.probs[i]));
  }
  return gap;
}

double berry_esseen_gap(const EmpiricalCdf& a, const std::function<double(double)>& cdf) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.t_grid.size(); ++i) {
    gap = std::max(gap, std::fabs(a.probs[i] - cdf(a.t_grid[i])));
  }
  return gap;
}

RateFit fit_rate(std::vector<std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw InputError("rate fit needs at least three (n, E_n) pairs");
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, e] : pairs) {
    if (!(n > 0.0)) throw InputError("rate fit: n must be positive");
    if (!(e > 0.0)) throw InputError("rate fit: E_n must be positive");
    sx += std::log(n);
    sy += std::log(e);
  }
  const double m = static_cast<double>(pairs.size());
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, e] : pairs) {
    sxx += (std::log(n) - mx) * (std::log(n) - mx);
    sxy += (std::log(n) - mx) * (std::log(e) - my);
  }
  if (!(sxx > 0.0)) throw InputError("rate fit: all n equal");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [n, e] : pairs) {
    fit.residuals.push_back(std::log(e) - (fit.intercept + fit.slope * std::log(n)));
  }
  fit.pairs = std::move(pairs);
  return fit;
}

double localization_tau_base(const ScenarioSpec& spec, std::size_t n) {
  const Smoothness s = spec.smoothness();
  const double ln = std::log(static_cast<double>(n));
  if (!is_finite_order(s.alpha)) return 1.0;
  if (spec.point.boundary && spec.point.rho < 1.0 / (2.0 * s.alpha + 1.0) - 1e-12) {
    return std::sqrt(ln);
  }
  return std::pow(ln, 1.0 / (2.0 * s.alpha));
}

std::vector<LseDraw> lse_draws(const ScenarioSpec& spec, std::size_t n, std::size_t n_reps,
                               std::uint64_t seed, unsigned workers) {
  workers = std::max(1u, workers);
  std::vector<std::unique_ptr<LseStatSampler>> samplers;
  for (unsigned w = 0; w < workers; ++w) samplers.push_back(std::make_unique<LseStatSampler>(spec, n));
  std::vector<LseDraw> out(n_reps);
  parallel_for(n_reps, workers, [&](std::size_t r, unsigned w) {
    Stream rng(seed, r);
    out[r] = samplers[w]->draw(rng);
  });
  return out;
}

DiagnosticsReport localization_report(const ScenarioSpec& spec, std::size_t n,
                                      std::span<const LseDraw> draws, double K_t, double K_tau) {
  if (draws.empty()) throw InputError("no draws");
  DiagnosticsReport rep;
  rep.K_t = K_t;
  rep.K_tau = K_tau;
  rep.t_n = K_t * std::sqrt(std::log(static_cast<double>(n)));
  rep.tau_n = K_tau * localization_tau_base(spec, n);
  std::size_t stat_hits = 0, touch_hits = 0;
  for (const LseDraw& d : draws) {
    if (std::fabs(d.stat) > rep.t_n) ++stat_hits;
    if (d.h_star > rep.tau_n) ++touch_hits;
  }
  rep.n_reps = draws.size();
  rep.freq_stat_exceeds = static_cast<double>(stat_hits) / static_cast<double>(draws.size());
  rep.freq_touch_exceeds = static_cast<double>(touch_hits) / static_cast<double>(draws.size());
  return rep;
}

DiagnosticsReport localization_diagnostics(const ScenarioSpec& spec, std::size_t n,
                                           std::size_t n_reps, double K_t, double K_tau,
                                           std::uint64_t seed, unsigned workers) {
  const auto draws = lse_draws(spec, n, n_reps, seed, workers);
  return localization_report(spec, n, draws, K_t, K_tau);
}

}  // namespace chernoff
