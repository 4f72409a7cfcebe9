#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "chernoff/errors.hpp"
#include "chernoff/experiments.hpp"
#include "chernoff/stats.hpp"

using namespace chernoff;

namespace {

SamplerFactory constant_sampler(double c) {
  return [c]() -> Sampler { return [c](Stream&) { return c; }; };
}

SamplerFactory sign_sampler() {
  return []() -> Sampler { return [](Stream& rng) { return rng.uniform() < 0.5 ? -1.0 : 1.0; }; };
}

SamplerFactory lse_factory(const ScenarioSpec& spec, std::size_t n) {
  return [spec, n]() -> Sampler {
    auto s = std::make_shared<LseStatSampler>(spec, n);
    return [s](Stream& rng) { return (*s)(rng); };
  };
}

}  // namespace

TEST(EmpiricalCdf, ConstantSampler) {
  const std::vector<double> grid{-1.0, 0.49, 0.5, 2.0};
  const EmpiricalCdf e = empirical_cdf(constant_sampler(0.5), grid, 100, 1);
  EXPECT_EQ(e.probs, (std::vector<double>{0.0, 0.0, 1.0, 1.0}));
  EXPECT_EQ(e.n_reps, 100u);
  EXPECT_THROW(empirical_cdf(constant_sampler(0.5), grid, 0, 1), InputError);
}

TEST(EmpiricalCdf, SignSampler) {
  const std::size_t N = 20000;
  const std::vector<double> grid{-1.5, -1.0, 0.0, 0.99, 1.0, 1e300};
  const EmpiricalCdf e = empirical_cdf(sign_sampler(), grid, N, 2);
  EXPECT_EQ(e.probs[0], 0.0);
  for (int i = 1; i <= 3; ++i) EXPECT_NEAR(e.probs[i], 0.5, 3.0 / std::sqrt(double(N)));
  EXPECT_EQ(e.probs[1], e.probs[3]);
  EXPECT_EQ(e.probs[4], 1.0);
  EXPECT_EQ(e.probs[5], 1.0);
}

TEST(EmpiricalCdf, ScheduleIndependent) {
  const ScenarioSpec spec = canonical_scenario();
  const auto grid = default_gap_grid();
  const EmpiricalCdf one = empirical_cdf(lse_factory(spec, 200), grid, 3000, 11, 1);
  const EmpiricalCdf four = empirical_cdf(lse_factory(spec, 200), grid, 3000, 11, 4);
  EXPECT_EQ(one.probs, four.probs);
  const auto a = lse_draws(spec, 200, 500, 12, 1);
  const auto b = lse_draws(spec, 200, 500, 12, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].stat, b[i].stat);
    EXPECT_EQ(a[i].h_star, b[i].h_star);
  }
}

TEST(Gap, Examples) {
  EmpiricalCdf a;
  a.t_grid = default_gap_grid();
  a.probs.assign(a.t_grid.size(), 0.6);
  EXPECT_EQ(berry_esseen_gap(a, a), 0.0);
  EmpiricalCdf b = a;
  b.probs[4] += 0.07;
  EXPECT_NEAR(berry_esseen_gap(a, b), 0.07, 1e-15);
  EmpiricalCdf c = a;
  c.t_grid.pop_back();
  c.probs.pop_back();
  EXPECT_THROW(berry_esseen_gap(a, c), InputError);
  c = a;
  c.t_grid[2] += 1e-6;
  EXPECT_THROW(berry_esseen_gap(a, c), InputError);
  EXPECT_NEAR(berry_esseen_gap(a, [](double) { return 0.5; }), 0.1, 1e-15);
}

TEST(Gap, DefaultGrid) {
  const auto g = default_gap_grid();
  ASSERT_EQ(g.size(), 10u);
  for (int l = 1; l <= 10; ++l) EXPECT_DOUBLE_EQ(g[l - 1], l / 5.0);
}

TEST(RateFit, ExactPowerLaws) {
  std::vector<std::pair<double, double>> p;
  for (double n : {10.0, 100.0, 1000.0}) p.push_back({n, std::pow(n, -1.0 / 3.0)});
  const RateFit f = fit_rate(p);
  EXPECT_NEAR(f.slope, -1.0 / 3.0, 1e-10);
  EXPECT_NEAR(f.intercept, 0.0, 1e-10);
  for (double r : f.residuals) EXPECT_NEAR(r, 0.0, 1e-12);
  p.clear();
  for (double n : {128.0, 256.0, 512.0, 1024.0}) p.push_back({n, 3.0 / std::sqrt(n)});
  EXPECT_NEAR(fit_rate(p).slope, -0.5, 1e-12);
  EXPECT_NEAR(fit_rate(p).intercept, std::log(3.0), 1e-12);
  p[1].second = 0.0;
  EXPECT_THROW(fit_rate(p), InputError);
  p.resize(2);
  EXPECT_THROW(fit_rate(p), InputError);
}

TEST(LseStat, NoiselessFitIsExact) {
  ScenarioSpec spec = canonical_scenario();
  spec.sigma = 0.0;
  Stream rng(1, 0);
  // x* = 1/2 is the design point i/n at n = 100.
  EXPECT_EQ(standardized_lse_stat(spec, 100, rng), 0.0);
  spec.truth = "cubic";
  EXPECT_EQ(standardized_lse_stat(spec, 100, rng), 0.0);
}

TEST(LseStat, CanonicalScaling) {
  const ScenarioSpec spec = canonical_scenario();
  LseStatSampler s(spec, 27);
  EXPECT_NEAR(s.omega_inv(), 3.0, 1e-12);
  EXPECT_THROW(LseStatSampler(spec, 9), DomainError);
  ScenarioSpec flat = flat_scenario();
  LseStatSampler f(flat, 400);
  EXPECT_NEAR(f.omega_inv(), 20.0, 1e-12);
}

TEST(LseStat, CenteredAtLargeN) {
  const auto draws = lse_draws(canonical_scenario(), 10000, 10000, 13, default_workers());
  double m = 0.0;
  for (const auto& d : draws) m += d.stat;
  EXPECT_LE(std::abs(m / draws.size()), 0.1);
}

TEST(OracleStat, NoiselessWindowMeanIsBias) {
  ScenarioSpec spec = canonical_scenario();
  spec.sigma = 0.0;
  OracleStatSampler s(spec, 1000, 1.0, 1.0);
  Stream rng(1, 0);
  const double v = s(rng);
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 0.1);
  EXPECT_THROW(OracleStatSampler(spec, 1000, 0.0, 1.0), DomainError);
}

TEST(Localization, HugeThresholdsNeverExceeded) {
  const ScenarioSpec spec = canonical_scenario();
  const auto draws = lse_draws(spec, 1000, 10000, 14, default_workers());
  const DiagnosticsReport r = localization_report(spec, 1000, draws, 100.0, 100.0);
  EXPECT_EQ(r.freq_stat_exceeds, 0.0);
  EXPECT_EQ(r.freq_touch_exceeds, 0.0);
  EXPECT_EQ(r.n_reps, 10000u);
  double prev_s = 1.0, prev_t = 1.0;
  for (double K : {0.1, 0.3, 1.0, 2.0, 3.0}) {
    const DiagnosticsReport q = localization_report(spec, 1000, draws, K, K);
    EXPECT_LE(q.freq_stat_exceeds, prev_s);
    EXPECT_LE(q.freq_touch_exceeds, prev_t);
    EXPECT_GE(q.freq_stat_exceeds, 0.0);
    EXPECT_LE(q.freq_touch_exceeds, 1.0);
    prev_s = q.freq_stat_exceeds;
    prev_t = q.freq_touch_exceeds;
  }
  EXPECT_GT(localization_report(spec, 1000, draws, 0.1, 0.1).freq_stat_exceeds, 0.0);
  EXPECT_THROW(localization_report(spec, 1000, {}, 1.0, 1.0), InputError);
}

TEST(Localization, TauBase) {
  const ScenarioSpec c = canonical_scenario();
  EXPECT_NEAR(localization_tau_base(c, 10000), std::sqrt(std::log(1e4)), 1e-12);
  EXPECT_EQ(localization_tau_base(flat_scenario(), 10000), 1.0);
  ScenarioSpec b = canonical_scenario();
  b.truth = "quadratic_quartic";
  b.point = PointSpec::boundary_at(0.1);
  EXPECT_NEAR(localization_tau_base(b, 10000), std::sqrt(std::log(1e4)), 1e-12);
  b.point = PointSpec::boundary_at(0.3);
  EXPECT_NEAR(localization_tau_base(b, 10000), std::pow(std::log(1e4), 0.25), 1e-12);
}
