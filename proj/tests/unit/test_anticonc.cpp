#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chernoff/anticonc.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/parallel.hpp"
#include "chernoff/stats.hpp"

using namespace chernoff;

namespace {

std::vector<double> sup_draws(const Polynomial& drift, double step, std::size_t n, std::uint64_t seed,
                              SupMethod method = SupMethod::Grid) {
  auto sampler = std::make_shared<const SupSampler>(drift, step, method);
  SamplerFactory f = [sampler]() -> Sampler {
    auto buf = std::make_shared<std::vector<double>>();
    return [sampler, buf](Stream& rng) { return sampler->sample(rng, *buf); };
  };
  auto out = parallel_draw(f, n, seed, default_workers());
  std::sort(out.begin(), out.end());
  return out;
}

double simpson(double (*f)(double, double), double mu, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a, mu) + f(b, mu);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h, mu);
  return s * h / 3.0;
}

}  // namespace

TEST(SupLinearDrift, CdfExamples) {
  for (double mu : {-3.0, 0.0, 2.0}) {
    EXPECT_EQ(sup_bm_linear_drift_cdf(0.0, mu), 1.0);
    EXPECT_EQ(sup_bm_linear_drift_cdf(-1.0, mu), 1.0);
  }
  EXPECT_NEAR(sup_bm_linear_drift_cdf(1.0, 0.0), 0.3173105078629141, 1e-14);
  // Large mu * y stays finite.
  const double p = sup_bm_linear_drift_cdf(30.0, 20.0);
  EXPECT_TRUE(std::isfinite(p));
  const double expect = normal_sf(10.0) + std::exp(1200.0 + log_normal_sf(50.0));
  EXPECT_NEAR(p, expect, 1e-12 * expect);
  EXPECT_GE(sup_bm_linear_drift_cdf(50.0, -20.0), 0.0);
}

TEST(SupLinearDrift, PdfExamples) {
  EXPECT_EQ(sup_bm_linear_drift_pdf(-0.5, 1.0), 0.0);
  for (double y : {0.0, 0.3, 1.7, 4.0}) {
    EXPECT_NEAR(sup_bm_linear_drift_pdf(y, 0.0), 2.0 * normal_pdf(y), 1e-15);
  }
  for (double mu : {-5.0, -2.0, 0.0, 1.0, 5.0}) {
    const double hi = 20.0 + std::abs(mu);
    EXPECT_NEAR(simpson(sup_bm_linear_drift_pdf, mu, 0.0, hi, 200000), 1.0, 1e-6) << mu;
  }
}

TEST(SupLinearDrift, PdfIsMinusCdfDerivative) {
  const double h = 1e-4;
  double worst = 0.0;
  for (double mu = -5.0; mu <= 5.0; mu += 0.5) {
    for (double y = 1e-3; y <= 10.0; y += 0.01) {
      auto F = [mu](double x) { return sup_bm_linear_drift_cdf(x, mu); };
      const double fd = -(F(y - 2 * h) - 8 * F(y - h) + 8 * F(y + h) - F(y + 2 * h)) / (12 * h);
      worst = std::max(worst, std::abs(fd - sup_bm_linear_drift_pdf(y, mu)));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(SupLinearDrift, PdfSupNormGrowsAtMostLinearly) {
  for (double mu : {0.0, 1.0, 2.0, 5.0, 10.0}) {
    double top = 0.0;
    for (double y = 0.0; y <= 20.0 + mu; y += 1e-3) top = std::max(top, sup_bm_linear_drift_pdf(y, mu));
    EXPECT_LE(top / std::max(mu, 1.0), 1.0) << mu;
  }
}

TEST(SupSampler, HalfNormalWithoutDrift) {
  const auto x = sup_draws(Polynomial{{0.0}}, 1e-4, 100000, 21);
  EXPECT_GE(x.front(), 0.0);
  const double ks = ks_one_sample(x, [](double y) { return y <= 0 ? 0.0 : 2.0 * normal_cdf(y) - 1.0; });
  EXPECT_LE(ks, 0.01);
}

TEST(SupSampler, BridgeMaximaMatchClosedForm) {
  for (double mu : {-2.0, 2.0}) {
    const auto x = sup_draws(Polynomial{{0.0, mu}}, 1e-3, 50000, 22, SupMethod::Bridge);
    EXPECT_GT(x.front(), 0.0);
    const double ks = ks_one_sample(x, [mu](double y) { return 1.0 - sup_bm_linear_drift_cdf(y, mu); });
    EXPECT_LE(ks, 0.01) << mu;
  }
}

TEST(SupSampler, GridMaximumUndershootsNearZero) {
  // The grid maximum is 0 whenever the walk never rises, an event of
  // probability of order sqrt(step) that the continuous law does not have.
  const auto grid = sup_draws(Polynomial{{0.0, -2.0}}, 1e-2, 20000, 24);
  const auto bridge = sup_draws(Polynomial{{0.0, -2.0}}, 1e-2, 20000, 24, SupMethod::Bridge);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_GT(bridge.front(), 0.0);
  for (std::size_t i = 0; i < grid.size(); i += 997) EXPECT_LE(grid[i], bridge[i]);
}

TEST(Levy, Examples) {
  const std::vector<double> same(7, 2.5);
  EXPECT_EQ(levy_concentration(same, 1e-9), 1.0);
  const std::vector<double> two{0.0, 1.0};
  EXPECT_EQ(levy_concentration(two, 0.4), 0.5);
  const std::vector<double> three{0.0, 0.1, 1.0};
  EXPECT_NEAR(levy_concentration(three, 0.1), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(levy_concentration(std::vector<double>{}, 0.1), InputError);
  EXPECT_THROW(levy_concentration(two, 0.0), DomainError);
}

TEST(Levy, MonotoneAndSaturates) {
  Stream rng(3, 0);
  std::vector<double> x(2000);
  for (double& v : x) v = rng.normal();
  std::sort(x.begin(), x.end());
  double prev = 0.0;
  for (double e = 1e-4; e < 5.0; e *= 1.3) {
    const double l = levy_concentration(x, e);
    EXPECT_GE(l, prev);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
    prev = l;
  }
  EXPECT_EQ(levy_concentration(x, (x.back() - x.front()) / 2.0), 1.0);
}

TEST(Levy, RescalingIdentity) {
  const auto t = sup_draws(Polynomial{{0.0, 1.0}}, 1e-2, 5000, 23);
  for (double tau : {4.0, 16.0}) {
    std::vector<double> scaled(t);
    for (double& v : scaled) v *= std::sqrt(tau);
    for (double e : {1e-3, 1e-2, 0.1}) {
      EXPECT_EQ(levy_concentration(scaled, e), levy_concentration(t, e / std::sqrt(tau)));
    }
  }
}

TEST(Envelope, ExamplesAndMonotonicity) {
  EXPECT_DOUBLE_EQ(anticonc_envelope(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(anticonc_envelope(1.0, 0.2), 1.0);
  // b = 1, eps = 1e-2: log+(100) = 4.605..., envelope = eps * log(100)^2.
  EXPECT_NEAR(anticonc_envelope(1e-2, 1.0), 1e-2 * std::pow(std::log(100.0), 2), 1e-14);
  EXPECT_THROW(anticonc_envelope(0.0, 1.0), DomainError);
  for (double e : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    double prev = 0.0;
    for (double b = 0.5; b < 50.0; b *= 1.5) {
      const double env = anticonc_envelope(e, b);
      EXPECT_GE(env, prev);
      prev = env;
    }
  }
  const std::vector<double> eps{1e-3, 1e-2};
  const std::vector<double> x{0.0, 0.5, 1.0};
  const auto p = concentration_profile(x, eps, 5.0);
  EXPECT_EQ(p.levels.size(), 2u);
  EXPECT_EQ(p.n_samples, 3u);
  EXPECT_DOUBLE_EQ(p.envelopes[1], anticonc_envelope(1e-2, 5.0));
}
