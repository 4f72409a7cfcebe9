#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "chernoff/errors.hpp"
#include "chernoff/stats.hpp"

using namespace chernoff;

TEST(Normal, CdfValues) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.0), 0.84134474606854294859, 1e-15);
  EXPECT_NEAR(normal_sf(1.0) * 2.0, 0.31731050786291410283, 1e-15);
  EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-16);
}

TEST(Normal, LogSurvivalAcrossRegimes) {
  // Reference values from 40-digit arithmetic.
  const double xs[] = {-3.0, 0.5, 10.0, 24.9, 25.1, 30.0, 40.0, 100.0};
  const double ref[] = {-0.0013508099647481937988, -1.1759117615936186089,
                        -53.231285150512470578,    -314.14041276161316294,
                        -319.14838740588863448,    -454.32124395634319711,
                        -804.60844201375378817,    -5005.5242086942050886};
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(log_normal_sf(xs[i]), ref[i], 1e-12 * std::max(1.0, std::fabs(ref[i]))) << xs[i];
  }
}

TEST(Ks, OneSampleExactOnSmallInputs) {
  const std::vector<double> x = {0.5};
  auto uniform = [](double t) { return std::clamp(t, 0.0, 1.0); };
  EXPECT_DOUBLE_EQ(ks_one_sample(x, uniform), 0.5);
  const std::vector<double> y = {0.25, 0.75};
  EXPECT_DOUBLE_EQ(ks_one_sample(y, uniform), 0.25);
}

TEST(Ks, TwoSampleHandlesTies) {
  const std::vector<double> a = {0.0, 1.0, 1.0, 2.0};
  EXPECT_DOUBLE_EQ(ks_two_sample(a, a), 0.0);
  const std::vector<double> b = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(ks_two_sample(a, b), 1.0);
  const std::vector<double> c = {1.0};
  EXPECT_DOUBLE_EQ(ks_two_sample(a, c), 0.25);
  EXPECT_THROW(ks_two_sample(a, std::vector<double>{}), InputError);
}

TEST(Quantile, Interpolates) {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(x, 0.5), 2.5);
}
