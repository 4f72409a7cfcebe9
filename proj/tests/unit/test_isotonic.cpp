#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chernoff/errors.hpp"
#include "chernoff/isotonic.hpp"
#include "chernoff/rng.hpp"

using namespace chernoff;

namespace {

RegressionSample equispaced(std::vector<double> ys) {
  RegressionSample s;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    s.xs.push_back(static_cast<double>(i + 1) / static_cast<double>(ys.size()));
  }
  s.ys = std::move(ys);
  return s;
}

RegressionSample random_instance(Stream& rng, bool integer_noise) {
  const std::size_t n = 1 + rng.next_u32() % 200;
  std::vector<double> ys(n);
  const double slope = 3.0 * rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    ys[i] = integer_noise ? std::floor(4.0 * x * slope) + static_cast<double>(rng.next_u32() % 3)
                          : slope * x * x + rng.normal();
  }
  return equispaced(std::move(ys));
}

}  // namespace

TEST(Pava, Examples) {
  EXPECT_EQ(pava(std::vector<double>{1, 2, 3}).fitted, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(pava(std::vector<double>{2, 1}).fitted, (std::vector<double>{1.5, 1.5}));
  EXPECT_EQ(pava(std::vector<double>{3, 1, 2}).fitted, (std::vector<double>{2, 2, 2}));
  EXPECT_THROW(pava(std::vector<double>{}), InputError);
}

TEST(Pava, ThreePointProjectionIsOptimal) {
  // Grid search over nondecreasing triples: nothing beats (2, 2, 2) for (3, 1, 2).
  const double ys[3] = {3, 1, 2};
  auto sse = [&](double a, double b, double c) {
    return (a - ys[0]) * (a - ys[0]) + (b - ys[1]) * (b - ys[1]) + (c - ys[2]) * (c - ys[2]);
  };
  const double best = sse(2, 2, 2);
  for (int i = 0; i <= 80; ++i) {
    for (int j = i; j <= 80; ++j) {
      for (int k = j; k <= 80; ++k) {
        ASSERT_GE(sse(i / 20.0, j / 20.0, k / 20.0), best - 1e-12);
      }
    }
  }
}

TEST(Pava, StructuralProperties) {
  Stream rng(1, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const RegressionSample s = random_instance(rng, rep % 2 == 0);
    const IsotonicFit fit = pava(s);
    double total = 0.0, fitted_total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      total += s.ys[i];
      fitted_total += fit.fitted[i];
      if (i > 0) {
        ASSERT_LE(fit.fitted[i - 1], fit.fitted[i]);
      }
    }
    EXPECT_NEAR(total, fitted_total, 1e-10 * static_cast<double>(s.size()));
    for (std::size_t b = 0; b < fit.blocks.size(); ++b) {
      const Block& blk = fit.blocks[b];
      if (b > 0) {
        ASSERT_LT(fit.blocks[b - 1].level, blk.level);
      }
      double resid = 0.0;
      for (std::size_t i = blk.begin; i < blk.end; ++i) resid += s.ys[i] - blk.level;
      ASSERT_NEAR(resid, 0.0, 1e-10 * static_cast<double>(s.size()));
    }
    EXPECT_EQ(pava(fit.fitted).fitted, fit.fitted);
  }
}

TEST(Pava, OrderPreserving) {
  Stream rng(2, 0);
  for (int rep = 0; rep < 200; ++rep) {
    RegressionSample s = random_instance(rng, false);
    std::vector<double> bigger = s.ys;
    for (double& y : bigger) y += std::fabs(rng.normal());
    const auto a = pava(s.ys).fitted;
    const auto b = pava(bigger).fitted;
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_LE(a[i], b[i] + 1e-12);
  }
}

TEST(Pava, IntegerWeightsEqualReplication) {
  Stream rng(3, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng.next_u32() % 30;
    std::vector<double> ys, ws, expanded;
    for (std::size_t i = 0; i < n; ++i) {
      ys.push_back(static_cast<double>(rng.next_u32() % 9));
      ws.push_back(1.0 + rng.next_u32() % 3);
      for (int k = 0; k < static_cast<int>(ws.back()); ++k) expanded.push_back(ys.back());
    }
    const auto wf = pava(ys, ws).fitted;
    const auto ef = pava(expanded).fitted;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_NEAR(wf[i], ef[pos], 1e-12);
      pos += static_cast<std::size_t>(ws[i]);
    }
  }
}

TEST(MaxMin, Examples) {
  const auto one = equispaced({4.0});
  const auto m = maxmin_at(1.0, one);
  EXPECT_EQ(m.value, 4.0);
  EXPECT_EQ(m.first, 0u);
  EXPECT_EQ(m.last, 0u);
  const auto tp = touch_points(one, 1.0, 0.5);
  EXPECT_EQ(tp.h1_star, 0.0);
  EXPECT_EQ(tp.h2_star, 0.0);

  const auto mono = equispaced({1, 2, 3, 4});
  EXPECT_EQ(maxmin_at(0.5, mono).value, 2.0);
  EXPECT_THROW(maxmin_at(0.1, mono), DomainError);
  EXPECT_THROW(maxmin_at(1.5, mono), DomainError);
}

TEST(MaxMin, AgreesWithPavaEverywhere) {
  Stream rng(4, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const RegressionSample s = random_instance(rng, rep % 2 == 1);
    const IsotonicFit fit = pava(s);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const MaxMinResult m = maxmin_at(s.xs[k], s);
      ASSERT_NEAR(m.value, fit.fitted[k], 1e-10);
    }
  }
}

TEST(MaxMin, WidestWindowIsThePavaBlock) {
  Stream rng(5, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const RegressionSample s = random_instance(rng, true);
    const IsotonicFit fit = pava(s);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const MaxMinResult m = maxmin_at(s.xs[k], s);
      const Block& b = fit.block_of(k);
      ASSERT_EQ(m.first, b.begin) << "rep " << rep << " k " << k;
      ASSERT_EQ(m.last, b.end - 1) << "rep " << rep << " k " << k;
      const TouchPoints a = touch_points(s, s.xs[k], 0.1);
      const TouchPoints c = touch_points(fit, s.xs, s.xs[k], 0.1);
      ASSERT_EQ(a.h1_star, c.h1_star);
      ASSERT_EQ(a.h2_star, c.h2_star);
    }
  }
}

TEST(MaxMin, PointBetweenDesignPointsUsesRightNeighbour) {
  const auto s = equispaced({0, 5, 1, 7});
  const IsotonicFit fit = pava(s);
  const double x = 0.6;  // between 0.5 and 0.75
  EXPECT_EQ(evaluation_index(s.xs, x), 2u);
  const MaxMinResult m = maxmin_at(x, s);
  EXPECT_NEAR(m.value, fit.fitted[2], 1e-12);
  EXPECT_LE(m.u_star, x);
  EXPECT_GE(m.v_star, x);
}

TEST(TouchPoints, DivideByBandwidth) {
  // r_n = 1000^(-1/3) = 0.1: a window [0.4, 0.7] around 0.5 gives (1, 2).
  std::vector<double> ys(1000);
  RegressionSample s;
  for (int i = 0; i < 1000; ++i) {
    s.xs.push_back((i + 1) / 1000.0);
    s.ys.push_back(s.xs.back() >= 0.4 - 1e-12 && s.xs.back() <= 0.7 + 1e-12 ? 0.0 : (s.xs.back() < 0.4 ? -1.0 : 1.0));
  }
  const IsotonicFit fit = pava(s);
  const TouchPoints tp = touch_points(fit, s.xs, 0.5, std::cbrt(1.0 / 1000.0));
  EXPECT_NEAR(tp.h1_star, 1.0, 1e-9);
  EXPECT_NEAR(tp.h2_star, 2.0, 1e-9);
}
