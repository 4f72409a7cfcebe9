#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "chernoff/errors.hpp"
#include "chernoff/paths.hpp"
#include "chernoff/stats.hpp"

using namespace chernoff;

namespace {
std::shared_ptr<const Grid> make_grid(std::vector<double> t) {
  return std::make_shared<const Grid>(std::move(t));
}
}  // namespace

TEST(Grid, Validation) {
  EXPECT_THROW(Grid({}), InputError);
  EXPECT_THROW(Grid({0.0, 0.0}), InputError);
  EXPECT_THROW(Grid({1.0, 0.0}), InputError);
  EXPECT_THROW(Grid({0.5, 1.0}), InputError);
  EXPECT_THROW(Grid({-1.0, 0.0, NAN}), InputError);
  EXPECT_NO_THROW(Grid({0.0}));
  const Grid g = Grid::uniform(-1.0, 2.0, 0.5);
  ASSERT_EQ(g.size(), 7u);
  EXPECT_EQ(g.zero_index(), 2u);
  EXPECT_DOUBLE_EQ(g.front(), -1.0);
  EXPECT_DOUBLE_EQ(g.back(), 2.0);
  EXPECT_EQ(Grid::uniform(0.0, 1.0, 1e-4).size(), 10001u);
}

TEST(SampleBm, AnchoredAtOrigin) {
  Stream rng(3, 0);
  const auto p = sample_bm(make_grid({0.0}), rng);
  ASSERT_EQ(p.values.size(), 1u);
  EXPECT_EQ(p.values[0], 0.0);
}

TEST(SampleBm, SingleIncrementIsFirstNormal) {
  Stream rng(17, 5), ref(17, 5);
  const auto p = sample_bm(make_grid({0.0, 1.0}), rng);
  EXPECT_EQ(p.values[0], 0.0);
  EXPECT_EQ(p.values[1], ref.normal());
}

TEST(SampleBm, ExtendingHorizonKeepsEarlierValues) {
  const Grid small = Grid::uniform(-1.0, 1.0, 0.01);
  const Grid large = Grid::uniform(-3.0, 2.0, 0.01);
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::vector<double> a(small.size()), b(large.size());
    Stream r1(99, s), r2(99, s);
    sample_bm_values(small, r1, a);
    sample_bm_values(large, r2, b);
    const std::size_t off = large.zero_index() - small.zero_index();
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i + off]);
  }
}

TEST(SampleBm, VarianceAtTwo) {
  const Grid g = Grid::uniform(-1.0, 2.0, 0.25);
  std::vector<double> v(g.size()), at2;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    Stream rng(1234, s);
    sample_bm_values(g, rng, v);
    at2.push_back(v.back());
  }
  EXPECT_NEAR(variance(at2), 2.0, 0.05);
}

TEST(SampleBm, IncrementsAndHalvesIndependent) {
  const Grid g = Grid::uniform(-1.0, 2.0, 0.125);
  const std::size_t z = g.zero_index();
  const std::size_t i1 = z + 8, i2 = z + 16;
  std::vector<double> v(g.size()), b1, inc, bm1;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    Stream rng(555, s);
    sample_bm_values(g, rng, v);
    b1.push_back(v[i1]);
    inc.push_back(v[i2] - v[i1]);
    bm1.push_back(v[0]);
  }
  EXPECT_NEAR(correlation(b1, inc), 0.0, 0.02);
  EXPECT_NEAR(correlation(bm1, b1), 0.0, 0.02);
  EXPECT_NEAR(variance(bm1), 1.0, 0.03);
}

TEST(SampleBm, BrownianScaling) {
  const double c = 4.0;
  const auto g = make_grid({0.0, 0.5, 1.0, 2.0, 4.0});
  std::vector<double> a, b;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    Stream r1(7, s), r2(8, s);
    a.push_back(sample_bm(g, r1).values[4] / std::sqrt(c));
    b.push_back(sample_bm(g, r2).values[2]);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_LE(ks_two_sample(a, b), 0.02);
}

TEST(AddDrift, Pointwise) {
  auto g = make_grid({0.0, 1.0});
  TwoSidedPath p{g, {0.0, 0.5}};
  EXPECT_EQ(add_drift(p, DriftSpec::zero()).values, p.values);
  const auto q = add_drift(p, DriftSpec::interior(1, 1.0));
  EXPECT_EQ(q.values, (std::vector<double>{0.0, 1.5}));
  // Interior alpha = 1 with f'(x0) = 2: Q(h) = 2/2! h^2 = h^2.
  auto g2 = make_grid({-2.0, -0.5, 0.0, 0.3, 3.0});
  TwoSidedPath zero{g2, std::vector<double>(5, 0.0)};
  const auto r = add_drift(zero, DriftSpec::interior(1, 2.0 / 2.0));
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(r.values[i], g2->times()[i] * g2->times()[i]);
  EXPECT_EQ(r.grid, g2);
}
