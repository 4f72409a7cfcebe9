#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chernoff/rng.hpp"
#include "chernoff/simd/kernels.hpp"
#include "chernoff/stats.hpp"

using namespace chernoff;

TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}),
            (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}),
            (PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Kernels, Avx2PhiloxMatchesScalarBitwise) {
  const simd::KernelTable* wide = simd::avx2_kernels();
  if (wide == nullptr) GTEST_SKIP() << "AVX2 kernels unavailable";
  const auto& ref = simd::scalar_kernels();
  for (std::size_t blocks : {1u, 7u, 8u, 9u, 16u, 37u, 64u}) {
    for (std::uint64_t first : {0ull, 5ull, 0xfffffffcull, 0x123456789abcull}) {
      std::vector<std::uint32_t> a(4 * blocks), b(4 * blocks);
      ref.philox_fill(0xdeadbeefu, 0x01234567u, 0x9e3779b97f4a7c15ull, first, blocks, a.data());
      wide->philox_fill(0xdeadbeefu, 0x01234567u, 0x9e3779b97f4a7c15ull, first, blocks, b.data());
      EXPECT_EQ(a, b) << "blocks=" << blocks << " first=" << first;
    }
  }
}

TEST(Kernels, Avx2PolynomialKernelsMatchScalarBitwise) {
  const simd::KernelTable* wide = simd::avx2_kernels();
  if (wide == nullptr) GTEST_SKIP() << "AVX2 kernels unavailable";
  const auto& ref = simd::scalar_kernels();
  Stream rng(11, 0);
  for (std::size_t n : {1u, 3u, 4u, 5u, 31u, 1000u}) {
    std::vector<double> t(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n);
      v[i] = rng.normal();
    }
    for (const std::vector<double>& c :
         {std::vector<double>{}, std::vector<double>{0.0, -0.7}, std::vector<double>{0.0, 0.0, -1.0},
          std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}}) {
      std::vector<double> a = v, b = v;
      ref.add_poly(t.data(), a.data(), n, c.data(), c.size());
      wide->add_poly(t.data(), b.data(), n, c.data(), c.size());
      EXPECT_EQ(a, b);
      const auto ma = ref.max_poly(t.data(), v.data(), n, c.data(), c.size());
      const auto mb = wide->max_poly(t.data(), v.data(), n, c.data(), c.size());
      EXPECT_EQ(ma.index, mb.index);
      EXPECT_EQ(ma.value, mb.value);
    }
  }
}

TEST(Kernels, MaxPolyTiesResolveToFirstIndex) {
  std::vector<double> t(23, 0.0), v(23, 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  v[5] = v[13] = v[21] = 2.0;
  for (const simd::KernelTable* k : {&simd::scalar_kernels(), simd::avx2_kernels()}) {
    if (k == nullptr) continue;
    EXPECT_EQ(k->max_poly(t.data(), v.data(), v.size(), nullptr, 0).index, 5u) << k->name;
  }
}

TEST(Stream, DeterministicAndDistinctAcrossIds) {
  Stream a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    (void)c;
  }
  Stream d(42, 3), e(42, 4);
  int same = 0;
  for (int i = 0; i < 1000; ++i) same += d.next_u32() == e.next_u32();
  EXPECT_LT(same, 5);
}

TEST(Stream, WordsFollowPhiloxBlocks) {
  Stream s(0x0123456789abcdefull, 77);
  for (std::uint32_t block = 0; block < 100; ++block) {
    const auto expect = philox4x32_10({block, 0, 77, 0}, {0x89abcdefu, 0x01234567u});
    for (int w = 0; w < 4; ++w) ASSERT_EQ(s.next_u32(), expect[w]);
  }
}

TEST(Stream, UniformIsOpenInterval) {
  Stream s(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Stream, NormalMatchesStandardGaussian) {
  Stream s(2024, 0);
  std::vector<double> x(200000);
  s.fill_normal(x);
  const double m = mean(x);
  const double v = variance(x);
  double m4 = 0.0;
  for (double z : x) m4 += (z - m) * (z - m) * (z - m) * (z - m);
  m4 /= static_cast<double>(x.size());
  EXPECT_NEAR(m, 0.0, 3.0 / std::sqrt(2e5));
  EXPECT_NEAR(v, 1.0, 0.01);
  EXPECT_NEAR(m4 / (v * v), 3.0, 0.05);
  std::sort(x.begin(), x.end());
  EXPECT_LT(ks_one_sample(x, normal_cdf), 0.005);
  // Tail layer is exercised: |z| > 3.65 has probability ~2.6e-4.
  EXPECT_GT(std::count_if(x.begin(), x.end(), [](double z) { return std::fabs(z) > 3.6541528853610088; }), 20);
}

TEST(Stream, ForksAreIndependentAndDistinct) {
  Stream parent(9, 0);
  Stream f1 = parent.fork();
  Stream f2 = parent.fork();
  EXPECT_NE(f1.id(), f2.id());
  EXPECT_NE(f1.id(), parent.id());
  std::vector<double> a(50000), b(50000);
  f1.fill_normal(a);
  f2.fill_normal(b);
  EXPECT_NEAR(correlation(a, b), 0.0, 0.02);
}

TEST(Stream, DeriveSeedSeparatesTags) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 7), derive_seed(5, 7));
}
