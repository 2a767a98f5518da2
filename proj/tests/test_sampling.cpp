#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "scsg/sampling.hpp"

using namespace scsg;

TEST(RngStream, StandardEngineSequence) {
  RngStream r(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = r.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(RngStream, UniformRangesAndBounds) {
  RngStream r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double o = r.uniform_open01();
    ASSERT_GT(o, 0.0);
    ASSERT_LT(o, 1.0);
    ASSERT_LT(r.uniform_below(7), 7u);
  }
  EXPECT_THROW(r.uniform_below(0), std::invalid_argument);
}

TEST(RngStream, DerivedStreamsAreDistinctAndStable) {
  EXPECT_EQ(derive_seed(42, 1), derive_seed(42, 1));
  EXPECT_NE(derive_seed(42, 1), derive_seed(42, 2));
  EXPECT_NE(derive_seed(42, 1), derive_seed(43, 1));
  EXPECT_NE(fnv1a("scsg:0"), fnv1a("scsg:1"));
}

TEST(SampleGeometric, GammaZeroAlwaysZero) {
  RngStream r(2);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_geometric(0.0, r), 0u);
}

TEST(SampleGeometric, MeanMatchesClosedForm) {
  RngStream r(3);
  const double gamma = 50.0 / 51.0;
  double s = 0.0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) s += static_cast<double>(sample_geometric(gamma, r));
  EXPECT_NEAR(s / draws, 50.0, 0.5);
}

TEST(SampleGeometric, PmfAtOneForHalf) {
  RngStream r(4);
  int ones = 0, zeros = 0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) {
    const auto k = sample_geometric(0.5, r);
    ones += k == 1;
    zeros += k == 0;
  }
  EXPECT_NEAR(static_cast<double>(ones) / draws, 0.25, 0.005);
  EXPECT_NEAR(static_cast<double>(zeros) / draws, 0.5, 0.005);
}

TEST(SampleGeometric, RejectsGammaOutsideUnitInterval) {
  RngStream r(5);
  EXPECT_THROW(sample_geometric(-0.1, r), std::invalid_argument);
  EXPECT_THROW(sample_geometric(1.0, r), std::invalid_argument);
  EXPECT_THROW(sample_geometric(std::nan(""), r), std::invalid_argument);
}

TEST(SampleSubset, FullSizeIsEveryIndex) {
  RngStream r(6);
  const auto s = sample_subset(9, 9, r);
  ASSERT_EQ(s.size(), 9u);
  for (Index i = 0; i < 9; ++i) EXPECT_EQ(s[i], i);
}

TEST(SampleSubset, RejectsBadSizes) {
  RngStream r(7);
  EXPECT_THROW(sample_subset(5, 0, r), std::invalid_argument);
  EXPECT_THROW(sample_subset(5, 6, r), std::invalid_argument);
}

TEST(SampleSubset, InclusionFrequencyDenseRegime) {
  RngStream r(8);
  std::vector<int> hits(10, 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const auto s = sample_subset(10, 3, r);
    ASSERT_EQ(std::set<Index>(s.begin(), s.end()).size(), 3u);
    for (Index i : s) ++hits[i];
  }
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, 0.3, 0.01);
}

TEST(SampleSubset, InclusionFrequencySparseRegime) {
  RngStream r(9);
  std::vector<int> hits(50, 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const auto s = sample_subset(50, 4, r);
    ASSERT_EQ(std::set<Index>(s.begin(), s.end()).size(), 4u);
    for (Index i : s) {
      ASSERT_LT(i, 50u);
      ++hits[i];
    }
  }
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, 0.08, 0.005);
}

TEST(SampleSubset, AllPairsEquallyLikely) {
  RngStream r(10);
  std::map<std::pair<Index, Index>, int> count;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    auto s = sample_subset(4, 2, r);
    std::sort(s.begin(), s.end());
    ++count[{s[0], s[1]}];
  }
  ASSERT_EQ(count.size(), 6u);
  for (const auto& [k, c] : count) EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 6.0, 0.01);
}

TEST(SampleSubset, EqualSeedsReproduce) {
  RngStream a(77), b(77);
  for (int t = 0; t < 100; ++t) {
    EXPECT_EQ(sample_subset(1000, 17, a), sample_subset(1000, 17, b));
    EXPECT_EQ(sample_subset(20, 15, a), sample_subset(20, 15, b));
    EXPECT_EQ(sample_geometric(0.97, a), sample_geometric(0.97, b));
  }
}

TEST(SampleWithReplacement, BoundsAndErrors) {
  RngStream r(11);
  const auto s = sample_with_replacement(3, 100, r);
  EXPECT_EQ(s.size(), 100u);
  for (Index i : s) EXPECT_LT(i, 3u);
  EXPECT_THROW(sample_with_replacement(0, 1, r), std::invalid_argument);
}

// Variance of a without-replacement subset mean is at most
// (1/m) (1/M) sum ||z_j||^2, and zero when the subset is the population.
TEST(SampleSubset, SubsetMeanVarianceBound) {
  RngStream r(12);
  const std::size_t M = 20;
  std::vector<Vector> z(M);
  RngStream pop(99);
  for (auto& v : z) {
    v.resize(3);
    for (auto& x : v) x = pop.normal() + 0.5;
  }
  Vector zbar = Vector::Zero(3);
  double second = 0.0;
  for (const auto& v : z) {
    zbar += v;
    second += v.squaredNorm();
  }
  zbar /= static_cast<double>(M);
  second /= static_cast<double>(M);

  for (std::size_t m : {1u, 3u, 8u, 15u, 20u}) {
    const int draws = 20000;
    double s1 = 0.0, s2 = 0.0;
    for (int t = 0; t < draws; ++t) {
      Vector mean = Vector::Zero(3);
      for (Index i : sample_subset(M, m, r)) mean += z[i];
      mean /= static_cast<double>(m);
      const double d = (mean - zbar).squaredNorm();
      s1 += d;
      s2 += d * d;
    }
    const double avg = s1 / draws;
    const double se = std::sqrt(std::max(0.0, s2 / draws - avg * avg) / draws);
    EXPECT_LE(avg, second / static_cast<double>(m) + 3.0 * se) << "m = " << m;
    if (m == M) EXPECT_EQ(avg, 0.0);
  }
}

TEST(GeometrizationGap, ConstantSequenceIsExactlyZero) {
  RngStream r(13);
  const auto g = geometrization_identity_gap([](std::uint64_t) { return 3.5; }, 0.7, 10000, r);
  EXPECT_EQ(g.lhs, 0.0);
  EXPECT_EQ(g.rhs, 0.0);
  EXPECT_EQ(g.gap, 0.0);
}

TEST(GeometrizationGap, LinearSequenceBothSidesMinusOne) {
  RngStream r(14);
  const auto g = geometrization_identity_gap(
      [](std::uint64_t k) { return static_cast<double>(k); }, 0.9, 1'000'000, r);
  EXPECT_EQ(g.lhs, -1.0);
  EXPECT_NEAR(g.rhs, -1.0, 0.02);
  EXPECT_LT(g.gap, 0.02);
}

TEST(GeometrizationGap, QuadraticSequenceWithinThreeStandardErrors) {
  RngStream r(15);
  const auto g = geometrization_identity_gap(
      [](std::uint64_t k) { return static_cast<double>(k) * static_cast<double>(k); }, 0.75,
      1'000'000, r);
  // E N = 3, E N^2 = 21: both sides equal -(2 E N + 1) = -7.
  EXPECT_NEAR(g.lhs, -7.0, 0.1);
  EXPECT_NEAR(g.rhs, -7.0, 0.1);
  EXPECT_LT(g.gap, 3.0 * g.standard_error);
}

TEST(GeometrizationGap, DegenerateAndInvalidGamma) {
  RngStream r(16);
  const auto g =
      geometrization_identity_gap([](std::uint64_t k) { return 2.0 * k; }, 0.0, 10, r);
  EXPECT_EQ(g.gap, 0.0);
  EXPECT_THROW(geometrization_identity_gap([](std::uint64_t) { return 0.0; }, 1.0, 10, r),
               std::invalid_argument);
}
