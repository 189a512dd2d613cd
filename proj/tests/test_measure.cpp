#include <gtest/gtest.h>

#include <random>

#include "bonacci/measure.hpp"
#include "bonacci/witness.hpp"

using namespace bonacci;

namespace {

const ProbabilityPair kHalf{Rational(1, 2)};
const ProbabilityPair kThird{Rational(1, 3)};

}  // namespace

TEST(PrefixMeasures, GoldenUniform) {
  const auto pm = prefix_measures(2, kHalf);
  EXPECT_EQ(pm[0], 1);
  EXPECT_EQ(pm[1], Rational(2, 3));
  EXPECT_EQ(pm[2], Rational(1, 3));
}

TEST(PrefixMeasures, SelfSimilarityRelations) {
  for (int m = 2; m <= 7; ++m)
    for (const auto& p : {kHalf, kThird, ProbabilityPair(Rational(5, 8))}) {
      const auto pm = prefix_measures(m, p);
      for (int i = 1; i < m; ++i) EXPECT_EQ(1 - pm[i], p.p2() * (1 - pm[i + 1])) << m << " " << i;
      EXPECT_EQ(pm[m], p.p1() * pm[1]);
      for (int i = 0; i < m; ++i) EXPECT_GT(pm[i], pm[i + 1]);
    }
}

TEST(PrefixMeasures, InsideCylinderBrackets) {
  for (int m : {2, 3})
    for (const auto& p : {kHalf, kThird}) {
      const auto f = PisotField::make(m);
      const auto d = gap_alphabet(f);
      const auto pm = prefix_measures(m, p);
      for (int i = 1; i <= m; ++i) {
        const auto br = cylinder_bounds(f, p, FieldElement::zero(m), d[i], 16);
        EXPECT_TRUE(br.contains(pm[i])) << m << " " << i;
        EXPECT_LT(br.width(), Rational(1, 50)) << m << " " << i;
      }
    }
}

TEST(CylinderBounds, FullIntervalAndErrors) {
  const auto f = PisotField::make(3);
  const auto zero = FieldElement::zero(3), one = FieldElement::integer(3, 1);
  for (int depth : {1, 5, 12}) {
    const auto br = cylinder_bounds(f, kThird, zero, one, depth);
    EXPECT_EQ(br.lower, 1);
    EXPECT_EQ(br.upper, 1);
  }
  EXPECT_THROW(cylinder_bounds(f, kThird, one, zero, 5), Error);
  EXPECT_THROW(cylinder_bounds(f, kThird, zero, one, 0), Error);
  EXPECT_THROW(cylinder_bounds(f, kThird, zero, one, kMaxOracleDepth + 1), ResourceCapExceeded);
}

TEST(CylinderBounds, NarrowWithDepth) {
  const auto f = PisotField::make(2);
  const auto d = gap_alphabet(f);
  Rational prev = 2;
  for (int depth = 2; depth <= 18; depth += 4) {
    const auto br = cylinder_bounds(f, kThird, FieldElement::zero(2), d[1], depth);
    EXPECT_LE(br.width(), prev);
    prev = br.width();
  }
}

TEST(CylinderBounds, SmallestGapHoldsPOneTimesCOne) {
  for (int m = 2; m <= 4; ++m) {
    const auto f = PisotField::make(m);
    const auto pm = prefix_measures(m, kThird);
    EXPECT_TRUE(cylinder_bounds(f, kThird, FieldElement::zero(m), gap_alphabet(f)[m], 14).contains(kThird.p1() * pm[1]));
  }
}

TEST(BasicInterval, FirstRank) {
  const auto f = PisotField::make(2);
  const auto lv = initial_level(f, kHalf);
  const auto pm = prefix_measures(2, kHalf);
  EXPECT_EQ(basic_interval_measure(lv, 0, pm), Rational(1, 3));
  EXPECT_EQ(basic_interval_measure(lv, 1, pm), Rational(2, 3));
  EXPECT_THROW(basic_interval_measure(lv, 2, pm), Error);
  const auto scan = interval_ratio_scan(lv, pm);
  EXPECT_EQ(scan.max_ratio, 2);  // ρ_0 = 1/2
}

TEST(BasicInterval, SumToOneAndRefineConsistently) {
  for (int m : {2, 3})
    for (const auto& p : {kHalf, kThird}) {
      const auto f = PisotField::make(m);
      const auto pm = prefix_measures(m, p);
      Level lv = initial_level(f, p);
      for (int n = 1; n <= 8; ++n) {
        const auto mu = basic_interval_measures(lv, pm);
        Rational total = 0;
        for (const auto& x : mu) total += x;
        ASSERT_EQ(total, 1) << m << " " << n;
        const Level child = refine(f, lv);
        const auto idx = child_index_map(lv);
        const auto cmu = basic_interval_measures(child, pm);
        for (std::size_t j = 0; j + 1 < lv.size(); ++j) {
          Rational sum = 0;
          for (std::size_t c = idx[j]; c < idx[j + 1]; ++c) sum += cmu[c];
          ASSERT_EQ(sum, mu[j]) << m << " " << n << " " << j;
        }
        lv = child;
      }
    }
}

TEST(BasicInterval, InsideCylinderBrackets) {
  for (int m : {2, 3}) {
    const auto f = PisotField::make(m);
    const auto pm = prefix_measures(m, kThird);
    Level lv = initial_level(f, kThird);
    for (int n = 1; n <= 5; ++n) {
      if (n > 1) lv = refine(f, lv);
      const auto mu = basic_interval_measures(lv, pm);
      for (std::size_t j = 0; j < mu.size(); ++j)
        ASSERT_TRUE(cylinder_bounds(f, kThird, lv.points[j], lv.points[j + 1], 16).contains(mu[j]))
            << m << " " << n << " " << j;
    }
  }
}

TEST(Sandwich, UniformConstantHolds) {
  for (int m = 2; m <= 4; ++m)
    for (const auto& p : {kHalf, kThird, ProbabilityPair(Rational(4, 5))}) {
      const auto f = PisotField::make(m);
      const auto pm = prefix_measures(m, p);
      EXPECT_EQ(sandwich_constant(pm), std::min(pm[m], Rational(1 - pm[1])));
      Level lv = initial_level(f, p);
      for (int n = 2; n <= 10; ++n) {
        lv = refine(f, lv);
        ASSERT_TRUE(check_sandwich(lv, pm)) << m << " " << n;
      }
    }
}

TEST(IntervalScan, GoldenUniformStaysSmall) {
  const auto f = PisotField::make(2);
  const auto pm = prefix_measures(2, kHalf);
  Level lv = initial_level(f, kHalf);
  for (int n = 2; n <= 12; ++n) {
    lv = refine(f, lv);
    EXPECT_LT(interval_ratio_scan(lv, pm).max_ratio, 6) << n;
  }
}

TEST(IntervalScan, TribonacciFollowsWitness) {
  const auto f = PisotField::make(3);
  const auto pm = prefix_measures(3, kHalf);
  const Rational c = sandwich_constant(pm);
  Level lv = initial_level(f, kHalf);
  for (int n = 2; n <= 14; ++n) {
    lv = refine(f, lv);
    if (n > 2 && (n - 2) % 3 == 0) {
      const int k = (n - 2) / 3;
      EXPECT_GE(interval_ratio_scan(lv, pm).max_ratio, c * witness_ratio(3, kHalf, k)) << n;
    }
  }
}

TEST(BallProbe, WholeIntervalRatioIsOne) {
  const auto f = PisotField::make(3);
  const Endpoint half{FieldElement::integer(3, 1), 2};
  const auto r = ball_ratio_probe(f, kHalf, half, half, 10);
  ASSERT_TRUE(r.upper.has_value());
  EXPECT_LE(r.lower, 1);
  EXPECT_GE(*r.upper, 1);
  EXPECT_THROW(ball_ratio_probe(f, kHalf, half, Endpoint::of(FieldElement::zero(3)), 10), Error);
}

TEST(BallProbe, GoldenUniformProbesStayBounded) {
  const auto f = PisotField::make(2);
  std::mt19937 gen(20261016);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 11);
    const auto lv = build_level(f, kHalf, n);
    const std::size_t j = gen() % (lv.size() - 1);
    // Center at a point of X_n, radius one smallest gap d_2 / β^n.
    const Endpoint center = Endpoint::of(lv.points[j]);
    const Endpoint radius = Endpoint::of(gap_alphabet(f)[2].divided_by_beta(static_cast<unsigned>(n)));
    const auto r = ball_ratio_probe(f, kHalf, center, radius, n + 8);
    ASSERT_TRUE(r.upper.has_value()) << n << " " << j;
    EXPECT_LT(*r.upper, 64) << n << " " << j;
  }
}

TEST(BallProbe, WitnessLowerBoundGrows) {
  const auto f = PisotField::make(3);
  Rational prev = 0;
  for (int k = 1; k <= 3; ++k) {
    const int n = 3 * k + 2;
    const auto lv = build_level(f, kHalf, n);
    const auto s = witness_after_periods(3, kHalf, k);
    std::size_t j = 0;
    while (!(lv.points[j] == s.location)) ++j;
    // Ball over the interval [z_2, z_3] of the witness triple.
    const Endpoint center{lv.points[j + 1] + lv.points[j + 2], 2};
    const Endpoint radius{lv.points[j + 2] - lv.points[j + 1], 2};
    const auto r = ball_ratio_probe(f, kHalf, center, radius, n + 6);
    EXPECT_GT(r.lower, prev) << n;
    prev = r.lower;
  }
}
