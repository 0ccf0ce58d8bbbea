#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "selmer3/twistfamilies.hpp"

using namespace selmer3;

namespace {

// Independent squarefree / power-free test by trial division on int64.
bool power_free(std::int64_t h, int e) {
  for (std::int64_t p = 2; p * p <= h || (e == 1 && p <= h); ++p) {
    std::int64_t q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    if (q > h) break;
    if (h % q == 0) return false;
  }
  return true;
}

}  // namespace

TEST(ReduceClass, Examples) {
  EXPECT_EQ(reduce_class(64, 3).d0, 1);
  EXPECT_EQ(reduce_class(96, 3).d0, 96);
  EXPECT_EQ(reduce_class(Rational(2, 729), 3).d0, 2);
  EXPECT_EQ(reduce_class(-50, 3).d0, -50);
  EXPECT_EQ(reduce_class(Rational(1, 2), 3).d0, 32);
  EXPECT_THROW(reduce_class(0, 3), DomainError);
}

TEST(ReduceClass, IdempotentAndInvariant) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dist(1, 500);
  for (int i = 0; i < 200; ++i) {
    Rational d(dist(rng) * (i % 2 ? 1 : -1), dist(rng));
    Rational t(dist(rng), dist(rng));
    TwistClass c = reduce_class(d, 3);
    EXPECT_EQ(reduce_class(Rational(c.d0), 3), c);
    EXPECT_EQ(reduce_class(d * rpow(t, 6), 3), c);
    EXPECT_EQ(height(reduce_class(d * rpow(t, 6), 3)), height(c));
    // d / d0 is a sixth power.
    Rational q = d / Rational(c.d0);
    EXPECT_GT(q, 0);
    for (const auto& [p, e] : factorize(num(q))) EXPECT_EQ(e % 6, 0);
    for (const auto& [p, e] : factorize(den(q))) EXPECT_EQ(e % 6, 0);
  }
}

TEST(Height, Examples) {
  EXPECT_EQ(height(reduce_class(64, 3)), 1);
  EXPECT_EQ(height(reduce_class(-50, 3)), 50);
}

TEST(SquarefreeClass, Examples) {
  EXPECT_TRUE(is_squarefree_class(reduce_class(30, 3)));
  EXPECT_FALSE(is_squarefree_class(reduce_class(12, 3)));
  EXPECT_TRUE(is_squarefree_class(reduce_class(Rational(2 * 729 * 5), 3)));
}

TEST(Enumerate, SigmaFamilySmallWindow) {
  auto members = enumerate(sigma36_family(100));
  std::vector<Integer> got;
  for (const auto& c : members) got.push_back(c.d0);
  // Positive: 2, 11, 38, 47, 74, 83.  Negative d = 2 or 11 mod 36: -25, -34,
  // -61, -70, -97; -25 is not squarefree.
  std::vector<Integer> want{2, 11, -34, 38, 47, -61, -70, 74, 83, -97};
  EXPECT_EQ(got, want);
}

TEST(Enumerate, FullFamily) {
  auto members = enumerate(full_family(3, 10));
  EXPECT_EQ(members.size(), 18u);
  EXPECT_EQ(members.front().d0, 1);
  EXPECT_EQ(members[1].d0, -1);
  TwistFamily empty{3, {CongruenceCondition{36, {}}}, true, {1, -1}, 1000};
  EXPECT_TRUE(enumerate(empty).empty());
  EXPECT_TRUE(enumerate(full_family(3, 1)).empty());
}

TEST(Enumerate, StrictFilteringAgainstTrialDivision) {
  TwistFamily f = sigma36_family(5000);
  auto members = enumerate(f);
  std::size_t expected = 0;
  for (std::int64_t h = 1; h < 5000; ++h)
    for (std::int64_t d : {h, -h})
      if (power_free(h, 2) && (((d % 36) + 36) % 36 == 2 || ((d % 36) + 36) % 36 == 11)) ++expected;
  EXPECT_EQ(members.size(), expected);
  for (std::size_t i = 0; i < members.size(); ++i) {
    EXPECT_TRUE(f.contains(members[i]));
    EXPECT_LT(members[i].height(), 5000);
    if (i) {
      EXPECT_LE(members[i - 1].height(), members[i].height());
    }
  }
  auto full = enumerate(full_family(3, 3000));
  std::size_t sixth_free = 0;
  for (std::int64_t h = 1; h < 3000; ++h) sixth_free += power_free(h, 6);
  EXPECT_EQ(full.size(), 2 * sixth_free);
}

TEST(Enumerate, SixthPowerFreeDensity) {
  // 1 / zeta(6) = 945 / pi^6.
  const double target = 945.0 / std::pow(3.14159265358979323846, 6);
  TwistFamily f = full_family(3, 1'000'000);
  f.signs = {1};
  double ratio = static_cast<double>(enumerate(f).size()) / 999'999.0;
  EXPECT_NEAR(ratio / target, 1.0, 0.05);
}

TEST(Enumerate, Deterministic) {
  EXPECT_EQ(enumerate(sigma36_family(3000)), enumerate(sigma36_family(3000)));
}
