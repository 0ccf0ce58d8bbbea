#include <gtest/gtest.h>

#include <random>

#include "reference.hpp"
#include "selmer3/localfield.hpp"

using namespace selmer3;

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(Rational(12), Integer(2)), 2);
  EXPECT_EQ(valuation(Rational(1), Integer(7)), 0);
  EXPECT_EQ(valuation(Rational(9, 14), Integer(7)), -1);
  EXPECT_THROW(valuation(Rational(0), Integer(5)), DomainError);
}

TEST(Valuation, AdditiveOnProducts) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dist(1, 5000);
  for (int i = 0; i < 300; ++i) {
    Rational x(dist(rng), dist(rng)), y(-dist(rng), dist(rng));
    for (int p : {2, 3, 5, 7, 11}) EXPECT_EQ(valuation(x * y, p), valuation(x, p) + valuation(y, p));
  }
}

TEST(UnitPart, Examples) {
  EXPECT_EQ(unit_part(50, 5), 2);
  EXPECT_EQ(unit_part(-27, 3), -1);
  EXPECT_EQ(unit_part(Rational(2, 45), 3), Rational(2, 5));
  auto vr = ValuedRational::at(Rational(-250, 7), 5);
  EXPECT_EQ(vr.val, 3);
  EXPECT_EQ(vr.unit, Rational(-2, 7));
}

TEST(IsSquare, Examples) {
  EXPECT_TRUE(is_square(2, Place::finite(7)));
  EXPECT_FALSE(is_square(5, Place::finite(5)));
  EXPECT_TRUE(is_square(9, Place::finite(5)));
  EXPECT_TRUE(is_square(17, Place::finite(2)));
  EXPECT_FALSE(is_square(5, Place::finite(2)));
  EXPECT_TRUE(is_square(Rational(1, 4), Place::finite(2)));
  EXPECT_FALSE(is_square(-1, Place::real()));
  EXPECT_TRUE(is_square(-1, Place::complex()));
}

TEST(IsSquare, AgreesWithBruteForceResidues) {
  for (std::int64_t p : {5, 7, 11, 13}) {
    for (std::int64_t u = 1; u < p; ++u)
      EXPECT_EQ(is_square(Rational(u), Place::finite(p)), ref::unit_square_mod(u, p, p)) << u << " mod " << p;
  }
  for (std::int64_t u = 1; u < 64; u += 2)
    EXPECT_EQ(is_square(Rational(u), Place::finite(2)), ref::unit_square_mod(u, 64, 2)) << u;
}

TEST(IsSquare, InvariantUnderSquareFactors) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dist(1, 400);
  for (int i = 0; i < 200; ++i) {
    Rational x(dist(rng) * (i % 2 ? 1 : -1), dist(rng));
    Rational t(dist(rng), dist(rng));
    for (Place pl : {Place::finite(2), Place::finite(3), Place::finite(5), Place::finite(13), Place::real()})
      EXPECT_EQ(is_square(x * t * t, pl), is_square(x, pl));
  }
}

TEST(IsSquare, ExactlyOneOfDAndMinus3DForSplitCubeFreePrimes) {
  for (std::int64_t p : {5, 11, 17, 23, 29}) {
    for (std::int64_t u = 1; u < p; ++u) {
      Place pl = Place::finite(p);
      EXPECT_NE(is_square(Rational(u), pl), is_square(Rational(-3 * u), pl));
    }
  }
}

TEST(Zeta3, Membership) {
  EXPECT_TRUE(zeta3_present(Place::finite(7)));
  EXPECT_FALSE(zeta3_present(Place::finite(5)));
  EXPECT_FALSE(zeta3_present(Place::finite(3)));
  EXPECT_FALSE(zeta3_present(Place::real()));
  EXPECT_TRUE(zeta3_present(Place::complex()));
}

TEST(Place, RejectsComposite) { EXPECT_THROW(Place::finite(15), DomainError); }

TEST(SexticClass, SigmaResiduesShareTheClassOfTwo) {
  SexticClass3 two = sextic_class_3adic(2);
  for (int d : {2, 11, 38, 47, 74, 83, -34, -25, 110, 119})
    EXPECT_EQ(sextic_class_3adic(d), two) << d;
  EXPECT_EQ(two.label(), "2");
}

TEST(SexticClass, TwoAndElevenByExhaustiveSearch) {
  // 11 / 2 is a unit sixth power mod 3^5, found by brute force.
  std::int64_t q = 11 * ref::inverse_mod(2, 243) % 243;
  EXPECT_TRUE(ref::unit_sixth_power_mod(q, 243));
  EXPECT_EQ(sextic_class_3adic(11), sextic_class_3adic(2));
}

TEST(SexticClass, InvariantUnderSixthPowers) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dist(1, 60);
  for (int i = 0; i < 200; ++i) {
    Rational d(dist(rng) * (i % 3 ? 1 : -1), dist(rng));
    Rational t(dist(rng), dist(rng));
    EXPECT_EQ(sextic_class_3adic(d * rpow(t, 6)), sextic_class_3adic(d));
  }
  EXPECT_EQ(sextic_class_3adic(64 * 5), sextic_class_3adic(5));
}

TEST(SexticClass, TransversalSeparatesClasses) {
  // Distinct transversal elements must not be sixth-power equivalent mod 3^5.
  std::vector<int> units = {1, 2, 4, -1, -2, -4};
  for (int a : units)
    for (int b : units) {
      std::int64_t q = ((a * ref::inverse_mod(b, 243)) % 243 + 243) % 243;
      EXPECT_EQ(ref::unit_sixth_power_mod(q, 243), a == b) << a << " " << b;
    }
}

TEST(UnitPowerClass, CubeClassesModSeven) {
  // Cubes mod 7 are {1, 6}; the classes are {1,6}, {2,5}, {3,4}.
  EXPECT_EQ(unit_power_class(6, 7, 3), 1);
  EXPECT_EQ(unit_power_class(5, 7, 3), 2);
  EXPECT_EQ(unit_power_class(4, 7, 3), 3);
  EXPECT_EQ(unit_power_class(4, 5, 3), 1);
}
