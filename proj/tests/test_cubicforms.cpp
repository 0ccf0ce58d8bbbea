#include <gtest/gtest.h>

#include <random>

#include "reference.hpp"
#include "selmer3/cubicforms.hpp"

using namespace selmer3;

namespace {

CubicRing split_ring() { return CubicRing::from_products({0, 1, 0}, {0, 0, 0}, {0, 0, 1}); }

TwoByTwoMatrix random_unimodular(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  for (;;) {
    TwoByTwoMatrix g{dist(rng), dist(rng), dist(rng), dist(rng)};
    if (g.det_plus_minus_one()) return g;
  }
}

}  // namespace

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant({0, 1, 1, 0}), 1);
  EXPECT_EQ(discriminant({1, 0, 0, 1}), -27);
  for (int t : {-12, -1, 5, 49}) EXPECT_EQ(discriminant({Rational(-t, 4), 0, 1, 0}), t);
  // The unsigned representative has the opposite discriminant.
  EXPECT_EQ(discriminant({Rational(5, 4), 0, 1, 0}), -5);
}

TEST(Discriminant, MatchesSylvesterResultant) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    BinaryCubicForm f = ref::random_form(rng, 30);
    if (f.a == 0) continue;
    EXPECT_EQ(f.discriminant(), ref::sylvester_discriminant(f)) << f.str();
  }
}

TEST(Act, Examples) {
  BinaryCubicForm f{0, 1, 1, 0};
  EXPECT_EQ(act(TwoByTwoMatrix::identity(), f), f);
  BinaryCubicForm g = act({0, -1, 1, 0}, f);
  EXPECT_EQ(g, (BinaryCubicForm{0, 1, -1, 0}));
  EXPECT_EQ(g.discriminant(), 1);
  EXPECT_EQ(act({5, 0, 0, 1}, f).discriminant(), 25);
  EXPECT_THROW(act({1, 2, 2, 4}, f), DomainError);
}

TEST(Act, MatchesInterpolationAndCovariance) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dist(-7, 7);
  for (int i = 0; i < 300; ++i) {
    BinaryCubicForm f = ref::random_form(rng, 12);
    TwoByTwoMatrix g{Rational(dist(rng), 1 + i % 3), dist(rng), dist(rng), dist(rng)};
    if (g.det() == 0) continue;
    BinaryCubicForm h = act(g, f);
    EXPECT_EQ(h, ref::act_by_interpolation({g.a, g.b, g.c, g.d}, f));
    EXPECT_EQ(h.discriminant(), g.det() * g.det() * f.discriminant());
  }
}

TEST(Act, IsAGroupAction) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) {
    BinaryCubicForm f = ref::random_form(rng, 9);
    TwoByTwoMatrix g = random_unimodular(rng, 4), h = random_unimodular(rng, 4);
    EXPECT_EQ(act(g, act(h, f)), act(g * h, f));
  }
}

TEST(DeloneFaddeev, SplitExample) {
  CubicRing r = form_to_ring({0, 1, 1, 0});
  EXPECT_EQ(r.discriminant(), 1);
  EXPECT_EQ(rings_isomorphic(r, split_ring()), IsoVerdict::Isomorphic);
  EXPECT_EQ(ring_to_form(split_ring()).discriminant(), 1);
  EXPECT_TRUE(has_rational_root(ring_to_form(split_ring())));
}

TEST(DeloneFaddeev, PureCubicOrder) {
  for (int t : {2, 5, -7, 12}) {
    CubicRing r = CubicRing::from_products({0, 0, 1}, {t, 0, 0}, {0, t, 0});
    EXPECT_EQ(ring_to_form(r).discriminant(), -27 * t * t);
    EXPECT_EQ(r.discriminant(), -27 * t * t);
  }
}

TEST(DeloneFaddeev, RoundTripAndDiscriminant) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    BinaryCubicForm f = ref::random_form(rng, 20);
    CubicRing r = form_to_ring(f);
    EXPECT_EQ(Rational(r.discriminant()), f.discriminant());
    EXPECT_EQ(ring_to_form(r), f);
  }
}

TEST(DeloneFaddeev, NormalizationIsIdempotentOnFormRings) {
  CubicRing r = form_to_ring({2, -3, 5, 7});
  EXPECT_EQ(r.normalized(), r);
  CubicRing shifted = r.sublattice({CubicRing::Vec{1, 0, 0}, {3, 1, 0}, {-2, 0, 1}});
  EXPECT_EQ(ring_to_form(shifted), ring_to_form(r));
  EXPECT_EQ(shifted.normalized(), r);
}

TEST(DeloneFaddeev, RejectsNonIntegralForms) {
  EXPECT_THROW(form_to_ring({Rational(1, 2), 0, 1, 0}), DomainError);
}

TEST(DeloneFaddeev, RejectsNonAssociativeTables) {
  EXPECT_THROW(CubicRing::from_products({0, 1, 0}, {1, 0, 0}, {0, 0, 1}), DomainError);
}

TEST(DeloneFaddeev, UnimodularActionGivesIsomorphicRings) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 40; ++i) {
    BinaryCubicForm f = ref::random_form(rng, 6);
    TwoByTwoMatrix g = random_unimodular(rng, 3);
    EXPECT_EQ(rings_isomorphic(form_to_ring(f), form_to_ring(act(g, f))), IsoVerdict::Isomorphic);
  }
  // Different discriminants are refuted by invariants.
  EXPECT_EQ(rings_isomorphic(form_to_ring({1, 0, 0, 2}), form_to_ring({1, 0, 0, 3})), IsoVerdict::NotIsomorphic);
}

TEST(FactorizationType, Examples) {
  BinaryCubicForm split{0, 1, 1, 0};
  for (int p : {5, 7, 11, 13}) EXPECT_EQ(factorization_type(split, p), FactorizationType::Split111);
  // x^3 - 2 has no root mod 7 (2 is not a cube).
  EXPECT_EQ(factorization_type({1, 0, 0, -2}, 7), FactorizationType::Type3);
  EXPECT_EQ(factorization_type({1, 0, 0, 0}, 5), FactorizationType::Type1Cubed);
  EXPECT_EQ(factorization_type({1, 1, 0, 0}, 5), FactorizationType::Type1Sq1);
  EXPECT_EQ(factorization_type({1, 0, 1, 0}, 7), FactorizationType::Type12);
  EXPECT_EQ(factorization_type({5, 10, 0, 25}, 5), FactorizationType::Degenerate);
  EXPECT_EQ(factorization_type({0, 0, 0, 1}, 5), FactorizationType::Type1Cubed);
  EXPECT_EQ(to_string(FactorizationType::Type1Sq1), "(1^21)");
}

TEST(IndexPSubrings, CountsAndDiscriminants) {
  CubicRing split = form_to_ring({0, 1, 1, 0});
  EXPECT_EQ(index_p_subrings(split, 5).size(), 3u);
  EXPECT_EQ(index_p_subrings(form_to_ring({1, 0, 0, -2}), 7).size(), 0u);
  EXPECT_EQ(index_p_subrings(form_to_ring({1, 0, 0, 5}), 5).size(), 1u);
  EXPECT_EQ(index_p_subrings(form_to_ring({1, 1, 0, 0}), 5).size(), 2u);
  std::mt19937_64 rng(47);
  for (int i = 0; i < 100; ++i) {
    BinaryCubicForm f = ref::random_form(rng, 15);
    CubicRing s = form_to_ring(f);
    for (int p : {5, 7}) {
      auto subs = index_p_subrings(s, p);
      EXPECT_EQ(subs.size(), projective_roots_mod(f, p).size());
      for (const CubicRing& t : subs) EXPECT_EQ(t.discriminant(), p * p * s.discriminant());
    }
  }
}

TEST(ConductorSubring, DiscriminantScaling) {
  CubicRing s = form_to_ring({1, -1, 2, 3});
  EXPECT_EQ(conductor_subring(s, 5, 0), s);
  for (int k = 1; k <= 3; ++k) {
    Integer pk = ipow(Integer(7), 4 * k);
    EXPECT_EQ(conductor_subring(s, 7, k).discriminant(), pk * s.discriminant());
  }
  EXPECT_EQ(conductor_subring(conductor_subring(s, 5, 1), 5, 1).discriminant(),
            conductor_subring(s, 5, 2).discriminant());
}

TEST(SublatticeClosure, RejectsNonClosedLattices) {
  CubicRing s = form_to_ring({1, 0, 0, -2});  // x^3 - 2 is irreducible mod 7
  EXPECT_THROW(s.sublattice({CubicRing::Vec{1, 0, 0}, {0, 1, 0}, {0, 0, 7}}), DomainError);
}

TEST(OrbitSplit, ReducibleAndIrreducible) {
  EXPECT_EQ(orbit_split({0, 1, 1, 0}).size(), 1u);
  EXPECT_EQ(orbit_split({1, 0, 0, -8}).size(), 1u);
  EXPECT_EQ(orbit_split({Rational(1, 2), 0, 0, -4}).size(), 1u);
  auto two = orbit_split({1, 0, 0, -2});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[1], (BinaryCubicForm{-2, 0, 0, 1}));
  EXPECT_EQ(two[1].swapped(), two[0]);
  EXPECT_THROW(orbit_split({1, 2, 1, 0}), DomainError);
}
