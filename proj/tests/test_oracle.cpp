#include <gtest/gtest.h>

#include <random>

#include "reference.hpp"
#include "selmer3/oracle.hpp"

using namespace selmer3;

namespace {

Integer nonsquare_unit(std::int64_t p) {
  std::int64_t n = 2;
  while (is_square(Rational(n), Place::finite(p))) ++n;
  return n;
}

}  // namespace

TEST(TruncatedRing, Arithmetic) {
  TruncatedRing r(3, 5);
  EXPECT_EQ(r.modulus(), 243);
  EXPECT_EQ(r.mul(r.inverse(2), 2), 1);
  EXPECT_TRUE(r.is_unit_power(r.mul(11, r.inverse(2)), 6));
  EXPECT_FALSE(r.is_unit_power(r.mul(5, r.inverse(2)), 6));
  EXPECT_THROW(r.inverse(6), DomainError);
  EXPECT_THROW(TruncatedRing(4, 2), DomainError);
}

TEST(CubicExtensions, Counts) {
  EXPECT_EQ(count_cubic_extensions(7, 1), 4);
  EXPECT_EQ(count_cubic_extensions(5, 1), 1);
  EXPECT_EQ(count_cubic_extensions(5, 5), 0);
  EXPECT_EQ(count_cubic_extensions(5, -3), 1);
  EXPECT_EQ(count_cubic_extensions(13, 2), 0);
}

TEST(CubicExtensions, AlgebraList) {
  // Q_p^3, three quadratic-times-line algebras, one unramified field and
  // one ramified field per cube class.
  EXPECT_EQ(local_cubic_algebras(5).size(), 6u);
  EXPECT_EQ(local_cubic_algebras(7).size(), 8u);
  for (const auto& a : local_cubic_algebras(11)) {
    if (a.kind == ClassKind::UnramifiedNontrivial) {
      EXPECT_EQ(valuation(a.discriminant, Integer(11)), 0);
    } else if (a.kind == ClassKind::Ramified) {
      EXPECT_EQ(valuation(a.discriminant, Integer(11)), 2);
    }
  }
}

TEST(EnumerateOrbits, PaperCases) {
  OrbitTable t = enumerate_orbits(5, 6, 1, 1);
  EXPECT_EQ(t.total_orbits(), 1);
  EXPECT_EQ(t.integral_orbits(), 1);

  OrbitTable sq = enumerate_orbits(5, 6, 2, 1);
  for (const auto& e : sq.entries)
    EXPECT_EQ(e.integral, e.kind != ClassKind::UnramifiedNontrivial) << e.algebra;

  OrbitTable ram = enumerate_orbits(7, 6, 3, 1);
  EXPECT_EQ(ram.total_orbits(), 1);
  OrbitTable ram2 = enumerate_orbits(7, 6, 2, 1);
  int ramified = 0;
  for (const auto& e : ram2.entries)
    if (e.kind == ClassKind::Ramified) {
      ++ramified;
      EXPECT_TRUE(e.integral);
    }
  EXPECT_EQ(ramified, 3);
}

TEST(EnumerateOrbits, AgreesWithClassificationAndTable) {
  for (std::int64_t p : {5, 7}) {
    for (int v = 0; v <= 4; ++v) {
      for (Integer u : {Integer(1), nonsquare_unit(p)}) {
        Rational d(ipow(Integer(p), v) * u);
        OrbitTable t = enumerate_orbits(p, 6, v, u);
        auto classes = classify_integral(p, d);
        int dims = h1_dims(Place::finite(p), d).total;
        int expected = 1;
        for (int i = 0; i < dims; ++i) expected *= 3;
        EXPECT_EQ(t.total_orbits(), expected);
        EXPECT_EQ(static_cast<int>(classes.size()), expected);
        for (const auto& c : classes) {
          bool matched = false;
          for (const auto& e : t.entries) {
            bool kind_ok = e.kind == c.kind && (c.kind != ClassKind::Ramified || e.u == c.u);
            if (!kind_ok) continue;
            matched = true;
            EXPECT_EQ(e.integral, c.integral) << "p=" << p << " v=" << v << " " << c.label();
          }
          EXPECT_TRUE(matched) << c.label();
        }
      }
    }
  }
}

TEST(EnumerateOrbits, PrecisionStability) {
  for (std::int64_t p : {5, 7}) {
    for (int v = 0; v <= 4; ++v) {
      OrbitTable a = enumerate_orbits(p, 6, v, 1), b = enumerate_orbits(p, 7, v, 1);
      ASSERT_EQ(a.entries.size(), b.entries.size());
      for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].integral, b.entries[i].integral);
        EXPECT_EQ(a.entries[i].orders_found, b.entries[i].orders_found);
      }
    }
  }
}

TEST(EnumerateOrbits, BudgetAndPrecisionGuards) {
  EXPECT_THROW(enumerate_orbits(7, 6, 4, 1, 10), BudgetExceeded);
  EXPECT_THROW(enumerate_orbits(5, 1, 4, 1), DomainError);
}

TEST(SubringBijection, Examples) {
  EXPECT_TRUE(verify_subring_bijection(form_to_ring({0, 1, 1, 0}), 5));
  EXPECT_EQ(subring_census(form_to_ring({0, 1, 1, 0}), 5).closed_sublattices, 3u);
  EXPECT_EQ(subring_census(form_to_ring({1, 0, 0, -2}), 7).closed_sublattices, 0u);
  EXPECT_EQ(subring_census(form_to_ring({1, 1, 0, 0}), 5).closed_sublattices, 2u);
  EXPECT_EQ(subring_census(form_to_ring({5, 5, 5, 5}), 5).closed_sublattices, 6u);
}

TEST(SubringBijection, RandomForms) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 50; ++i) {
    CubicRing s = form_to_ring(ref::random_form(rng, 20));
    for (std::int64_t p : {5, 7, 11}) EXPECT_TRUE(verify_subring_bijection(s, p));
  }
}
