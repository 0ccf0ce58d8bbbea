#include <gtest/gtest.h>

#include "selmer3/prym.hpp"

using namespace selmer3;

TEST(ThreeAdic, SolverWithOrdering) {
  auto sols = solve_three_adic(prym_a4_config().three_adic);
  ASSERT_EQ(sols.size(), 2u);
  EXPECT_EQ(sols[0], (ThreeAdicAssignment{1, 0, 0, 1}));
  EXPECT_EQ(sols[1], (ThreeAdicAssignment{1, 0, 1, 0}));
}

TEST(ThreeAdic, SolverUnordered) {
  ThreeAdicConstraint c;
  auto sols = solve_three_adic(c);
  EXPECT_EQ(sols.size(), 4u);
  for (const auto& s : sols) {
    EXPECT_EQ(s[0] + s[1] + s[2] + s[3], 2);
    EXPECT_NE(s[0], s[1]);
  }
  c.unequal = false;
  EXPECT_EQ(solve_three_adic(c).size(), 6u);  // C(4, 2)
  c.lo = 2;
  c.hi = 1;
  EXPECT_THROW(solve_three_adic(c), UsageError);
}

TEST(Prym, ConfigValidation) {
  PrymCurveConfig c = prym_a4_config();
  EXPECT_NO_THROW(c.validate());
  c.a = 1;
  EXPECT_THROW(c.validate(), DomainError);
  c = prym_a4_config();
  c.bad_primes.push_back(5);
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(Prym, TwistTwo) {
  auto e = assemble_local_exponents(prym_a4_config(), 2);
  EXPECT_EQ(e.k_phi, 0);
  EXPECT_EQ(e.k_psi, -1);
  EXPECT_EQ(e.k_pi(), -1);
  EXPECT_EQ(e.unordered(), std::make_pair(-1, 0));
  EXPECT_TRUE(e.ordering_assumed);
  EXPECT_EQ(parity_prediction(e.k_pi()), 1);
}

TEST(Prym, OutsideFamilyRejected) {
  EXPECT_THROW(assemble_local_exponents(prym_a4_config(), -25), DomainError);
  EXPECT_THROW(assemble_local_exponents(prym_a4_config(), 5), DomainError);
  // Class invariance: 2 * 6^6 reduces to 2.
  EXPECT_EQ(assemble_local_exponents(prym_a4_config(), Rational(2) * 46656).d, 2);
}

TEST(Prym, EveryMemberOfSigma) {
  PrymCurveConfig cfg = prym_a4_config();
  cfg.family.height_bound = 3000;
  auto members = enumerate(cfg.family);
  ASSERT_FALSE(members.empty());
  for (const auto& m : members) {
    auto e = assemble_local_exponents(cfg, Rational(m.d0));
    EXPECT_EQ(std::abs(e.k_pi()) % 2, 1) << m.str();
    // Exactly one of c(phi), c(psi) is 1; the other is 3^{+-1}.
    EXPECT_TRUE((e.k_phi == 0) != (e.k_psi == 0)) << m.str();
    EXPECT_EQ(std::abs(e.k_phi) + std::abs(e.k_psi), 1);
    // Duality: c(phi-hat) = 3 / c(phi).
    EXPECT_EQ(duality_exponent(3, duality_exponent(3, e.k_phi)), e.k_phi);
    EXPECT_TRUE(footnote_predicate(Rational(m.d0))) << m.str();
  }
}

TEST(Prym, FootnotePredicateConverseFails) {
  // 14 = 2 mod 4 and 14 = 2 mod 3: squares of neither kind at 2 or 3, but 14
  // is not 2 or 11 mod 36.
  EXPECT_TRUE(footnote_predicate(14));
  EXPECT_FALSE(sigma36_family(0).contains(Rational(14)));
  EXPECT_FALSE(footnote_predicate(1));
  EXPECT_FALSE(footnote_predicate(-3));
}

TEST(Prym, PointBound) {
  PrymCurveConfig c = prym_a4_config();
  EXPECT_EQ(f_tilde(3, true, 2), 4);
  EXPECT_FALSE(f_tilde(3, false, 2));
  EXPECT_FALSE(f_tilde(3, true, 3));
  EXPECT_EQ(chabauty_point_bound(c, 1), 5);
  EXPECT_EQ(chabauty_point_bound(c, 0), 5);
  EXPECT_THROW(chabauty_point_bound(c, 2), DomainError);
  c.nontorsion_trivial_points = 2;
  EXPECT_EQ(chabauty_point_bound(c, 1), 7);
}

TEST(Prym, RankBoundPerTwist) {
  auto b = rank_bound_per_twist(0, -1);
  EXPECT_EQ(b.average_term, Rational(7, 3));
  EXPECT_EQ(b.subset_rank, 1);
  EXPECT_EQ(b.subset_density, Rational(1, 3));
}

TEST(Prym, FamilyReportAggregates) {
  PrymReport r = family_report(prym_a4_config(), 10000);
  ASSERT_TRUE(r.aggregate);
  EXPECT_EQ(r.aggregate->average_rank_bound, Rational(7, 3));
  EXPECT_EQ(r.aggregate->subset_rank, 1);
  EXPECT_EQ(r.aggregate->subset_density, Rational(1, 3));
  EXPECT_EQ(r.aggregate->point_bound, 5);
  EXPECT_EQ(r.aggregate->rank_le2_density, Rational(2, 9));
  EXPECT_EQ(r.rows.size(), 1017u);
  for (const auto& row : r.rows) EXPECT_EQ(row.parity, 1);
}

TEST(Prym, SmallAndEmptyWindows) {
  EXPECT_FALSE(family_report(prym_a4_config(), 2).aggregate);
  EXPECT_TRUE(family_report(prym_a4_config(), 2).rows.empty());
  auto small = family_report(prym_a4_config(), 50);
  ASSERT_TRUE(small.aggregate);
  EXPECT_EQ(small.aggregate->average_rank_bound, Rational(7, 3));
  EXPECT_EQ(small.aggregate->subset_density, Rational(1, 3));
}

TEST(Prym, UnorderedModeStillBounds) {
  PrymCurveConfig c = prym_a4_config();
  c.three_adic.ordering.reset();
  PrymReport r = family_report(c, 2000);
  ASSERT_TRUE(r.aggregate);
  EXPECT_FALSE(r.ordering_assumed);
  EXPECT_EQ(r.solutions.size(), 4u);
  EXPECT_GE(r.aggregate->average_rank_bound, Rational(7, 3));
  EXPECT_GT(r.aggregate->rank_le2_density, 0);
}
