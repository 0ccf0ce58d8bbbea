#pragma once

// Sextic twists P_d of the Prym surface of y^3 = (x^2 - d)(x^2 - a d):
// local ratios of the two 3-isogenies phi_d, psi_d factoring pi_d, the
// 3-adic constraint solver, rank and density aggregates, and the
// Chabauty-style point bound.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selmer3/errors.hpp"
#include "selmer3/localfield.hpp"
#include "selmer3/rational.hpp"
#include "selmer3/selmerratio.hpp"
#include "selmer3/twistfamilies.hpp"

namespace selmer3 {

/// Exponents (phi_d, psi_d, phi_{-27d}, psi_{-27d}) at 3 are confined to
/// [lo, hi] and sum to `product_exponent` (c_3([3]) = 9).
struct ThreeAdicConstraint {
  int product_exponent = 2;
  int lo = 0;
  int hi = 1;
  bool unequal = true;  // c_3(phi_d) != c_3(psi_d)
  /// Which of phi_d, psi_d carries the 3.  Externally computed; the bounds
  /// only need the unordered pair.
  std::optional<std::pair<int, int>> ordering;
};

using ThreeAdicAssignment = std::array<int, 4>;

/// Every assignment meeting the constraint, in lexicographic order.
inline std::vector<ThreeAdicAssignment> solve_three_adic(const ThreeAdicConstraint& c) {
  if (c.lo > c.hi) throw UsageError("3-adic constraint: empty exponent range");
  std::vector<ThreeAdicAssignment> out;
  ThreeAdicAssignment x{};
  for (x[0] = c.lo; x[0] <= c.hi; ++x[0])
    for (x[1] = c.lo; x[1] <= c.hi; ++x[1])
      for (x[2] = c.lo; x[2] <= c.hi; ++x[2])
        for (x[3] = c.lo; x[3] <= c.hi; ++x[3]) {
          if (x[0] + x[1] + x[2] + x[3] != c.product_exponent) continue;
          if (c.unequal && x[0] == x[1]) continue;
          if (c.ordering && (x[0] != c.ordering->first || x[1] != c.ordering->second)) continue;
          out.push_back(x);
        }
  return out;
}

struct PrymCurveConfig {
  std::string name = "prym-a4";
  Rational a = 4;
  std::vector<Integer> bad_primes{2, 3};
  ThreeAdicConstraint three_adic;
  TwistFamily family = sigma36_family(0);
  /// The class of the family in Q_3^x / Q_3^{x6}; the 3-adic input is
  /// attached to it.
  std::string sextic_class = "2";
  // Curve data for the point bound.
  int genus = 3;
  int dim_b = 2;
  bool plane_quartic = true;
  int trivial_points = 1;             // C_d^triv(Q) = {infinity}
  int nontorsion_trivial_points = 0;

  void validate() const {
    if (a == 0 || a == 1 || a == -1) throw DomainError("prym: a must avoid 0 and +-1");
    if (a == 4)
      for (const auto& p : bad_primes)
        if (p != 2 && p != 3) throw DomainError("prym: for a = 4 the bad primes lie in {2, 3}");
    for (const auto& p : bad_primes)
      if (!is_prime(p)) throw UsageError("prym: bad prime " + p.str() + " is not prime");
    family.validate();
    if (family.n != 3) throw UsageError("prym: sextic twists need n = 3");
  }

  /// Both kernels are Z/3 (roots +-1, +-2 of the a = 4 quartic are rational),
  /// so the kernel characters are trivial.
  SelmerConfig selmer_config(const ThreeAdicAssignment& at3) const {
    SelmerConfig cfg;
    cfg.name = name;
    IsogenyDescriptor phi, psi;
    phi.name = "phi";
    psi.name = "psi";
    cfg.isogenies = {phi, psi};
    const std::string& cls = sextic_class;
    for (const auto& p : bad_primes) {
      auto pr = LocalPlaceProfile::concrete(Place::finite(p), ReductionType::Bad);
      if (p == 3) pr.overrides = {{"phi", cls, at3[0]}, {"psi", cls, at3[1]}};
      else pr.h1_vanishing = true;
      cfg.profiles.push_back(pr);
    }
    if (std::find(bad_primes.begin(), bad_primes.end(), Integer(3)) == bad_primes.end()) {
      auto pr = LocalPlaceProfile::concrete(Place::finite(3), ReductionType::Bad);
      pr.overrides = {{"phi", cls, at3[0]}, {"psi", cls, at3[1]}};
      cfg.profiles.push_back(pr);
    }
    return cfg;
  }
};

/// d, -3d are squares in neither Q_2 nor Q_3.
inline bool footnote_predicate(const Rational& d) {
  for (std::int64_t p : {2, 3}) {
    Place pl = Place::finite(p);
    if (is_square(d, pl) || is_square(-3 * d, pl)) return false;
  }
  return true;
}

struct PlacePair {
  std::string place;
  int phi = 0;
  int psi = 0;
  Provenance provenance = Provenance::Good;
};

struct PrymTwistExponents {
  Integer d;
  std::vector<PlacePair> places;
  std::vector<ThreeAdicAssignment> solutions;  // all consistent 3-adic assignments
  ThreeAdicAssignment chosen{};
  bool ordering_assumed = false;
  int k_phi = 0, k_psi = 0;
  int k_pi() const { return k_phi + k_psi; }
  /// The pair of exponents that every solution agrees on, unordered.
  std::pair<int, int> unordered() const { return std::minmax(k_phi, k_psi); }
};

inline PrymTwistExponents assemble_local_exponents(const PrymCurveConfig& cfg, const Rational& d) {
  TwistClass c = reduce_class(d, 3);
  if (!cfg.family.contains(c)) throw DomainError("d = " + to_string(d) + " is not in the configured family");
  if (sextic_class_3adic(Rational(c.d0)).label() != cfg.sextic_class)
    throw DomainError("d = " + to_string(d) + " is not in the configured sextic class at 3");
  auto sols = solve_three_adic(cfg.three_adic);
  if (sols.empty()) throw DomainError("3-adic constraints are unsatisfiable");
  PrymTwistExponents out;
  out.d = c.d0;
  out.solutions = sols;
  out.chosen = sols.front();
  out.ordering_assumed = cfg.three_adic.ordering.has_value();
  SelmerRatioReport rep = global_report(cfg.selmer_config(out.chosen), Rational(c.d0));
  const auto& phi = rep.at("phi");
  const auto& psi = rep.at("psi");
  for (std::size_t i = 0; i < phi.places.size(); ++i)
    out.places.push_back({phi.places[i].place, phi.places[i].exponent, psi.places[i].exponent, phi.places[i].provenance});
  out.k_phi = phi.global_k;
  out.k_psi = psi.global_k;
  return out;
}

/// Average dim Sel(alpha) + dim Sel(alpha-hat) over T_k is at most |k| + 3^{-|k|}.
inline Rational average_bound_term(int k) { return rank_density_bounds(k).avg_dim_bound; }

struct TwistRankBound {
  Rational average_term;   // contribution to the average-rank bound
  int subset_rank = 0;     // rank <= this ...
  Rational subset_density; // ... on at least this proportion of the cell
};

inline TwistRankBound rank_bound_per_twist(int k_phi, int k_psi) {
  TwistRankBound b;
  b.average_term = average_bound_term(k_phi) + average_bound_term(k_psi);
  b.subset_rank = std::abs(k_phi) + std::abs(k_psi);
  b.subset_density = 1 - (1 - rank_density_bounds(k_phi).exact_dim_density) -
                     (1 - rank_density_bounds(k_psi).exact_dim_density);
  return b;
}

/// f-tilde(genus, plane quartic, r): only the entry used for plane quartics
/// with r <= 2 is known.
inline std::optional<int> f_tilde(int genus, bool plane_quartic, int r) {
  if (genus == 3 && plane_quartic && r >= 0 && r <= 2) return 4;
  return std::nullopt;
}

inline int chabauty_point_bound(const PrymCurveConfig& cfg, int rank_cap) {
  if (rank_cap < 0) throw DomainError("rank cap must be nonnegative");
  if (rank_cap >= cfg.dim_b) throw DomainError("Chabauty inapplicable: rank cap must be below dim B");
  int r = rank_cap + cfg.genus - cfg.dim_b;
  auto f = f_tilde(cfg.genus, cfg.plane_quartic, r);
  if (!f) throw DomainError("f-tilde unavailable for this curve type");
  return *f + cfg.trivial_points + cfg.nontorsion_trivial_points;
}

struct PrymTwistRow {
  PrymTwistExponents exponents;
  int parity = 0;  // parity of dim Sel_3(P_d)
  TwistRankBound bound;
};

struct PrymAggregate {
  Rational average_rank_bound;
  int subset_rank = 0;
  Rational subset_density;
  std::optional<int> point_bound;
  std::string point_bound_note;
  Rational rank_le2_density;  // Markov: rank >= 3 on at most B/3
};

struct PrymReport {
  std::string config_name;
  Integer height_bound;
  std::vector<PrymTwistRow> rows;
  std::optional<PrymAggregate> aggregate;  // absent for an empty family
  std::vector<ThreeAdicAssignment> solutions;
  bool ordering_assumed = false;
};

/// Aggregates take the worst case over every twist and every consistent
/// 3-adic assignment, so they are valid whichever assignment is true.
inline PrymReport family_report(PrymCurveConfig cfg, const Integer& height_bound) {
  cfg.validate();
  cfg.family.height_bound = height_bound;
  PrymReport rep;
  rep.config_name = cfg.name;
  rep.height_bound = height_bound;
  rep.solutions = solve_three_adic(cfg.three_adic);
  rep.ordering_assumed = cfg.three_adic.ordering.has_value();
  std::optional<PrymAggregate> agg;
  for (const TwistClass& c : enumerate(cfg.family)) {
    PrymTwistRow row;
    row.exponents = assemble_local_exponents(cfg, Rational(c.d0));
    row.parity = parity_prediction(row.exponents.k_pi());
    row.bound = rank_bound_per_twist(row.exponents.k_phi, row.exponents.k_psi);
    // Every consistent assignment shifts (k_phi, k_psi) by the 3-adic entries.
    int at3_phi = row.exponents.chosen[0], at3_psi = row.exponents.chosen[1];
    for (const auto& s : rep.solutions) {
      TwistRankBound b = rank_bound_per_twist(row.exponents.k_phi - at3_phi + s[0], row.exponents.k_psi - at3_psi + s[1]);
      if (!agg) {
        agg = PrymAggregate{b.average_term, b.subset_rank, b.subset_density, std::nullopt, {}, 0};
        continue;
      }
      agg->average_rank_bound = std::max(agg->average_rank_bound, b.average_term);
      agg->subset_rank = std::max(agg->subset_rank, b.subset_rank);
      agg->subset_density = std::min(agg->subset_density, b.subset_density);
    }
    rep.rows.push_back(std::move(row));
  }
  if (agg) {
    agg->rank_le2_density = std::max(Rational(0), Rational(1 - agg->average_rank_bound / 3));
    if (agg->subset_density <= 0) {
      agg->point_bound_note = "no positive-density subset with bounded rank";
    } else {
      try {
        agg->point_bound = chabauty_point_bound(cfg, agg->subset_rank);
      } catch (const DomainError& e) {
        agg->point_bound_note = e.what();
      }
    }
  }
  rep.aggregate = agg;
  return rep;
}

/// The shipped a = 4 configuration over d squarefree, d = 2 or 11 mod 36.
inline PrymCurveConfig prym_a4_config() {
  PrymCurveConfig c;
  c.three_adic.ordering = std::make_pair(1, 0);
  return c;
}

}  // namespace selmer3
