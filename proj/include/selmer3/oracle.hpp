#pragma once

// Brute-force verifiers.  Local cubic algebras over Q_p are listed from
// explicit maximal orders, and integrality of their orbits is decided by
// exhaustively enumerating sublattices of Z^3 (in Hermite normal form)
// that contain 1 and are closed under multiplication.  Nothing here uses
// the subring correspondence or the classification theorems under test.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "selmer3/cubicforms.hpp"
#include "selmer3/errors.hpp"
#include "selmer3/localclass.hpp"
#include "selmer3/localfield.hpp"
#include "selmer3/rational.hpp"

namespace selmer3 {

/// Raised when an exhaustive search would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultLatticeBudget = 2'000'000;

/// Z / p^k.
class TruncatedRing {
 public:
  TruncatedRing(std::int64_t p, int k) : p_(p), k_(k), mod_(1) {
    if (!is_prime_u64(static_cast<std::uint64_t>(p))) throw DomainError("TruncatedRing needs a prime");
    if (k < 1) throw DomainError("TruncatedRing precision must be positive");
    for (int i = 0; i < k; ++i) mod_ *= p;
  }

  std::int64_t p() const { return p_; }
  int k() const { return k_; }
  const Integer& modulus() const { return mod_; }

  Integer reduce(const Integer& x) const { return floor_mod(x, mod_); }
  Integer add(const Integer& x, const Integer& y) const { return reduce(x + y); }
  Integer mul(const Integer& x, const Integer& y) const { return reduce(x * y); }
  bool is_unit(const Integer& x) const { return reduce(x) % p_ != 0; }

  Integer inverse(const Integer& x) const {
    if (!is_unit(x)) throw DomainError("not a unit modulo p^k");
    return unit_residue(Rational(Integer(1), reduce(x)), mod_);
  }

  /// Whether the unit x is an e-th power of a unit, by exhaustive search.
  bool is_unit_power(const Integer& x, int e) const {
    Integer target = reduce(x);
    if (!is_unit(target)) throw DomainError("is_unit_power expects a unit");
    for (Integer t = 1; t < mod_; ++t) {
      if (t % p_ == 0) continue;
      if (boost::multiprecision::powm(t, e, mod_) == target) return true;
    }
    return false;
  }

 private:
  std::int64_t p_;
  int k_;
  Integer mod_;
};

namespace oracle_detail {

using Vec = CubicRing::Vec;
using Basis = std::array<Vec, 3>;

/// Row-style Hermite normal forms of all sublattices of Z^3 of index n:
/// rows (a, b, c), (0, d, e), (0, 0, f), adf = n, 0 <= b < d, 0 <= c, e < f.
template <class Visit>
void for_each_hnf(std::int64_t n, Visit&& visit) {
  for (std::int64_t a = 1; a <= n; ++a) {
    if (n % a) continue;
    for (std::int64_t d = 1; d <= n / a; ++d) {
      if ((n / a) % d) continue;
      std::int64_t f = n / a / d;
      for (std::int64_t b = 0; b < d; ++b)
        for (std::int64_t c = 0; c < f; ++c)
          for (std::int64_t e = 0; e < f; ++e)
            if (!visit(Basis{Vec{a, b, c}, Vec{0, d, e}, Vec{0, 0, f}})) return;
    }
  }
}

/// Membership of v in the lattice spanned by an HNF basis.  v is first
/// reduced modulo p^k, which is exact because a lattice of index p^j with
/// j <= k contains p^k Z^3.
inline bool contains(const Basis& h, Vec v, const TruncatedRing& tr) {
  for (auto& x : v) x = tr.reduce(x);
  for (int i = 0; i < 3; ++i) {
    if (v[i] % h[i][i] != 0) return false;
    Integer q = v[i] / h[i][i];
    for (int j = i; j < 3; ++j) v[j] -= q * h[i][j];
  }
  return true;
}

inline bool closed_with_one(const CubicRing& s, const Basis& h, const TruncatedRing& tr) {
  if (!contains(h, Vec{1, 0, 0}, tr)) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      if (!contains(h, s.mul(h[i], h[j]), tr)) return false;
  return true;
}

}  // namespace oracle_detail

/// Number of sublattices of index p^j that contain 1 and are closed under
/// multiplication (the orders of index p^j), counted modulo p^k.
inline std::uint64_t count_orders_of_index(const CubicRing& s, std::int64_t p, int j, const TruncatedRing& tr,
                                           std::uint64_t& budget) {
  if (j > tr.k()) throw DomainError("precision too small for index p^" + std::to_string(j));
  std::int64_t n = 1;
  for (int i = 0; i < j; ++i) n *= p;
  std::uint64_t count = 0;
  oracle_detail::for_each_hnf(n, [&](const oracle_detail::Basis& h) {
    if (budget == 0) throw BudgetExceeded("lattice budget exhausted at index " + std::to_string(n));
    --budget;
    if (oracle_detail::closed_with_one(s, h, tr)) ++count;
    return true;
  });
  return count;
}

/// A cubic etale algebra over Q_p with an explicit maximal order.
struct LocalAlgebra {
  std::string label;
  ClassKind kind = ClassKind::Trivial;
  std::optional<std::int64_t> u;
  bool field = false;
  CubicRing maximal_order;
  Integer discriminant;
};

namespace oracle_detail {

inline bool same_square_class(const Rational& x, const Rational& y, const Integer& p) {
  return is_square(x / y, Place::finite(p));
}

/// Z x Z[sqrt e] on the basis (1, (1,0), (0,sqrt e)).
inline CubicRing split_quadratic(const Integer& e) { return CubicRing::from_products({0, 1, 0}, {0, 0, 0}, {e, -e, 0}); }

inline std::int64_t smallest_nonsquare(std::int64_t p) {
  for (std::int64_t n = 2; n < p; ++n) {
    bool sq = false;
    for (std::int64_t t = 1; t < p && !sq; ++t) sq = t * t % p == n;
    if (!sq) return n;
  }
  return 0;
}

}  // namespace oracle_detail

/// Every cubic etale algebra over Q_p (p > 3) up to isomorphism: Q_p^3,
/// Q_p x Q_p(sqrt e) for the three nontrivial square classes, the unramified
/// cubic field, and Q_p(cuberoot(p u)) for u over cube classes (grouped by
/// brute force).
inline std::vector<LocalAlgebra> local_cubic_algebras(std::int64_t p) {
  if (p <= 3 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw DomainError("local_cubic_algebras needs p > 3");
  std::vector<LocalAlgebra> out;
  auto push = [&](std::string label, ClassKind kind, std::optional<std::int64_t> u, bool field, CubicRing r) {
    Integer disc = r.discriminant();
    out.push_back({std::move(label), kind, u, field, std::move(r), disc});
  };
  push("split", ClassKind::Trivial, std::nullopt, false, CubicRing::from_products({0, 1, 0}, {0, 0, 0}, {0, 0, 1}));
  std::int64_t n = oracle_detail::smallest_nonsquare(p);
  for (std::int64_t e : {n, p, p * n})
    push("Qp x Qp(sqrt " + std::to_string(e) + ")", ClassKind::Trivial, std::nullopt, false,
         oracle_detail::split_quadratic(e));
  // Unramified: t^3 - t - c irreducible mod p, else t^3 - c t - 1, searched in that order.
  std::optional<CubicRing> unram;
  for (std::int64_t c = 1; c < p && !unram; ++c) {
    for (std::int64_t lin : {std::int64_t{-1}, -c}) {
      std::int64_t cst = lin == -1 ? -c : -1;
      bool root = false;
      for (std::int64_t t = 0; t < p && !root; ++t) root = floor_mod(t * t % p * t + lin * t + cst, p) == 0;
      if (!root) {
        // Z[t]/(t^3 + lin t + cst) on (1, t, t^2).
        Integer L = lin, C = cst;
        unram = CubicRing::from_products({0, 0, 1}, {-C, -L, 0}, {0, -C, -L});
        break;
      }
    }
  }
  if (!unram) throw DomainError("no irreducible cubic found");
  push("unramified", ClassKind::UnramifiedNontrivial, std::nullopt, true, *unram);
  std::set<std::int64_t> cubes;
  for (std::int64_t t = 1; t < p; ++t) cubes.insert(t * t % p * t % p);
  std::vector<std::int64_t> reps;
  for (std::int64_t u = 1; u < p; ++u) {
    bool seen = false;
    for (std::int64_t r : reps) {
      // u ~ r iff u / r is a cube mod p.
      for (std::int64_t c : cubes) seen = seen || (r * c) % p == u;
    }
    if (!seen) reps.push_back(u);
  }
  for (std::int64_t u : reps)
    push("x^3 - " + std::to_string(p) + "*" + std::to_string(u), ClassKind::Ramified, u, true,
         CubicRing::from_products({0, 0, 1}, {p * u, 0, 0}, {0, p * u, 0}));
  return out;
}

/// Cubic field extensions of Q_p (p > 3) whose discriminant lies in the
/// square class of d.
inline int count_cubic_extensions(std::int64_t p, const Rational& d) {
  int count = 0;
  for (const LocalAlgebra& a : local_cubic_algebras(p))
    if (a.field && oracle_detail::same_square_class(Rational(a.discriminant), d, p)) ++count;
  return count;
}

struct OrbitEntry {
  std::string algebra;
  ClassKind kind = ClassKind::Trivial;
  std::optional<std::int64_t> u;
  int orbits = 1;              // 2 for fields (f(x,y) and f(y,x)), else 1
  int maximal_order_val = 0;   // v_p of the maximal order's discriminant
  bool integral = false;
  std::uint64_t orders_found = 0;
};

struct OrbitTable {
  std::int64_t p = 0;
  int k = 0;
  int disc_val = 0;
  Integer unit;
  std::vector<OrbitEntry> entries;

  int total_orbits() const {
    int t = 0;
    for (const OrbitEntry& e : entries) t += e.orbits;
    return t;
  }
  int integral_orbits() const {
    int t = 0;
    for (const OrbitEntry& e : entries) t += e.integral ? e.orbits : 0;
    return t;
  }
};

/// SL_2(Q_p)-orbits of discriminant d = p^v u and their integrality, at
/// precision p^k.  An orbit is integral iff its algebra has an order with
/// discriminant of valuation exactly v (the unit square class of an order's
/// discriminant is that of the algebra).
inline OrbitTable enumerate_orbits(std::int64_t p, int k, int disc_val, const Integer& unit,
                                   std::uint64_t budget = kDefaultLatticeBudget) {
  if (disc_val < 0) throw DomainError("discriminant valuation must be non-negative");
  if (unit % p == 0) throw DomainError("unit class representative must be prime to p");
  TruncatedRing tr(p, k);
  Rational d = Rational(ipow(Integer(p), static_cast<unsigned>(disc_val)) * unit);
  OrbitTable table{p, k, disc_val, unit, {}};
  for (const LocalAlgebra& a : local_cubic_algebras(p)) {
    if (!oracle_detail::same_square_class(Rational(a.discriminant), d, p)) continue;
    OrbitEntry e;
    e.algebra = a.label;
    e.kind = a.kind;
    e.u = a.u;
    e.orbits = a.field ? 2 : 1;
    e.maximal_order_val = valuation(a.discriminant, Integer(p));
    int gap = disc_val - e.maximal_order_val;
    if (gap >= 0 && gap % 2 == 0) {
      e.orders_found = count_orders_of_index(a.maximal_order, p, gap / 2, tr, budget);
      e.integral = e.orders_found > 0;
    }
    table.entries.push_back(std::move(e));
  }
  return table;
}

struct SubringCensus {
  std::uint64_t closed_sublattices = 0;
  std::size_t projective_roots = 0;
  bool discriminants_ok = true;
  bool agrees() const { return discriminants_ok && closed_sublattices == projective_roots; }
};

/// All index-p sublattices of Z^3 (p^2 + p + 1 of them) tested for
/// containing 1 and closure; compared with the zeros of the index form.
inline SubringCensus subring_census(const CubicRing& s, std::int64_t p) {
  TruncatedRing tr(p, 2);
  SubringCensus c;
  Integer disc = s.discriminant();
  oracle_detail::for_each_hnf(p, [&](const oracle_detail::Basis& h) {
    if (oracle_detail::closed_with_one(s, h, tr)) {
      ++c.closed_sublattices;
      // Rebase on 1 to read off the discriminant.
      oracle_detail::Basis b = h;
      if (b[0] != oracle_detail::Vec{1, 0, 0}) {
        // HNF with 1 inside has a = 1 (first pivot divides 1).
        c.discriminants_ok = false;
      } else {
        c.discriminants_ok = c.discriminants_ok && s.sublattice(b).discriminant() == p * p * disc;
      }
    }
    return true;
  });
  c.projective_roots = projective_roots_mod(ring_to_form(s), p).size();
  return c;
}

inline bool verify_subring_bijection(const CubicRing& s, std::int64_t p) { return subring_census(s, p).agrees(); }

}  // namespace selmer3
