#pragma once

// Local classification of H^1(F, A_d[phi_d]) classes at a finite place:
// dimensions, which SL_2-orbits have integral representatives, and which
// classes are soluble.  Classes are symbolic tags, never cocycles.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "selmer3/cubicforms.hpp"
#include "selmer3/descriptor.hpp"
#include "selmer3/errors.hpp"
#include "selmer3/localfield.hpp"
#include "selmer3/rational.hpp"

namespace selmer3 {

struct H1Dims {
  int total = 0;
  int unramified = 0;
  friend bool operator==(const H1Dims&, const H1Dims&) = default;
};

inline H1Dims h1_dims(const Place& place, const Rational& d) {
  if (!place.is_finite()) throw DomainError("h1_dims: outside Table 1 domain (archimedean place)");
  if (place.prime() == 3) throw DomainError("h1_dims: outside Table 1 domain (residue characteristic 3)");
  SquareClassification sq = classify_squares(d, place);
  if (zeta3_present(place)) {
    if (sq.d_is_square || sq.minus3d_is_square) return {2, 1};
    return {0, 0};
  }
  if (sq.d_is_square) return {1, 1};
  if (sq.minus3d_is_square) return {1, 0};
  return {0, 0};
}

/// d at a finite place, with v(d) reduced into [0, 2n).
struct LocalTwistDatum {
  Place place = Place::real();
  Rational d;
  int v_d = 0;
  Rational u;
  SquareClassification squares;
  std::optional<int> r;  // 3^r = gcd(3^m, v(d)), for v(d) even and positive

  static LocalTwistDatum make(const Place& place, const Rational& d, int m = 1) {
    if (!place.is_finite()) throw DomainError("LocalTwistDatum needs a finite place");
    if (d == 0) throw DomainError("twist parameter must be nonzero");
    const Integer& p = place.prime();
    int n = static_cast<int>(ipow(Integer(3), static_cast<unsigned>(m)));
    int v = valuation(d, p);
    int shift = static_cast<int>(floor_mod(std::int64_t{v}, 2 * n)) - v;
    Rational dr = d * (shift >= 0 ? Rational(ipow(p, static_cast<unsigned>(shift)))
                                  : Rational(Integer(1), ipow(p, static_cast<unsigned>(-shift))));
    LocalTwistDatum t;
    t.place = place;
    t.d = dr;
    t.v_d = v + shift;
    t.u = unit_part(dr, p);
    t.squares = classify_squares(dr, place);
    if (t.v_d > 0 && t.v_d % 2 == 0) {
      int r = 0;
      int vv = t.v_d;
      while (r < m && vv % 3 == 0) {
        vv /= 3;
        ++r;
      }
      t.r = r;
    }
    return t;
  }
};

enum class ClassKind { Trivial, UnramifiedNontrivial, Ramified };
enum class Solubility { Soluble, NotSoluble, Undetermined };

inline std::string to_string(Solubility s) {
  switch (s) {
    case Solubility::Soluble: return "soluble";
    case Solubility::NotSoluble: return "not-soluble";
    case Solubility::Undetermined: return "undetermined";
  }
  return {};
}

struct OrbitClassDescriptor {
  ClassKind kind = ClassKind::Trivial;
  int index = 0;                    // 1 or 2 for the two orbits of a field
  std::optional<std::int64_t> u;    // cube-class representative of a ramified field x^3 - p u
  bool integral = false;
  std::optional<Solubility> soluble;

  /// Stable JSON kind tag.
  std::string kind_tag() const {
    switch (kind) {
      case ClassKind::Trivial: return "trivial";
      case ClassKind::UnramifiedNontrivial: return "unram-" + std::to_string(index);
      case ClassKind::Ramified: return "ramified";
    }
    return {};
  }

  /// Unique label within one place.
  std::string label() const {
    if (kind != ClassKind::Ramified) return kind_tag();
    return "ramified-u" + std::to_string(u.value_or(1)) + "-" + std::to_string(index);
  }

  bool is_unramified() const { return kind != ClassKind::Ramified; }
};

/// Representatives of F_p^x / F_p^{x3}, smallest in each class.
inline std::vector<std::int64_t> cube_class_representatives(const Integer& p) {
  std::set<std::int64_t> reps;
  for (Integer r = 1; r < p; ++r) reps.insert(unit_power_class(Rational(r), p, 3));
  return {reps.begin(), reps.end()};
}

/// All classes of H^1 at (p, d), without integrality or solubility flags.
/// Nontrivial unramified classes come as the orbit pair of the unramified
/// cubic field; ramified ones as the orbit pairs of x^3 - p u.  Which member
/// of a pair is "1" and which is "2" is a labeling choice, not canonical.
inline std::vector<OrbitClassDescriptor> h1_classes(const Place& place, const Rational& d) {
  H1Dims dims = h1_dims(place, d);
  std::vector<OrbitClassDescriptor> out;
  out.push_back({ClassKind::Trivial, 0, std::nullopt, false, std::nullopt});
  if (dims.unramified == 1) {
    out.push_back({ClassKind::UnramifiedNontrivial, 1, std::nullopt, false, std::nullopt});
    out.push_back({ClassKind::UnramifiedNontrivial, 2, std::nullopt, false, std::nullopt});
  }
  int total = 1;
  for (int i = 0; i < dims.total; ++i) total *= 3;
  int ramified_pairs = (total - static_cast<int>(out.size())) / 2;
  if (ramified_pairs > 0) {
    std::vector<std::int64_t> reps = cube_class_representatives(place.prime());
    if (static_cast<int>(reps.size()) != ramified_pairs)
      throw DomainError("ramified class count does not match the cube classes");
    for (std::int64_t u : reps)
      for (int i = 1; i <= 2; ++i) out.push_back({ClassKind::Ramified, i, u, false, std::nullopt});
  }
  return out;
}

namespace detail {

inline void require_classification_domain(const Integer& p, const Rational& d) {
  if (p <= 3 || !is_prime(p)) throw DomainError("integral classification needs a prime p > 3");
  if (d == 0) throw DomainError("d must be nonzero");
  if (valuation(d, p) < 0) throw DomainError("d must be p-integral");
}

}  // namespace detail

/// Integral orbits of discriminant d over Q_p, p > 3.
inline std::vector<OrbitClassDescriptor> classify_integral(const Integer& p, const Rational& d) {
  detail::require_classification_domain(p, d);
  int v = valuation(d, p);
  std::vector<OrbitClassDescriptor> classes = h1_classes(Place::finite(p), d);
  for (OrbitClassDescriptor& c : classes) {
    if (v == 0) c.integral = c.is_unramified();
    else if (v % 2 == 1) c.integral = true;  // only the trivial class exists
    else if (v == 2) c.integral = c.kind != ClassKind::UnramifiedNontrivial;
    else c.integral = true;
  }
  return classes;
}

namespace detail {

/// Z[t]/(t^3 + b t^2 + c t + e) on the basis (1, t, t^2).
inline CubicRing monogenic_ring(const Integer& b, const Integer& c, const Integer& e) {
  return CubicRing::from_products({0, 0, 1}, {-e, -c, -b}, {b * e, b * c - e, b * b - c});
}

/// The maximal order of the unramified cubic extension: Z_p[t] for the first
/// monic cubic irreducible mod p in lexicographic order.
inline CubicRing unramified_maximal_order(std::int64_t p) {
  for (std::int64_t b = 0; b < p; ++b)
    for (std::int64_t c = 0; c < p; ++c)
      for (std::int64_t e = 1; e < p; ++e) {
        bool root = false;
        for (std::int64_t t = 0; t < p && !root; ++t) root = (((t * t + b * t + c) % p) * t + e) % p == 0;
        if (!root) return monogenic_ring(b, c, e);
      }
  throw DomainError("no irreducible cubic found");
}

/// Z_p[alpha], alpha^3 = p u: the maximal order of a tame totally ramified
/// cubic, discriminant -27 p^2 u^2.
inline CubicRing eisenstein_order(const Integer& p, const Integer& u) {
  return CubicRing::from_products({0, 0, 1}, {p * u, 0, 0}, {0, p * u, 0});
}

/// Descends through index-p subrings (conductor orders when none exist) until
/// the discriminant has valuation v.
inline CubicRing descend_to_valuation(CubicRing s, const Integer& p, int v) {
  int cur = valuation(s.discriminant(), p);
  while (cur < v) {
    std::vector<CubicRing> subs = index_p_subrings(s, static_cast<std::int64_t>(p));
    if (!subs.empty()) {
      s = subs.front();
      cur += 2;
    } else {
      if (v - cur < 4) throw DomainError("no order with the requested discriminant valuation");
      s = conductor_subring(s, p, 1);
      cur += 4;
    }
  }
  if (cur != v) throw DomainError("no order with the requested discriminant valuation");
  return s;
}

}  // namespace detail

/// A p-integral form in the orbit of `cls`: its discriminant has the same
/// valuation as d and lies in the same unit square class.
inline BinaryCubicForm integral_representative(const Integer& p, const Rational& d, const OrbitClassDescriptor& cls) {
  detail::require_classification_domain(p, d);
  if (!cls.integral) throw DomainError("class " + cls.label() + " has no integral representative");
  int v = valuation(d, p);
  BinaryCubicForm f;
  switch (cls.kind) {
    case ClassKind::Trivial:
      // Reducible, discriminant exactly d.
      return {-d / 4, 0, 1, 0};
    case ClassKind::UnramifiedNontrivial:
      f = ring_to_form(detail::descend_to_valuation(detail::unramified_maximal_order(static_cast<std::int64_t>(p)), p, v));
      break;
    case ClassKind::Ramified:
      f = ring_to_form(detail::descend_to_valuation(detail::eisenstein_order(p, cls.u.value_or(1)), p, v));
      break;
  }
  Rational ratio = f.discriminant() / d;
  if (valuation(ratio, p) != 0 || !is_square(ratio, Place::finite(p)))
    throw DomainError("class " + cls.label() + " does not live in discriminant class of " + to_string(d));
  return cls.index == 2 ? f.swapped() : f;
}

/// The soluble classes im(d_partial) inside the H^1 classes at a finite place
/// of good reduction.  The trivial class is always soluble.  At p = 2 only the
/// v(d) = 0 and v(d) odd cases are decided, and only when Q_2(sqrt d) is
/// unramified or v(d) is odd.
inline std::vector<OrbitClassDescriptor> soluble_classes(const LocalTwistDatum& datum, bool summand_flag) {
  const Integer& p = datum.place.prime();
  if (p == 3) throw DomainError("soluble_classes: residue characteristic 3 takes a ratio override");
  std::vector<OrbitClassDescriptor> classes = h1_classes(datum.place, datum.d);
  bool two_adic = p == 2;
  if (two_adic && datum.v_d % 2 == 0) {
    bool unramified_sqrt = datum.v_d == 0 && unit_residue(datum.u, 4) == 1;
    if (!unramified_sqrt && datum.v_d == 0) {
      // Q_2(sqrt d) ramified: H^1 = 0.
      if (classes.size() != 1) throw DomainError("unexpected classes for ramified Q_2(sqrt d)");
    } else if (datum.v_d > 0) {
      throw DomainError("soluble_classes: v(d) even and positive at p = 2 is not covered");
    }
  }
  for (OrbitClassDescriptor& c : classes) {
    if (c.kind == ClassKind::Trivial) {
      c.soluble = Solubility::Soluble;
    } else if (datum.v_d == 0) {
      c.soluble = c.is_unramified() ? Solubility::Soluble : Solubility::NotSoluble;
    } else if (c.kind == ClassKind::UnramifiedNontrivial) {
      // Only reached when d is a square and v(d) > 0 is even.
      c.soluble = summand_flag ? Solubility::NotSoluble : Solubility::Soluble;
    } else {
      c.soluble = Solubility::Undetermined;
    }
  }
  return classes;
}

}  // namespace selmer3
