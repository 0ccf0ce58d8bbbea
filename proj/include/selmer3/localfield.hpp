#pragma once

// Exact local arithmetic over Q_p and R: valuations, unit parts, square
// classes, cube roots of unity and the sextic classes of Q_3.

#include <compare>
#include <cstdint>
#include <string>

#include "selmer3/errors.hpp"
#include "selmer3/rational.hpp"

namespace selmer3 {

/// A place of Q: a finite prime, the real place, or (for symbolic profiles
/// over larger fields) a complex place.
class Place {
 public:
  enum class Kind { Finite, Real, Complex };

  static Place finite(const Integer& p) {
    if (!is_prime(p)) throw DomainError("place Q_" + p.str() + ": " + p.str() + " is not prime");
    return Place(Kind::Finite, p);
  }
  static Place real() { return Place(Kind::Real, 0); }
  static Place complex() { return Place(Kind::Complex, 0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_archimedean() const { return kind_ != Kind::Finite; }

  /// Residue characteristic; only meaningful for finite places.
  const Integer& prime() const {
    if (!is_finite()) throw DomainError("archimedean place has no residue characteristic");
    return p_;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::Finite: return p_.str();
      case Kind::Real: return "inf";
      case Kind::Complex: return "complex";
    }
    return {};
  }

  // Finite places sort by prime, archimedean places after them.
  friend bool operator==(const Place& a, const Place& b) { return a.kind_ == b.kind_ && a.p_ == b.p_; }
  friend bool operator<(const Place& a, const Place& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    return a.p_ < b.p_;
  }

 private:
  Place(Kind k, Integer p) : kind_(k), p_(std::move(p)) {}
  Kind kind_;
  Integer p_;
};

inline int valuation(const Integer& x, const Integer& p) {
  if (x == 0) throw DomainError("valuation of 0 is undefined");
  Integer t = abs(x);
  int v = 0;
  while (t % p == 0) {
    t /= p;
    ++v;
  }
  return v;
}

/// v_p(x) for nonzero rational x.
inline int valuation(const Rational& x, const Integer& p) {
  if (x == 0) throw DomainError("valuation of 0 is undefined");
  int vn = valuation(num(x), p);
  int vd = valuation(den(x), p);
  return vn - vd;
}

/// u with x = p^{v_p(x)} u and v_p(u) = 0.
inline Rational unit_part(const Rational& x, const Integer& p) {
  int v = valuation(x, p);
  Integer pv = ipow(p, static_cast<unsigned>(v < 0 ? -v : v));
  return v >= 0 ? Rational(x / pv) : Rational(x * pv);
}

/// A nonzero rational together with its decomposition at a finite prime.
struct ValuedRational {
  Rational value;
  Integer p;
  int val = 0;
  Rational unit;

  static ValuedRational at(const Rational& x, const Integer& p) {
    if (x == 0) throw DomainError("ValuedRational requires a nonzero value");
    return {x, p, valuation(x, p), unit_part(x, p)};
  }
};

/// The residue of a p-adic unit n/d modulo m (gcd(d, m) = 1).
inline Integer unit_residue(const Rational& u, const Integer& m) {
  // Extended Euclid, so m need not be prime.
  Integer a = floor_mod(den(u), m), b = m, x0 = 1, x1 = 0;
  while (b != 0) {
    Integer q = a / b;
    Integer t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) throw DomainError("denominator not invertible modulo " + m.str());
  return floor_mod(num(u) * floor_mod(x0, m), m);
}

/// Whether nonzero x is a square in the completion at `place`.
inline bool is_square(const Rational& x, const Place& place) {
  if (x == 0) throw DomainError("is_square expects a nonzero value");
  switch (place.kind()) {
    case Place::Kind::Complex: return true;
    case Place::Kind::Real: return x > 0;
    case Place::Kind::Finite: break;
  }
  const Integer& p = place.prime();
  int v = valuation(x, p);
  if (v % 2 != 0) return false;
  Rational u = unit_part(x, p);
  if (p == 2) return unit_residue(u, 8) == 1;
  // n/d is a square iff n*d is, and Euler's criterion decides the residue.
  return legendre(num(u) * den(u), p) == 1;
}

/// Square classes of d and -3d at a place; these pick the column of the dimension table.
struct SquareClassification {
  bool d_is_square = false;
  bool minus3d_is_square = false;

  bool neither() const { return !d_is_square && !minus3d_is_square; }
  friend bool operator==(const SquareClassification&, const SquareClassification&) = default;
};

inline SquareClassification classify_squares(const Rational& d, const Place& place) {
  return {is_square(d, place), is_square(Rational(-3) * d, place)};
}

/// Whether Q_v contains a primitive cube root of unity.
inline bool zeta3_present(const Place& place) {
  switch (place.kind()) {
    case Place::Kind::Complex: return true;
    case Place::Kind::Real: return false;
    case Place::Kind::Finite: return floor_mod(place.prime(), Integer(3)) == 1;
  }
  return false;
}

/// A class in Q_3^x / Q_3^{x6}.  Units are classified modulo 1 + 9Z_3, so the
/// transversal is {+-1, +-2, +-4} x {3^j : 0 <= j < 6}.
struct SexticClass3 {
  int unit_rep = 1;  // one of 1, 2, 4, -1, -2, -4
  int val_mod6 = 0;  // 0..5

  Rational representative() const { return Rational(unit_rep) * pow3(val_mod6); }
  std::string label() const { return to_string(representative()); }
  friend auto operator<=>(const SexticClass3&, const SexticClass3&) = default;
};

inline SexticClass3 sextic_class_3adic(const Rational& d) {
  int v = valuation(d, Integer(3));
  Integer r = unit_residue(unit_part(d, Integer(3)), Integer(9));
  int rep = 0;
  switch (static_cast<int>(r)) {
    case 1: rep = 1; break;
    case 2: rep = 2; break;
    case 4: rep = 4; break;
    case 8: rep = -1; break;
    case 7: rep = -2; break;
    case 5: rep = -4; break;
    default: throw DomainError("unit part not a 3-adic unit");
  }
  return {rep, static_cast<int>(floor_mod(std::int64_t{v}, 6))};
}

/// Canonical representative in [1, p) of the class of the unit u in
/// F_p^x / F_p^{x e} (odd p); for p = 2 the class of u in Z_2^x / Z_2^{x2},
/// i.e. u mod 8.  This is the u-class keying extension-class tables: since
/// 1 + pZ_p is uniquely e-divisible for p not dividing e, the residue decides.
inline std::int64_t unit_power_class(const Rational& u, const Integer& p, int e) {
  if (valuation(u, p) != 0) throw DomainError("unit_power_class expects a p-adic unit");
  if (p == 2) return static_cast<std::int64_t>(unit_residue(u, 8));
  Integer pm1 = p - 1;
  Integer g = boost::multiprecision::gcd(Integer(e), pm1);
  Integer res = unit_residue(u, p);
  Integer exp = pm1 / g;
  Integer uinv = powmod(res, p - 2, p);
  for (Integer r = 1; r < p; ++r) {
    if (powmod(r * uinv, exp, p) == 1) return static_cast<std::int64_t>(r);
  }
  throw DomainError("no class representative found");
}

}  // namespace selmer3
