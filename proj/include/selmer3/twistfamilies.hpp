#pragma once

// Twist classes d in Q^x / Q^{x 2n}, their canonical 2n-th-power-free integer
// representatives and heights, and families cut out by local conditions.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selmer3/errors.hpp"
#include "selmer3/rational.hpp"

namespace selmer3 {

struct TwistClass {
  Integer d0;  // 2n-th-power-free, keeps the sign of d
  int n = 3;

  Integer height() const { return abs(d0); }
  std::string str() const { return d0.str(); }
  friend bool operator==(const TwistClass&, const TwistClass&) = default;
};

/// The 2n-th-power-free integer d0 with d / d0 in Q^{x 2n}.
inline TwistClass reduce_class(const Rational& d, int n, std::uint64_t trial_bound = kDefaultTrialBound) {
  if (d == 0) throw DomainError("twist parameter must be nonzero");
  if (n < 1) throw DomainError("twist level n must be positive");
  const int e = 2 * n;
  Integer out = 1;
  auto absorb = [&](const Integer& x, int s) {
    for (const auto& [p, k] : factorize(x, trial_bound))
      out *= ipow(p, static_cast<unsigned>(floor_mod(std::int64_t{s} * k, std::int64_t{e})));
  };
  absorb(num(d), 1);
  absorb(den(d), -1);
  return {sign(d) < 0 ? Integer(-out) : out, n};
}

/// Height of a class over Q: |d0|.
inline Integer height(const TwistClass& c) { return c.height(); }

/// v_p(d0) in {0, 1} for every p.
inline bool is_squarefree_class(const TwistClass& c, std::uint64_t trial_bound = kDefaultTrialBound) {
  for (const auto& [p, k] : factorize(c.d0, trial_bound))
    if (k > 1) return false;
  return true;
}

/// d0 mod `modulus` lies in `residues`.
struct CongruenceCondition {
  Integer modulus;
  std::vector<Integer> residues;

  bool admits(const Integer& d0) const {
    Integer r = floor_mod(d0, modulus);
    return std::any_of(residues.begin(), residues.end(), [&](const Integer& x) { return floor_mod(x, modulus) == r; });
  }
};

struct TwistFamily {
  int n = 3;
  std::vector<CongruenceCondition> conditions;
  bool squarefree = false;
  std::vector<int> signs{+1, -1};
  Integer height_bound = 0;  // members have height < height_bound

  /// Lcm of the congruence moduli (1 when there are none).
  Integer modulus() const {
    Integer m = 1;
    for (const auto& c : conditions) m = boost::multiprecision::lcm(m, c.modulus);
    return m;
  }

  bool allows_sign(int s) const { return std::find(signs.begin(), signs.end(), s) != signs.end(); }

  /// Membership of a reduced class, ignoring the height bound.
  bool contains(const TwistClass& c) const {
    if (c.n != n) return false;
    if (!allows_sign(sign(c.d0))) return false;
    for (const auto& cond : conditions)
      if (!cond.admits(c.d0)) return false;
    return !squarefree || is_squarefree_class(c);
  }
  bool contains(const Rational& d) const { return contains(reduce_class(d, n)); }

  void validate() const {
    if (n < 1) throw UsageError("family: n must be positive");
    for (int s : signs)
      if (s != 1 && s != -1) throw UsageError("family: signs must be + or -");
    for (const auto& c : conditions)
      if (c.modulus < 1) throw UsageError("family: congruence modulus must be positive");
    if (height_bound < 0) throw UsageError("family: height bound must be nonnegative");
  }
};

inline constexpr std::uint64_t kMaxEnumerationHeight = 200'000'000;

/// Members of the family with height below the bound, ordered by height and
/// then sign (+ before -).  A sieve marks the heights that are not
/// (2n-th-power / square)-free.
inline std::vector<TwistClass> enumerate(const TwistFamily& family) {
  family.validate();
  if (family.height_bound > Integer(kMaxEnumerationHeight))
    throw DomainError("height bound exceeds the enumeration limit " + std::to_string(kMaxEnumerationHeight));
  const auto X = static_cast<std::uint64_t>(family.height_bound);
  std::vector<TwistClass> out;
  if (X <= 1) return out;
  const unsigned e = family.squarefree ? 2u : static_cast<unsigned>(2 * family.n);
  std::vector<bool> bad(X, false);
  {
    std::vector<bool> composite(X, false);
    for (std::uint64_t p = 2; p < X; ++p) {
      if (composite[p]) continue;
      for (std::uint64_t q = p * p; q < X; q += p) composite[q] = true;
      std::uint64_t pe = 1;
      bool fits = true;
      for (unsigned i = 0; i < e && fits; ++i) {
        if (pe > (X - 1) / p) fits = false;
        else pe *= p;
      }
      if (!fits) {
        if (p * p >= X) break;
        continue;
      }
      for (std::uint64_t q = pe; q < X; q += pe) bad[q] = true;
    }
  }
  for (std::uint64_t h = 1; h < X; ++h) {
    if (bad[h]) continue;
    for (int s : {+1, -1}) {
      if (!family.allows_sign(s)) continue;
      Integer d0 = s > 0 ? Integer(h) : Integer(-Integer(h));
      bool ok = true;
      for (const auto& cond : family.conditions)
        if (!cond.admits(d0)) {
          ok = false;
          break;
        }
      if (ok) out.push_back({d0, family.n});
    }
  }
  return out;
}

/// The full family O_v(2n) everywhere, both signs.
inline TwistFamily full_family(int n, const Integer& height_bound) { return {n, {}, false, {+1, -1}, height_bound}; }

/// Squarefree d with d = 2 or 11 mod 36, both signs.
inline TwistFamily sigma36_family(const Integer& height_bound) {
  return {3, {CongruenceCondition{36, {2, 11}}}, true, {+1, -1}, height_bound};
}

}  // namespace selmer3
