#pragma once

// Exact integer/rational scalars and the small amount of elementary number
// theory everything else is built on (primality, factorization, residues).

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selmer3/errors.hpp"

namespace selmer3 {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

inline int sign(const Integer& a) { return a.sign(); }
inline int sign(const Rational& q) { return q.sign(); }

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }
inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Non-negative remainder of a modulo m (m > 0).
inline Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline Integer ipow(const Integer& base, unsigned e) {
  return boost::multiprecision::pow(base, e);
}

/// 3^k as an exact rational, k of either sign.
inline Rational pow3(int k) {
  Integer p = ipow(Integer(3), static_cast<unsigned>(k < 0 ? -k : k));
  return k < 0 ? Rational(Integer(1), p) : Rational(p);
}

inline Rational rpow(const Rational& base, int k) {
  Rational r = 1;
  Rational b = k < 0 ? Rational(1) / base : base;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) r *= b;
  return r;
}

/// Canonical text form: "n" for integers, "n/d" otherwise (d > 0, reduced).
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

inline std::string to_string(const Integer& a) { return a.str(); }

inline Integer parse_integer(std::string_view s) {
  std::string t(s);
  std::size_t i = 0;
  bool neg = false;
  if (i < t.size() && (t[i] == '+' || t[i] == '-')) {
    neg = t[i] == '-';
    ++i;
  }
  if (i == t.size()) throw UsageError("malformed integer '" + t + "'");
  for (std::size_t j = i; j < t.size(); ++j)
    if (t[j] < '0' || t[j] > '9') throw UsageError("malformed integer '" + t + "'");
  Integer v(t.substr(i));
  return neg ? Integer(-v) : v;
}

/// Parses "a", "a/b" (b != 0).
inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer n = parse_integer(s.substr(0, slash));
  Integer d = parse_integer(s.substr(slash + 1));
  if (d == 0) throw UsageError("zero denominator in '" + std::string(s) + "'");
  return Rational(n, d);
}

// --- primality and factorization -------------------------------------------

namespace detail {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, b, m);
    b = mulmod64(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (n <= std::numeric_limits<std::uint64_t>::max()) return is_prime_u64(static_cast<std::uint64_t>(n));
  // 25 rounds; beyond 64 bits this is probabilistic, which is only reachable
  // through user-supplied rationals with enormous prime factors.
  return boost::multiprecision::miller_rabin_test(n, 25);
}

inline constexpr std::uint64_t kDefaultTrialBound = 1'000'000;

using Factorization = std::vector<std::pair<Integer, int>>;

/// Factors |n| (n != 0) by trial division up to `trial_bound`, then a
/// primality test on the cofactor.  Throws DomainError when a composite
/// cofactor with no factor below the bound remains.
inline Factorization factorize(Integer n, std::uint64_t trial_bound = kDefaultTrialBound) {
  if (n == 0) throw DomainError("cannot factor 0");
  n = abs(n);
  Factorization out;
  auto strip = [&](const Integer& p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5, step = 2; p <= trial_bound; p += step, step = 6 - step) {
    if (Integer(p) * p > n) break;
    strip(Integer(p));
  }
  if (n > 1) {
    if (!is_prime(n))
      throw DomainError("cofactor " + n.str() + " has no prime factor below the trial bound");
    out.emplace_back(n, 1);
  }
  return out;
}

inline Integer powmod(Integer b, Integer e, const Integer& m) {
  return boost::multiprecision::powm(floor_mod(b, m), e, m);
}

/// Legendre symbol (a/p) for odd prime p; 0 when p | a.
inline int legendre(const Integer& a, const Integer& p) {
  Integer r = floor_mod(a, p);
  if (r == 0) return 0;
  Integer t = powmod(r, (p - 1) / 2, p);
  return t == 1 ? 1 : -1;
}

/// log_3 of a positive power of 3, or nullopt when x is not one.
inline std::optional<int> exact_log3(const Integer& x) {
  if (x <= 0) return std::nullopt;
  Integer t = x;
  int k = 0;
  while (t % 3 == 0) {
    t /= 3;
    ++k;
  }
  if (t != 1) return std::nullopt;
  return k;
}

}  // namespace selmer3
