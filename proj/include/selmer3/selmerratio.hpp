#pragma once

// Local and global Selmer ratios c(phi_d) = 3^k, carried as base-3
// exponents, and the averages and bounds that follow from them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "selmer3/descriptor.hpp"
#include "selmer3/errors.hpp"
#include "selmer3/localclass.hpp"
#include "selmer3/localfield.hpp"
#include "selmer3/rational.hpp"
#include "selmer3/twistfamilies.hpp"

namespace selmer3 {

enum class ReductionType { Good, Bad };

/// Concrete places of Q, or place types of an unspecified number field.
enum class ProfileKind { Concrete, Real, Complex, Over3, FiniteGood, FiniteBad };

enum class Provenance { Table2, Archimedean, Good, Override, H1Vanishing, ClosedForm };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Table2: return "table2";
    case Provenance::Archimedean: return "archimedean";
    case Provenance::Good: return "good";
    case Provenance::Override: return "override";
    case Provenance::H1Vanishing: return "h1-vanishing";
    case Provenance::ClosedForm: return "closed-form";
  }
  return {};
}

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Concrete: return "concrete";
    case ProfileKind::Real: return "real";
    case ProfileKind::Complex: return "complex";
    case ProfileKind::Over3: return "over3";
    case ProfileKind::FiniteGood: return "finite-good";
    case ProfileKind::FiniteBad: return "finite-bad";
  }
  return {};
}

/// A configured exponent.  Unset keys match everything; the sextic class key
/// is the label of d in Q_3^x / Q_3^{x6} and is only meaningful at 3.
struct OverrideRule {
  std::optional<std::string> isogeny;
  std::optional<std::string> sextic_class;
  int exponent = 0;
};

struct LocalPlaceProfile {
  ProfileKind kind = ProfileKind::Concrete;
  std::optional<Place> place;
  int local_degree = 1;  // symbolic over-3 places
  int multiplicity = 1;  // symbolic profiles may stand for several places
  ReductionType reduction = ReductionType::Good;
  std::vector<OverrideRule> overrides;
  /// Exponent 0 whenever neither d nor -3d is a local square, whatever the
  /// reduction type: then H^1 of the kernel vanishes.
  bool h1_vanishing = false;
  /// Over-3 symbolic places of a field containing zeta_3 with CM by Z[zeta]:
  /// c_v(pi) = 3^{[F_v : Q_3] / 2}.
  bool cm_closed_form = false;

  static LocalPlaceProfile concrete(const Place& pl, ReductionType red = ReductionType::Good) {
    LocalPlaceProfile p;
    p.place = pl;
    p.reduction = red;
    return p;
  }
  static LocalPlaceProfile symbolic(ProfileKind k, int multiplicity = 1, int local_degree = 1) {
    if (k == ProfileKind::Concrete) throw UsageError("symbolic profile needs a symbolic kind");
    LocalPlaceProfile p;
    p.kind = k;
    p.multiplicity = multiplicity;
    p.local_degree = local_degree;
    p.reduction = k == ProfileKind::FiniteBad ? ReductionType::Bad : ReductionType::Good;
    return p;
  }

  bool is_symbolic() const { return kind != ProfileKind::Concrete; }

  bool zeta3() const {
    switch (kind) {
      case ProfileKind::Concrete: return zeta3_present(*place);
      case ProfileKind::Complex: return true;
      case ProfileKind::Real: return false;
      default: return cm_closed_form;
    }
  }

  bool residue_char_3() const {
    if (kind == ProfileKind::Over3) return true;
    return kind == ProfileKind::Concrete && place->is_finite() && place->prime() == 3;
  }

  std::string label() const {
    if (kind == ProfileKind::Concrete) return place->name();
    std::string s = to_string(kind);
    if (kind == ProfileKind::Over3) s += "(" + std::to_string(local_degree) + ")";
    if (multiplicity != 1) s += "x" + std::to_string(multiplicity);
    return s;
  }

  void validate() const {
    if (kind == ProfileKind::Concrete && !place) throw UsageError("concrete profile without a place");
    if (multiplicity < 1) throw UsageError("profile " + label() + ": multiplicity must be positive");
    if (local_degree < 1) throw UsageError("profile " + label() + ": local degree must be positive");
    for (const auto& o : overrides)
      if (o.sextic_class && !residue_char_3())
        throw UsageError("profile " + label() + ": sextic-class overrides are only meaningful above 3");
  }
};

struct LocalExponent {
  int exponent = 0;
  Provenance provenance = Provenance::Good;
  friend bool operator==(const LocalExponent&, const LocalExponent&) = default;
};

/// d twisted by the kernel character: the Table-2 rows are stated for a
/// kernel generated by a rational point.
inline Rational effective_twist(const IsogenyDescriptor& desc, const Rational& d) {
  return desc.kernel_character * desc.kernel_character * desc.kernel_character * d;
}

namespace detail {

inline std::optional<int> match_override(const LocalPlaceProfile& pr, const IsogenyDescriptor& desc,
                                         const Rational& d) {
  std::optional<std::string> cls;
  for (const auto& o : pr.overrides) {
    if (o.isogeny && *o.isogeny != desc.name) continue;
    if (o.sextic_class) {
      if (!cls) cls = sextic_class_3adic(d).label();
      if (*o.sextic_class != *cls) continue;
    }
    return o.exponent;
  }
  return std::nullopt;
}

[[noreturn]] inline void missing_override(const LocalPlaceProfile& pr, const IsogenyDescriptor& desc,
                                          const Rational& d) {
  std::string what = "missing override at place " + pr.label() + " for isogeny '" + desc.name + "'";
  if (pr.residue_char_3() && pr.kind == ProfileKind::Concrete) what += " (sextic class " + sextic_class_3adic(d).label() + ")";
  throw IncompleteConfig(what);
}

inline int log3_or_throw(const Integer& x) {
  auto l = exact_log3(x);
  if (!l) throw UsageError("kappa order " + x.str() + " is not a power of 3");
  return *l;
}

}  // namespace detail

/// log_3 c_v(phi_d) for a single place (multiplicity is not applied).
inline LocalExponent local_exponent(const LocalPlaceProfile& pr, const IsogenyDescriptor& desc, const Rational& d) {
  if (d == 0) throw DomainError("twist parameter must be nonzero");
  if (auto o = detail::match_override(pr, desc, d)) return {*o, Provenance::Override};
  const Rational deff = effective_twist(desc, d);
  switch (pr.kind) {
    case ProfileKind::Complex: return {-1, Provenance::Archimedean};
    case ProfileKind::Real: return {deff < 0 ? 0 : -1, Provenance::Archimedean};
    case ProfileKind::FiniteGood: return {0, Provenance::Good};
    case ProfileKind::FiniteBad: detail::missing_override(pr, desc, d);
    case ProfileKind::Over3:
      if (pr.cm_closed_form) {
        if (pr.local_degree % 2 != 0)
          throw DomainError("profile " + pr.label() + ": CM closed form needs an even local degree");
        return {pr.local_degree / 2, Provenance::ClosedForm};
      }
      detail::missing_override(pr, desc, d);
    case ProfileKind::Concrete: break;
  }
  const Place& pl = *pr.place;
  if (pl.kind() == Place::Kind::Complex) return {-1, Provenance::Archimedean};
  // The kernel is Z/3 over R exactly when the kernel character is trivial
  // on complex conjugation, i.e. k0 d > 0.
  if (pl.kind() == Place::Kind::Real) return {deff < 0 ? 0 : -1, Provenance::Archimedean};

  const Integer& p = pl.prime();
  if (pr.h1_vanishing && classify_squares(deff, pl).neither()) return {0, Provenance::H1Vanishing};
  if (pr.reduction == ReductionType::Bad || p == 3) detail::missing_override(pr, desc, d);

  auto datum = LocalTwistDatum::make(pl, deff, desc.m);
  if (!datum.r) return {0, Provenance::Good};
  const auto& sq = datum.squares;
  if (sq.neither()) return {0, Provenance::Table2};
  auto [kap, kaphat] = kappa_orders(desc, p, datum.u, *datum.r);
  int lk = detail::log3_or_throw(kap), lkh = detail::log3_or_throw(kaphat);
  if (zeta3_present(pl)) return {lk - lkh, Provenance::Table2};
  if (sq.d_is_square) return {lk - 1, Provenance::Table2};
  return {1 - lkh, Provenance::Table2};
}

/// A Selmer-ratio configuration: one or more isogenies (a chain when there
/// are several) sharing the same local profiles.
struct SelmerConfig {
  int schema = 1;
  std::string name;
  int m = 1;
  std::vector<IsogenyDescriptor> isogenies;
  std::vector<LocalPlaceProfile> profiles;

  int n() const { return static_cast<int>(ipow(Integer(3), static_cast<unsigned>(m))); }

  bool symbolic() const {
    return std::any_of(profiles.begin(), profiles.end(), [](const auto& p) { return p.is_symbolic(); });
  }

  const LocalPlaceProfile* profile_for(const Place& pl) const {
    for (const auto& p : profiles)
      if (!p.is_symbolic() && *p.place == pl) return &p;
    return nullptr;
  }

  std::size_t isogeny_index(const std::string& nm) const {
    for (std::size_t i = 0; i < isogenies.size(); ++i)
      if (isogenies[i].name == nm) return i;
    throw UsageError("config '" + name + "' has no isogeny named '" + nm + "'");
  }

  void validate() const {
    if (schema != 1) throw UsageError("unsupported config schema " + std::to_string(schema));
    if (isogenies.empty()) throw UsageError("config '" + name + "' lists no isogenies");
    std::set<std::string> names;
    for (const auto& d : isogenies) {
      d.validate();
      if (d.m != m) throw UsageError("isogeny '" + d.name + "' has level " + std::to_string(d.m) + ", config has " + std::to_string(m));
      if (!names.insert(d.name).second) throw UsageError("duplicate isogeny name '" + d.name + "'");
    }
    bool sym = false, conc = false;
    std::set<Place> seen;
    for (const auto& p : profiles) {
      p.validate();
      (p.is_symbolic() ? sym : conc) = true;
      if (!p.is_symbolic() && !seen.insert(*p.place).second) throw UsageError("duplicate profile for place " + p.label());
    }
    if (sym && conc) throw UsageError("config '" + name + "' mixes concrete and symbolic profiles");
  }
};

struct PlaceExponent {
  std::string place;
  int exponent = 0;
  int multiplicity = 1;
  Provenance provenance = Provenance::Good;
};

struct IsogenyRatio {
  std::string isogeny;
  std::vector<PlaceExponent> places;
  int global_k = 0;
};

struct SelmerRatioReport {
  Rational d;  // reduced representative for concrete configs
  std::vector<IsogenyRatio> isogenies;
  int chain_k = 0;  // exponent of the composite of the chain

  const IsogenyRatio& at(const std::string& nm) const {
    for (const auto& r : isogenies)
      if (r.isogeny == nm) return r;
    throw UsageError("report has no isogeny named '" + nm + "'");
  }
};

/// The places of Q where some exponent can be nonzero for this d: every
/// configured place, 3, infinity, and the primes dividing d or a kernel
/// character.
inline std::vector<LocalPlaceProfile> relevant_profiles(const SelmerConfig& cfg, const Rational& d) {
  std::set<Place> places;
  for (const auto& p : cfg.profiles) places.insert(*p.place);
  places.insert(Place::finite(3));
  places.insert(Place::real());
  auto add_primes = [&](const Rational& x) {
    for (const Integer& part : {num(x), den(x)})
      if (abs(part) > 1)
        for (const auto& [q, e] : factorize(part)) places.insert(Place::finite(q));
  };
  add_primes(d);
  for (const auto& iso : cfg.isogenies) add_primes(iso.kernel_character);
  std::vector<LocalPlaceProfile> out;
  for (const Place& pl : places) {
    const LocalPlaceProfile* p = cfg.profile_for(pl);
    out.push_back(p ? *p : LocalPlaceProfile::concrete(pl));
  }
  return out;
}

/// c(phi_d) = prod_v c_v(phi_d), for every isogeny of the config.
inline SelmerRatioReport global_report(const SelmerConfig& cfg, const Rational& d) {
  if (d == 0) throw DomainError("twist parameter must be nonzero");
  SelmerRatioReport rep;
  std::vector<LocalPlaceProfile> profs;
  if (cfg.symbolic()) {
    rep.d = d;
    profs = cfg.profiles;
  } else {
    rep.d = Rational(reduce_class(d, cfg.n()).d0);
    profs = relevant_profiles(cfg, rep.d);
  }
  for (const auto& iso : cfg.isogenies) {
    IsogenyRatio r{iso.name, {}, 0};
    for (const auto& pr : profs) {
      LocalExponent le = local_exponent(pr, iso, rep.d);
      r.places.push_back({pr.label(), le.exponent, pr.multiplicity, le.provenance});
      r.global_k += le.exponent * pr.multiplicity;
    }
    rep.chain_k += r.global_k;
    rep.isogenies.push_back(std::move(r));
  }
  return rep;
}

/// #S for the configuration: infinity, 3 and the bad places.
inline int num_bad_places(const SelmerConfig& cfg) {
  if (cfg.symbolic()) {
    int s = 0;
    for (const auto& p : cfg.profiles)
      if (p.kind != ProfileKind::FiniteGood) s += p.multiplicity;
    return s;
  }
  std::set<Place> s{Place::finite(3), Place::real()};
  for (const auto& p : cfg.profiles)
    if (p.reduction == ReductionType::Bad) s.insert(*p.place);
  return static_cast<int>(s.size());
}

// ---------------------------------------------------------------------------
// Closed-form consequences of the exponent.

inline Rational average_selmer_prediction(int k) { return 1 + pow3(k); }

struct RankDensityBounds {
  Rational avg_dim_bound;      // average dim Sel over T_k is at most this
  Rational exact_dim_density;  // dim Sel = |k| for at least this proportion of T_k
  friend bool operator==(const RankDensityBounds&, const RankDensityBounds&) = default;
};

inline RankDensityBounds rank_density_bounds(int k) {
  int a = k < 0 ? -k : k;
  return {Rational(a) + pow3(-a), 1 - Rational(1) / (2 * pow3(a))};
}

inline Rational explicit_rank_bound(int dim_a, int num_bad) {
  if (dim_a < 1) throw DomainError("explicit_rank_bound: dim A must be positive");
  if (num_bad < 1) throw DomainError("explicit_rank_bound: #S >= 1 since S contains the places above 3 and infinity");
  return Rational(dim_a) * (Rational(num_bad) + pow3(-num_bad));
}

/// #Sel(phi) / #Sel(phi-hat) * #B[phi-hat](F) / #A[phi](F) == 3^k, with the
/// Selmer groups given by F_3-dimension and the torsion by order.
inline bool greenberg_wiles_check(std::pair<int, int> selmer_dims, std::pair<Integer, Integer> torsion, int k) {
  auto [a, b] = torsion;
  if (a < 1 || b < 1) throw DomainError("torsion orders must be positive");
  Rational lhs = pow3(selmer_dims.first - selmer_dims.second) * Rational(b, a);
  return lhs == pow3(k);
}

/// c_l(alpha) c_l(alpha-hat) = l: the dual exponent at l = 3 is 1 - k.
inline int duality_exponent(const Integer& ell, int k_ell) {
  if (ell == 2 || !is_prime(ell)) throw DomainError("duality_exponent: ell must be an odd prime");
  if (ell != 3) throw DomainError("duality_exponent: exponents are base 3, so ell must be 3");
  return 1 - k_ell;
}

/// Parity of dim Sel_3 predicted by the exponent of c(pi_d): 1 for odd.
inline int parity_prediction(int global_k_of_pi) { return static_cast<int>(floor_mod(std::int64_t{global_k_of_pi}, 2)); }

struct ChainRankBound {
  int dim_bound = 0;     // sum of log_3 #Sel
  Integer size_sum = 0;  // sum of #Sel
};

inline ChainRankBound chain_rank_bound(const std::vector<Integer>& selmer_sizes) {
  ChainRankBound b;
  for (const auto& s : selmer_sizes) {
    auto l = exact_log3(s);
    if (!l) throw DomainError("chain_rank_bound: " + s.str() + " is not a power of 3");
    b.dim_bound += *l;
    b.size_sum += s;
  }
  return b;
}

struct CmCheck {
  int c3_exponent = 0;        // log_3 c([3])
  int pi_exponent = 0;        // log_3 c(pi_d), from c(pi_d)^{2g} = c([3])
  Rational average_selmer;    // 1 + 3^{pi_exponent}
  Rational zeta_rank_bound;   // (average #Sel - 1) / 2
  Rational rank_zero_density; // dim Sel = 0 for at least this proportion
};

/// F contains Q(zeta_{3^m}), so all N archimedean places are complex and
/// [F : Q] = 2N; g = 3^{m-1} = dim A.
inline CmCheck cm_ratio_check(int g, int complex_places, int degree, int real_places = 0) {
  if (real_places != 0) throw DomainError("cm_ratio_check: a field containing zeta_3 has no real places");
  if (g < 1 || !exact_log3(Integer(g))) throw DomainError("cm_ratio_check: g must be a power of 3");
  if (complex_places < 1 || degree != 2 * complex_places)
    throw DomainError("cm_ratio_check: degree must be twice the number of complex places");
  CmCheck c;
  int archimedean = -2 * g * complex_places;  // c_v([3]) = #A[3](C)^{-1}
  int above3 = g * degree;                    // prod_{v|3} c_v([3]) = 3^{g [F:Q]}
  c.c3_exponent = archimedean + above3;
  if (c.c3_exponent % (2 * g) != 0) throw DomainError("cm_ratio_check: c([3]) has no 2g-th root in 3^Z");
  c.pi_exponent = c.c3_exponent / (2 * g);
  c.average_selmer = average_selmer_prediction(c.pi_exponent);
  c.zeta_rank_bound = (c.average_selmer - 1) / 2;
  c.rank_zero_density = rank_density_bounds(c.pi_exponent).exact_dim_density;
  return c;
}

// ---------------------------------------------------------------------------
// Local distributions over a family and their products.

/// Which exponent to track: one isogeny, or the whole chain.
struct ExponentSelector {
  std::optional<std::string> isogeny;  // nullopt: sum over the chain

  int operator()(const SelmerConfig& cfg, const LocalPlaceProfile& pr, const Rational& d) const {
    int k = 0;
    for (const auto& iso : cfg.isogenies)
      if (!isogeny || iso.name == *isogeny) k += local_exponent(pr, iso, d).exponent * pr.multiplicity;
    return k;
  }
};

/// Exact distribution of an integer exponent: value -> probability.
using ExponentLaw = std::map<int, Rational>;

inline ExponentLaw convolve(const ExponentLaw& a, const ExponentLaw& b) {
  ExponentLaw out;
  for (const auto& [x, p] : a)
    for (const auto& [y, q] : b) out[x + y] += p * q;
  return out;
}

inline Rational expectation_of_power(const ExponentLaw& law) {
  Rational s = 0;
  for (const auto& [k, w] : law) s += w * pow3(k);
  return s;
}

inline constexpr std::uint64_t kMaxBundleResidues = 5'000'000;

struct LocalLaws {
  ExponentLaw archimedean;
  ExponentLaw bundle;                       // joint law over the congruence and configured primes
  std::vector<Integer> bundle_primes;
  std::vector<std::pair<Integer, ExponentLaw>> good;  // nontrivial laws at other primes below the bound
  bool truncated = false;                   // some mass was dropped or the good-prime product was cut off
};

namespace detail {

inline std::vector<Integer> unit_residues(const Integer& p) {
  std::vector<Integer> out;
  Integer m = p == 2 ? 8 : (p == 3 ? 9 : p);
  for (Integer u = 1; u < m; ++u)
    if (u % p != 0) out.push_back(u);
  return out;
}

}  // namespace detail

/// Local laws of the tracked exponent on the family.  Primes dividing the
/// congruence modulus or carrying a profile are treated jointly by
/// enumerating residues; other primes contribute independent stratified laws.
inline LocalLaws local_laws(const TwistFamily& fam, const SelmerConfig& cfg, const ExponentSelector& sel,
                            std::uint64_t prime_bound = 200) {
  fam.validate();
  if (cfg.symbolic()) throw DomainError("family laws need a concrete configuration");
  if (fam.signs.empty()) throw DomainError("family has an empty archimedean coset");
  LocalLaws L;
  const int n = fam.n;
  if (n != cfg.n()) throw UsageError("family level n does not match the configuration");
  const int vmax = fam.squarefree ? 1 : 2 * n - 1;

  // Archimedean: the signs in the coset are equally weighted.
  LocalPlaceProfile real = cfg.profile_for(Place::real()) ? *cfg.profile_for(Place::real())
                                                          : LocalPlaceProfile::concrete(Place::real());
  for (int s : fam.signs) L.archimedean[sel(cfg, real, Rational(s))] += Rational(1, static_cast<int>(fam.signs.size()));

  // Bundle primes.
  std::set<Integer> bundle{3};
  for (const auto& [q, e] : factorize(fam.modulus() == 0 ? Integer(1) : fam.modulus())) bundle.insert(q);
  for (const auto& p : cfg.profiles)
    if (p.place->is_finite()) bundle.insert(p.place->prime());
  for (const auto& iso : cfg.isogenies)
    for (const Integer& x : {num(iso.kernel_character), den(iso.kernel_character)})
      if (abs(x) > 1)
        for (const auto& [q, e] : factorize(x)) bundle.insert(q);
  L.bundle_primes.assign(bundle.begin(), bundle.end());

  Integer N = 1;
  std::vector<std::pair<Integer, int>> prec;
  Integer M = fam.modulus();
  for (const Integer& p : L.bundle_primes) {
    int vm = abs(M) > 1 && M % p == 0 ? valuation(M, p) : 0;
    int K = std::max(vm, vmax) + 3;
    prec.emplace_back(p, K);
    N *= ipow(p, static_cast<unsigned>(K));
  }
  if (N > Integer(kMaxBundleResidues))
    throw DomainError("family laws: residue bundle of size " + N.str() + " exceeds the budget");

  std::vector<LocalPlaceProfile> profs;
  for (const auto& [p, K] : prec) {
    const LocalPlaceProfile* pr = cfg.profile_for(Place::finite(p));
    profs.push_back(pr ? *pr : LocalPlaceProfile::concrete(Place::finite(p)));
  }

  std::map<int, Integer> counts;
  Integer total = 0;
  const auto Nn = static_cast<std::uint64_t>(N);
  for (std::uint64_t x = 1; x < Nn; ++x) {
    Integer X(x);
    bool ok = true;
    for (const auto& c : fam.conditions)
      if (!c.admits(X)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    for (const auto& [p, K] : prec) {
      int v = valuation(X, p);
      if (v > vmax) {
        // Classes with v >= 2n are excluded from the representative window.
        if (!fam.squarefree) L.truncated = true;
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    int k = 0;
    for (const auto& pr : profs) k += sel(cfg, pr, Rational(X));
    ++counts[k];
    ++total;
  }
  if (total == 0) throw DomainError("family has no admissible residues at its congruence primes");
  for (const auto& [k, c] : counts) L.bundle[k] = Rational(c, total);

  // Remaining primes: only non-squarefree families can see a nonzero exponent.
  if (!fam.squarefree) {
    for (std::uint64_t q = 2; q < prime_bound; ++q) {
      Integer p(q);
      if (!is_prime(p) || bundle.count(p)) continue;
      LocalPlaceProfile pr = LocalPlaceProfile::concrete(Place::finite(p));
      ExponentLaw law;
      Rational wsum = 0;
      std::vector<Rational> w(2 * n);
      for (int j = 0; j < 2 * n; ++j) wsum += (w[j] = Rational(Integer(1), ipow(p, static_cast<unsigned>(j))));
      auto units = detail::unit_residues(p);
      for (int j = 0; j < 2 * n; ++j)
        for (const auto& u : units)
          law[sel(cfg, pr, Rational(u * ipow(p, static_cast<unsigned>(j))))] +=
              w[j] / wsum / static_cast<int>(units.size());
      if (!(law.size() == 1 && law.begin()->first == 0)) L.good.emplace_back(p, law);
    }
    // The product over primes beyond the bound is not evaluated.
    L.truncated = true;
  }
  return L;
}

struct EulerProductResult {
  std::optional<Rational> average;  // predicted average #Sel
  Rational archimedean_factor = 0;
  Rational bundle_factor = 0;
  std::vector<std::pair<Integer, Rational>> good_factors;
  bool truncated = false;
  bool diverges = false;  // configuration incomplete on a stratum of positive measure
  std::string reason;
};

/// 1 + E[c(phi_d)] over the family, as a product of local averages.
inline EulerProductResult euler_product_average(const TwistFamily& fam, const SelmerConfig& cfg,
                                                const ExponentSelector& sel, std::uint64_t prime_bound = 200) {
  EulerProductResult r;
  LocalLaws L;
  try {
    L = local_laws(fam, cfg, sel, prime_bound);
  } catch (const IncompleteConfig& e) {
    r.diverges = true;
    r.reason = e.what();
    return r;
  }
  r.archimedean_factor = expectation_of_power(L.archimedean);
  r.bundle_factor = expectation_of_power(L.bundle);
  Rational prod = r.archimedean_factor * r.bundle_factor;
  for (const auto& [p, law] : L.good) {
    Rational f = expectation_of_power(law);
    r.good_factors.emplace_back(p, f);
    prod *= f;
  }
  r.truncated = L.truncated && !r.good_factors.empty();
  r.average = 1 + prod;
  return r;
}

struct TkCell {
  std::vector<TwistClass> members;
  std::optional<Rational> density;  // exact, from local measures
  Rational empirical = 0;           // member share in the enumeration
};

struct TkPartition {
  std::map<int, TkCell> cells;
  std::size_t total = 0;
  bool densities_exact = false;
  int num_bad = 0;  // #S
};

/// Partition of the enumerated family by the tracked exponent.
inline TkPartition tk_partition(const TwistFamily& fam, const SelmerConfig& cfg, const ExponentSelector& sel) {
  TkPartition out;
  out.num_bad = num_bad_places(cfg);
  for (const TwistClass& c : enumerate(fam)) {
    SelmerRatioReport rep = global_report(cfg, Rational(c.d0));
    int k = 0;
    for (const auto& r : rep.isogenies)
      if (!sel.isogeny || r.isogeny == *sel.isogeny) k += r.global_k;
    out.cells[k].members.push_back(c);
    ++out.total;
  }
  for (auto& [k, cell] : out.cells) cell.empirical = Rational(cell.members.size(), out.total);
  if (fam.squarefree) {
    LocalLaws L = local_laws(fam, cfg, sel);
    ExponentLaw law = convolve(L.archimedean, L.bundle);
    for (const auto& [k, w] : law) out.cells[k].density = w;
    out.densities_exact = true;
  }
  return out;
}

}  // namespace selmer3
