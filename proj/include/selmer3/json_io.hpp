#pragma once

// JSON documents: configuration loading (schema 1) and report
// serialization.  Rationals travel as "n" or "n/d" strings; keys are sorted,
// so dumps are byte-stable.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "selmer3/cubicforms.hpp"
#include "selmer3/localclass.hpp"
#include "selmer3/prym.hpp"
#include "selmer3/selmerratio.hpp"
#include "selmer3/twistfamilies.hpp"

namespace selmer3::io {

using Json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "1.0.0";

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest(const Json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(origin + ": " + e.what());
  }
}

inline Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

// --- scalar readers ----------------------------------------------------------

inline Rational rational_of(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw UsageError(what + ": expected an integer or a \"n/d\" string");
}

inline Integer integer_of(const Json& j, const std::string& what) {
  Rational q = rational_of(j, what);
  if (!is_integer(q)) throw UsageError(what + ": expected an integer");
  return num(q);
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw UsageError(std::string("field '") + key + "' has the wrong type");
  }
}

inline void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw UsageError(what + ": expected an object");
}

inline void check_schema(const Json& j, const std::string& what) {
  if (!j.contains("schema")) throw UsageError(what + ": missing \"schema\" field");
  if (j.at("schema") != 1) throw UsageError(what + ": unsupported schema " + j.at("schema").dump());
}

inline Json rat(const Rational& q) { return to_string(q); }

// --- configuration readers ---------------------------------------------------

inline Place place_of(const Json& j) {
  std::string s = j.is_string() ? j.get<std::string>() : j.dump();
  if (s == "inf" || s == "real") return Place::real();
  if (s == "complex") return Place::complex();
  try {
    return Place::finite(parse_integer(s));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

inline ProfileKind profile_kind_of(const std::string& s) {
  if (s == "real") return ProfileKind::Real;
  if (s == "complex") return ProfileKind::Complex;
  if (s == "over3") return ProfileKind::Over3;
  if (s == "finite-good") return ProfileKind::FiniteGood;
  if (s == "finite-bad") return ProfileKind::FiniteBad;
  throw UsageError("unknown profile kind '" + s + "'");
}

inline LocalPlaceProfile profile_from_json(const Json& j) {
  require_object(j, "profile");
  LocalPlaceProfile p;
  if (j.contains("place")) {
    if (j.contains("kind")) throw UsageError("profile: give either \"place\" or \"kind\"");
    p = LocalPlaceProfile::concrete(place_of(j.at("place")));
  } else if (j.contains("kind")) {
    p = LocalPlaceProfile::symbolic(profile_kind_of(j.at("kind").get<std::string>()), get_or(j, "multiplicity", 1),
                                    get_or(j, "local_degree", 1));
  } else {
    throw UsageError("profile needs \"place\" or \"kind\"");
  }
  std::string red = get_or<std::string>(j, "reduction", p.reduction == ReductionType::Bad ? "bad" : "good");
  if (red != "good" && red != "bad") throw UsageError("reduction must be \"good\" or \"bad\"");
  p.reduction = red == "bad" ? ReductionType::Bad : ReductionType::Good;
  p.h1_vanishing = get_or(j, "h1_vanishing", false);
  p.cm_closed_form = get_or(j, "cm_closed_form", false);
  if (j.contains("override")) p.overrides.push_back({std::nullopt, std::nullopt, j.at("override").get<int>()});
  if (j.contains("overrides")) {
    for (const Json& o : j.at("overrides")) {
      OverrideRule r;
      if (o.contains("isogeny")) r.isogeny = o.at("isogeny").get<std::string>();
      if (o.contains("sextic_class")) r.sextic_class = to_string(rational_of(o.at("sextic_class"), "sextic_class"));
      if (!o.contains("exponent")) throw UsageError("override rule without \"exponent\"");
      r.exponent = o.at("exponent").get<int>();
      p.overrides.push_back(r);
    }
  }
  p.validate();
  return p;
}

inline IsogenyDescriptor isogeny_from_json(const Json& j, int m) {
  require_object(j, "isogeny");
  IsogenyDescriptor d;
  d.m = m;
  d.name = get_or<std::string>(j, "name", "phi");
  if (j.contains("kernel_character")) d.kernel_character = rational_of(j.at("kernel_character"), "kernel_character");
  d.global_summand_bit = get_or(j, "global_summand_bit", true);
  if (j.contains("dual_summand_bit")) d.dual_summand_bit = j.at("dual_summand_bit").get<bool>();
  if (j.contains("kappa")) {
    for (const Json& e : j.at("kappa")) {
      KappaEntry k;
      if (e.contains("place")) k.place = integer_of(e.at("place"), "kappa.place");
      if (e.contains("u_class")) k.u_class = e.at("u_class").get<std::int64_t>();
      if (e.contains("r")) k.r = e.at("r").get<int>();
      k.kappa = integer_of(e.value("kappa", Json(1)), "kappa");
      k.kappa_hat = integer_of(e.value("kappa_hat", Json(1)), "kappa_hat");
      d.kappa.push_back(k);
    }
  }
  return d;
}

inline SelmerConfig selmer_config_from_json(const Json& j) {
  require_object(j, "config");
  check_schema(j, "config");
  SelmerConfig c;
  c.name = get_or<std::string>(j, "name", "");
  c.m = get_or(j, "m", 1);
  if (!j.contains("isogenies")) throw UsageError("config: missing \"isogenies\"");
  for (const Json& i : j.at("isogenies")) c.isogenies.push_back(isogeny_from_json(i, c.m));
  if (j.contains("profiles"))
    for (const Json& p : j.at("profiles")) c.profiles.push_back(profile_from_json(p));
  c.validate();
  return c;
}

inline int sign_of(const std::string& s) {
  if (s == "+") return 1;
  if (s == "-") return -1;
  throw UsageError("family: sign must be \"+\" or \"-\"");
}

inline TwistFamily family_from_json(const Json& j) {
  require_object(j, "family");
  TwistFamily f;
  f.n = get_or(j, "n", 3);
  if (j.contains("conditions"))
    for (const Json& c : j.at("conditions")) {
      CongruenceCondition cc;
      cc.modulus = integer_of(c.at("modulus"), "modulus");
      for (const Json& r : c.at("residues")) cc.residues.push_back(integer_of(r, "residue"));
      f.conditions.push_back(cc);
    }
  f.squarefree = get_or(j, "squarefree", false);
  if (j.contains("signs")) {
    f.signs.clear();
    for (const Json& s : j.at("signs")) f.signs.push_back(sign_of(s.get<std::string>()));
  }
  if (j.contains("height_bound")) f.height_bound = integer_of(j.at("height_bound"), "height_bound");
  f.validate();
  return f;
}

inline PrymCurveConfig prym_config_from_json(const Json& j) {
  require_object(j, "prym preset");
  check_schema(j, "prym preset");
  PrymCurveConfig c;
  c.name = get_or<std::string>(j, "name", "prym");
  c.a = rational_of(j.at("a"), "a");
  if (j.contains("bad_primes")) {
    c.bad_primes.clear();
    for (const Json& p : j.at("bad_primes")) c.bad_primes.push_back(integer_of(p, "bad_primes"));
  }
  if (j.contains("three_adic")) {
    const Json& t = j.at("three_adic");
    c.three_adic.product_exponent = get_or(t, "product_exponent", 2);
    if (t.contains("range")) {
      c.three_adic.lo = t.at("range").at(0).get<int>();
      c.three_adic.hi = t.at("range").at(1).get<int>();
    }
    c.three_adic.unequal = get_or(t, "unequal", true);
    if (t.contains("ordering"))
      c.three_adic.ordering = std::make_pair(t.at("ordering").at("phi").get<int>(), t.at("ordering").at("psi").get<int>());
  }
  if (j.contains("family")) c.family = family_from_json(j.at("family"));
  c.sextic_class = to_string(rational_of(j.value("sextic_class", Json("2")), "sextic_class"));
  if (j.contains("curve")) {
    const Json& k = j.at("curve");
    c.genus = get_or(k, "genus", 3);
    c.dim_b = get_or(k, "dim_b", 2);
    c.plane_quartic = get_or(k, "plane_quartic", true);
    c.trivial_points = get_or(k, "trivial_points", 1);
    c.nontorsion_trivial_points = get_or(k, "nontorsion_trivial_points", 0);
  }
  c.validate();
  return c;
}

// --- report writers ----------------------------------------------------------

inline Json to_json(const BinaryCubicForm& f) { return Json::array({rat(f.a), rat(f.b), rat(f.c), rat(f.d)}); }

inline Json to_json(const SelmerRatioReport& r) {
  Json isos = Json::array();
  for (const auto& i : r.isogenies) {
    Json places = Json::array();
    for (const auto& p : i.places) {
      Json e{{"place", p.place}, {"exponent", p.exponent}, {"provenance", to_string(p.provenance)}};
      if (p.multiplicity != 1) e["multiplicity"] = p.multiplicity;
      places.push_back(e);
    }
    isos.push_back({{"isogeny", i.isogeny}, {"places", places}, {"global_k", i.global_k},
                    {"ratio", rat(pow3(i.global_k))}});
  }
  return {{"d", rat(r.d)}, {"isogenies", isos}, {"chain_k", r.chain_k}, {"chain_ratio", rat(pow3(r.chain_k))}};
}

inline Json to_json(const TwistFamily& f) {
  Json conds = Json::array();
  for (const auto& c : f.conditions) {
    Json rs = Json::array();
    for (const auto& r : c.residues) rs.push_back(r.str());
    conds.push_back({{"modulus", c.modulus.str()}, {"residues", rs}});
  }
  Json signs = Json::array();
  for (int s : f.signs) signs.push_back(s > 0 ? "+" : "-");
  return {{"n", f.n}, {"conditions", conds}, {"squarefree", f.squarefree}, {"signs", signs},
          {"height_bound", f.height_bound.str()}};
}

inline Json assignment_json(const ThreeAdicAssignment& a) { return Json::array({a[0], a[1], a[2], a[3]}); }

inline Json to_json(const PrymReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    const auto& e = row.exponents;
    Json places = Json::array();
    for (const auto& p : e.places)
      places.push_back({{"place", p.place}, {"phi", p.phi}, {"psi", p.psi}, {"provenance", to_string(p.provenance)}});
    auto [lo, hi] = e.unordered();
    rows.push_back({{"d", e.d.str()},
                    {"places", places},
                    {"three_adic", assignment_json(e.chosen)},
                    {"k_phi", e.k_phi},
                    {"k_psi", e.k_psi},
                    {"k_pi", e.k_pi()},
                    {"unordered_pair", Json::array({rat(pow3(lo)), rat(pow3(hi))})},
                    {"parity", row.parity % 2 ? "odd" : "even"},
                    {"average_term", rat(row.bound.average_term)},
                    {"subset_rank", row.bound.subset_rank},
                    {"subset_density", rat(row.bound.subset_density)}});
  }
  Json sols = Json::array();
  for (const auto& s : r.solutions) sols.push_back(assignment_json(s));
  Json agg = nullptr;
  if (r.aggregate) {
    const auto& a = *r.aggregate;
    agg = {{"average_rank_bound", rat(a.average_rank_bound)},
           {"rank_le_subset_rank", a.subset_rank},
           {"subset_density_lower_bound", rat(a.subset_density)},
           {"rank_le_2_density_lower_bound", rat(a.rank_le2_density)},
           {"point_bound", a.point_bound ? Json(*a.point_bound) : Json(nullptr)}};
    if (!a.point_bound_note.empty()) agg["point_bound_note"] = a.point_bound_note;
  }
  return {{"config", r.config_name},  {"height_bound", r.height_bound.str()},
          {"members", r.rows.size()}, {"rows", rows},
          {"aggregate", agg},         {"three_adic_solutions", sols},
          {"ordering", r.ordering_assumed ? "assumed" : "unordered"}};
}

}  // namespace selmer3::io
