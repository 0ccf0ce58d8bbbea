#pragma once

// Configuration of a zeta-linear 3-isogeny: kernel character, direct-summand
// bits and the orders of the extension classes kappa, kappa-hat.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selmer3/errors.hpp"
#include "selmer3/localfield.hpp"
#include "selmer3/rational.hpp"

namespace selmer3 {

/// One row of the kappa table.  Unset keys are wildcards; rows are matched in
/// the order given, first match wins.
struct KappaEntry {
  std::optional<Integer> place;
  std::optional<std::int64_t> u_class;
  std::optional<int> r;
  Integer kappa = 1;
  Integer kappa_hat = 1;
};

struct IsogenyDescriptor {
  std::string name = "phi";
  int m = 1;
  /// k0 with F(sqrt k0) = F(A[phi]); 1 when the kernel is generated by a
  /// rational point.
  Rational kernel_character = 1;
  /// "A[phi] is a direct summand of A[pi]".
  bool global_summand_bit = true;
  /// The same statement for the dual isogeny; decides |kappa-hat| at r = 0.
  std::optional<bool> dual_summand_bit;
  std::vector<KappaEntry> kappa;

  int n() const {
    int v = 1;
    for (int i = 0; i < m; ++i) v *= 3;
    return v;
  }

  void validate() const {
    if (m < 1) throw UsageError("isogeny '" + name + "': level m must be at least 1");
    if (kernel_character == 0) throw UsageError("isogeny '" + name + "': kernel character must be nonzero");
    for (const KappaEntry& e : kappa) {
      if (!exact_log3(e.kappa) || !exact_log3(e.kappa_hat))
        throw UsageError("isogeny '" + name + "': kappa orders must be powers of 3");
      if (e.r && *e.r == 0) {
        if ((e.kappa == 1) != global_summand_bit)
          throw UsageError("isogeny '" + name + "': |kappa| = 1 must agree with the global summand bit at r = 0");
      }
    }
  }
};

/// Orders (|kappa|, |kappa-hat|) for the unit u at the finite place p and
/// level r.  At r = 0 the summand bits decide when no row matches.
inline std::pair<Integer, Integer> kappa_orders(const IsogenyDescriptor& desc, const Integer& p, const Rational& u,
                                                int r) {
  std::int64_t uc = unit_power_class(u, p, 2 * static_cast<int>(ipow(Integer(3), static_cast<unsigned>(r))));
  for (const KappaEntry& e : desc.kappa) {
    if (e.place && *e.place != p) continue;
    if (e.u_class && *e.u_class != uc) continue;
    if (e.r && *e.r != r) continue;
    return {e.kappa, e.kappa_hat};
  }
  if (r == 0 && desc.dual_summand_bit)
    return {desc.global_summand_bit ? 1 : 3, *desc.dual_summand_bit ? 1 : 3};
  throw IncompleteConfig("descriptor incomplete: isogeny '" + desc.name + "' has no kappa entry for place " +
                         p.str() + ", u-class " + std::to_string(uc) + ", r = " + std::to_string(r));
}

/// Whether A_u[phi] is a direct summand of A_u[pi^{3^r}].  For r = 0 this is
/// the global bit whatever u is; otherwise it is read off the kappa table.
inline bool summand_flag_reduction(const IsogenyDescriptor& desc, const Integer& p, const Rational& u, int r) {
  if (r == 0) return desc.global_summand_bit;
  return kappa_orders(desc, p, u, r).first == 1;
}

}  // namespace selmer3
