#pragma once

// Shipped configuration documents, identical to the files under presets/.

#include <string>
#include <string_view>
#include <vector>

#include "selmer3/errors.hpp"

namespace selmer3::presets {

struct Preset {
  std::string_view name;
  std::string_view json;
};

inline const std::vector<Preset>& all() {
  static const std::vector<Preset> table = {
      {"prym-a4", R"json({
  "schema": 1,
  "name": "prym-a4",
  "a": "4",
  "bad_primes": [2, 3],
  "kernel_characters": "trivial: the roots +-1, +-2 of (x^2 - 1)(x^2 - 4) are rational, so both kernels are Z/3",
  "sextic_class": "2",
  "three_adic": {
    "product_exponent": 2,
    "range": [0, 1],
    "unequal": true,
    "ordering": {"phi": 1, "psi": 0},
    "ordering_status": "assumed; the bounds use only the unordered pair"
  },
  "family": {
    "n": 3,
    "conditions": [{"modulus": 36, "residues": [2, 11]}],
    "squarefree": true,
    "signs": ["+", "-"],
    "height_bound": 10000
  },
  "curve": {
    "genus": 3,
    "dim_b": 2,
    "plane_quartic": true,
    "trivial_points": 1,
    "nontorsion_trivial_points": 0
  }
}
)json"},
      {"cm", R"json({
  "schema": 1,
  "name": "cm",
  "m": 1,
  "isogenies": [{"name": "pi", "kernel_character": "1"}],
  "profiles": [
    {"kind": "complex", "multiplicity": 1},
    {"kind": "over3", "local_degree": 2, "cm_closed_form": true},
    {"kind": "finite-good"}
  ],
  "cm": {"g": 1, "complex_places": 1, "degree": 2}
}
)json"},
      {"squarefree", R"json({
  "schema": 1,
  "name": "squarefree",
  "n": 3,
  "conditions": [],
  "squarefree": true,
  "signs": ["+"],
  "height_bound": 1000,
  "track": "chain",
  "config": {
    "schema": 1,
    "name": "squarefree-trivial",
    "m": 1,
    "isogenies": [{"name": "phi", "kernel_character": "1"}],
    "profiles": [{"place": "3", "reduction": "bad", "override": 0}]
  }
}
)json"},
      {"sigma-36-2-11", R"json({
  "schema": 1,
  "name": "sigma-36-2-11",
  "n": 3,
  "conditions": [{"modulus": 36, "residues": [2, 11]}],
  "squarefree": true,
  "signs": ["+", "-"],
  "height_bound": 10000,
  "track": "chain",
  "config_preset": "prym-a4"
}
)json"},
  };
  return table;
}

inline std::string_view get(std::string_view name) {
  for (const auto& p : all())
    if (p.name == name) return p.json;
  throw UsageError("unknown preset '" + std::string(name) + "'");
}

}  // namespace selmer3::presets
