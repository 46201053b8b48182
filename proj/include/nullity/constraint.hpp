#pragma once

// Constraint shapes: kinds, function products and resolved snapshots.

#include <string>
#include <vector>

#include "nullity/catalog.hpp"

namespace nullity {

enum class ConstraintKind { Existence, NonExistence, Consolidated };

inline std::string_view kind_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::Existence: return "existence";
    case ConstraintKind::NonExistence: return "non-existence";
    case ConstraintKind::Consolidated: return "consolidated";
  }
  return "?";
}

// Ordered tuple of column names; order is significant in rendered messages.
struct FunctionProduct {
  std::vector<std::string> components;

  size_t arity() const { return components.size(); }
  bool empty() const { return components.empty(); }
  friend bool operator==(const FunctionProduct&, const FunctionProduct&) =
      default;
};

// Components joined by the product bullet, e.g. "SSN•ITIN".
inline std::string render_product(const FunctionProduct& p) {
  std::string out;
  for (size_t i = 0; i < p.components.size(); ++i) {
    if (i) out += "•";
    out += p.components[i];
  }
  return out;
}

struct Constraint {
  std::string name;
  ConstraintKind kind = ConstraintKind::Existence;
  FunctionProduct left;   // empty exactly for Consolidated
  FunctionProduct right;  // never empty
  std::string base;       // common superset of all component domains

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// A constraint plus value copies of its component definitions, safe to hold
// across catalog mutations (edit sessions snapshot these).
struct ResolvedConstraint {
  Constraint def;
  std::vector<FunctionDef> left;
  std::vector<FunctionDef> right;
};

}  // namespace nullity
