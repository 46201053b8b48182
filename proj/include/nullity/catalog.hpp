#pragma once

// The database scheme: object sets, the subset inclusion DAG, and function
// (column) definitions with totality flags.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nullity/value.hpp"

namespace nullity {

// A column is a function from its domain object set into either a value
// domain or another object set (referenced by surrogate key).
using Codomain = std::variant<ValueDomain, std::string>;

struct FunctionDef {
  std::string name;
  std::string domain;  // object set the function is defined on
  Codomain codomain = ValueDomain{};
  bool total = false;  // total = required non-null on every row of domain

  bool value_typed() const {
    return std::holds_alternative<ValueDomain>(codomain);
  }
  const ValueDomain* value_domain() const {
    return std::get_if<ValueDomain>(&codomain);
  }
  const std::string* codomain_set() const {
    return std::get_if<std::string>(&codomain);
  }
  // Kind a stored value must have; set-typed columns hold surrogate keys.
  ValueKind stored_kind() const {
    if (auto* vd = value_domain()) return vd->kind;
    return ValueKind::Integer;
  }
};

class Catalog {
 public:
  // --- object sets ---------------------------------------------------------

  void declare_set(const std::string& name) {
    if (name.empty()) throw EngineError("set name must not be empty");
    if (has_set(name)) throw EngineError("set " + name + " already declared");
    set_order_.push_back(name);
    up_[name];  // ensure adjacency entry
  }

  bool has_set(const std::string& name) const { return up_.count(name) > 0; }

  const std::vector<std::string>& sets() const { return set_order_; }

  // --- inclusion hierarchy -------------------------------------------------

  // Records sub as a subset of super. Reflexive edges are accepted and
  // ignored; an edge whose reverse is already implied is a cycle.
  void declare_inclusion(const std::string& sub, const std::string& super) {
    if (!has_set(sub)) throw EngineError("unknown set " + sub);
    if (!has_set(super)) throw EngineError("unknown set " + super);
    if (sub == super) return;
    if (includes(super, sub))
      throw EngineError("inclusion cycle: " + super + " is already a subset of " +
                        sub);
    if (up_.at(sub).insert(super).second) edge_order_.emplace_back(sub, super);
  }

  // Reflexive-transitive subset test: is sub a subset of super?
  bool includes(const std::string& sub, const std::string& super) const {
    if (sub == super) return has_set(sub);
    if (!has_set(sub) || !has_set(super)) return false;
    std::vector<const std::string*> stack{&sub};
    std::set<std::string> seen{sub};
    while (!stack.empty()) {
      const std::string& cur = *stack.back();
      stack.pop_back();
      for (const auto& up : up_.at(cur)) {
        if (up == super) return true;
        if (seen.insert(up).second) stack.push_back(&up);
      }
    }
    return false;
  }

  // All supersets of s, including s itself.
  std::set<std::string> upset(const std::string& s) const {
    std::set<std::string> out;
    if (!has_set(s)) return out;
    std::vector<std::string> stack{s};
    out.insert(s);
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const auto& up : up_.at(cur))
        if (out.insert(up).second) stack.push_back(up);
    }
    return out;
  }

  enum class SupersetStatus { Found, Ambiguous, None };

  struct SupersetResult {
    SupersetStatus status = SupersetStatus::None;
    std::string set;  // filled only for Found
    bool found() const { return status == SupersetStatus::Found; }
  };

  // Minimal common superset of the given sets under the inclusion closure.
  // Several incomparable minimal candidates are reported as Ambiguous; the
  // caller treats anything but Found as "no usable base".
  SupersetResult common_superset(const std::vector<std::string>& sets) const {
    if (sets.empty()) throw EngineError("common_superset of no sets");
    for (const auto& s : sets)
      if (!has_set(s)) throw EngineError("unknown set " + s);
    std::set<std::string> candidates = upset(sets.front());
    for (size_t i = 1; i < sets.size() && !candidates.empty(); ++i) {
      std::set<std::string> next;
      for (const auto& c : upset(sets[i]))
        if (candidates.count(c)) next.insert(c);
      candidates.swap(next);
    }
    if (candidates.empty()) return {SupersetStatus::None, ""};
    std::vector<std::string> minimal;
    for (const auto& c : candidates) {
      bool is_minimal = true;
      for (const auto& other : candidates)
        if (other != c && includes(other, c)) {
          is_minimal = false;
          break;
        }
      if (is_minimal) minimal.push_back(c);
    }
    if (minimal.size() == 1) return {SupersetStatus::Found, minimal.front()};
    return {SupersetStatus::Ambiguous, ""};
  }

  const std::vector<std::pair<std::string, std::string>>& inclusions() const {
    return edge_order_;
  }

  // --- functions -----------------------------------------------------------

  const FunctionDef& declare_function(FunctionDef def) {
    if (def.name.empty()) throw EngineError("function name must not be empty");
    if (!has_set(def.domain))
      throw EngineError("unknown domain set " + def.domain);
    if (auto* cs = def.codomain_set()) {
      if (!has_set(*cs)) throw EngineError("unknown codomain set " + *cs);
    } else if (auto problem = def.value_domain()->problem()) {
      throw EngineError("function " + def.name + ": " + *problem);
    }
    for (const auto& f : functions_) {
      if (f.name != def.name) continue;
      if (f.domain == def.domain)
        throw EngineError("function " + def.name + " already declared on " +
                          def.domain);
      // Same name on comparable sets would put two columns with one name
      // into a single row view.
      if (includes(f.domain, def.domain) || includes(def.domain, f.domain))
        throw EngineError("function name " + def.name + " collides with " +
                          def.name + " on " + f.domain);
    }
    functions_.push_back(std::move(def));
    return functions_.back();
  }

  // Unique lookup by bare name; nullptr when absent, error when ambiguous.
  const FunctionDef* find_function(const std::string& name) const {
    const FunctionDef* found = nullptr;
    for (const auto& f : functions_)
      if (f.name == name) {
        if (found)
          throw EngineError("function name " + name +
                            " is ambiguous across sets");
        found = &f;
      }
    return found;
  }

  const FunctionDef* function_on(const std::string& name,
                                 const std::string& domain) const {
    for (const auto& f : functions_)
      if (f.name == name && f.domain == domain) return &f;
    return nullptr;
  }

  // Columns visible on rows of `set`: every function whose domain is a
  // (reflexive) superset of it. Declaration order.
  std::vector<const FunctionDef*> applicable_functions(
      const std::string& set) const {
    std::vector<const FunctionDef*> out;
    for (const auto& f : functions_)
      if (includes(set, f.domain)) out.push_back(&f);
    return out;
  }

  const FunctionDef* applicable_function(const std::string& set,
                                         const std::string& name) const {
    for (const auto& f : functions_)
      if (f.name == name && includes(set, f.domain)) return &f;
    return nullptr;
  }

  std::vector<const FunctionDef*> functions_on(const std::string& set) const {
    std::vector<const FunctionDef*> out;
    for (const auto& f : functions_)
      if (f.domain == set) out.push_back(&f);
    return out;
  }

  const std::vector<FunctionDef>& functions() const { return functions_; }

  // --- deletion (refused while referenced) ---------------------------------

  void drop_function(const std::string& name, const std::string& domain) {
    auto it = std::find_if(functions_.begin(), functions_.end(),
                           [&](const FunctionDef& f) {
                             return f.name == name && f.domain == domain;
                           });
    if (it == functions_.end())
      throw EngineError("unknown function " + name + " on " + domain);
    functions_.erase(it);
  }

  // Callers must already have checked rows and constraints; the catalog
  // refuses only its own dangling references.
  void drop_set(const std::string& name) {
    if (!has_set(name)) throw EngineError("unknown set " + name);
    for (const auto& f : functions_) {
      if (f.domain == name)
        throw EngineError("set " + name + " still has function " + f.name);
      if (auto* cs = f.codomain_set(); cs && *cs == name)
        throw EngineError("set " + name + " is the codomain of " + f.name);
    }
    for (const auto& [sub, super] : edge_order_)
      if (sub == name || super == name)
        throw EngineError("set " + name + " participates in an inclusion");
    up_.erase(name);
    set_order_.erase(std::find(set_order_.begin(), set_order_.end(), name));
  }

 private:
  std::vector<std::string> set_order_;
  std::map<std::string, std::set<std::string>> up_;  // direct supersets
  std::vector<std::pair<std::string, std::string>> edge_order_;
  std::vector<FunctionDef> functions_;
};

}  // namespace nullity
