#pragma once

// The constraint registry: admission (well-formedness, uniqueness, domain
// compatibility, instance check, in that order and failing fast), confirmed
// deletion, and the hook lists the save pipeline runs.

#include <optional>
#include <string>
#include <vector>

#include "nullity/enforcement.hpp"
#include "nullity/store.hpp"

namespace nullity {

// Admission check executions, for asserting order and the O(n+m) bound.
struct AdmissionCounters {
  std::size_t name_checks = 0;
  std::size_t arity_checks = 0;
  std::size_t compat_checks = 0;
  std::size_t totality_checks = 0;  // one per component examined
  std::size_t instance_rows = 0;    // one per row scanned

  void reset() { *this = AdmissionCounters{}; }
};

struct AddResult {
  bool admitted = false;
  std::string message;  // rejection text, verbatim
  const Constraint* constraint = nullptr;
};

enum class DeleteStatus { Deleted, Unconfirmed, UnknownName };

struct DeleteResult {
  DeleteStatus status = DeleteStatus::Deleted;
  std::string message;  // set for UnknownName
};

// Evaluation view over a committed row; admission and validate_instance use
// the same component semantics as saves, with the modified-gate forced open.
struct CommittedRowView {
  const Catalog* catalog;
  const Row* row;

  std::optional<Value> component(const FunctionDef& f) const {
    if (!catalog->includes(row->table, f.domain)) return std::nullopt;
    return row->value(f.name);
  }
  bool fresh() const { return true; }
  bool modified(const FunctionDef&) const { return true; }
};

class ConstraintRegistry {
 public:
  ConstraintRegistry(const Catalog& catalog, const Store& store)
      : catalog_(&catalog), store_(&store) {}

  // Admission. Expects resolvable component names and a kind-consistent
  // shape (those are usage errors); everything else is checked here and
  // rejected with the exact message.
  AddResult add(const std::string& name, ConstraintKind kind,
                const std::vector<std::string>& left,
                const std::vector<std::string>& right) {
    ResolvedConstraint rc;
    rc.def.name = name;
    rc.def.kind = kind;
    rc.def.left.components = left;
    rc.def.right.components = right;
    for (const auto& n : left) rc.left.push_back(resolve_component(n));
    for (const auto& n : right) rc.right.push_back(resolve_component(n));
    check_shape(rc.def);

    ++counters_.name_checks;
    if (find(name))
      return {false, "Request rejected: " + name +
                         " is the name of another constraint! Please choose a "
                         "unique constraint name!"};

    if (kind == ConstraintKind::Existence) {
      ++counters_.arity_checks;
      if (rc.left.empty())
        return {false, "Request rejected: please add to C the constraint " +
                           render_product(rc.def.right) + " total instead!"};
    }

    ++counters_.compat_checks;
    std::vector<std::string> domains;
    for (const auto& f : rc.left) domains.push_back(f.domain);
    for (const auto& g : rc.right) domains.push_back(g.domain);
    auto base = catalog_->common_superset(domains);
    if (!base.found())
      return {false, "Request rejected: " + render_product(rc.def.left) +
                         " and " + render_product(rc.def.right) +
                         " do not have compatible domains!"};
    rc.def.base = base.set;

    for (const auto& f : rc.left) {
      ++counters_.totality_checks;
      if (f.total)
        return {false,
                "Request rejected: " + f.name + " is totally defined!"};
    }
    for (const auto& g : rc.right) {
      ++counters_.totality_checks;
      if (g.total)
        return {false,
                "Request rejected: " + g.name + " is totally defined!"};
    }

    for (const Row* row : store_->view(rc.def.base)) {
      ++counters_.instance_rows;
      if (violates(rc, *row))
        return {false, "Request rejected: " + name + " is violated for " +
                           std::to_string(row->key) + "!"};
    }

    constraints_.push_back(rc.def);
    return {true, "", &constraints_.back()};
  }

  // Deletion needs confirmation but no re-validation; removing a constraint
  // cannot break the remaining set.
  DeleteResult remove(const std::string& name, bool confirmed) {
    auto it = std::find_if(constraints_.begin(), constraints_.end(),
                           [&](const Constraint& c) { return c.name == name; });
    if (it == constraints_.end())
      return {DeleteStatus::UnknownName,
              "Request rejected: " + name + " is not a known constraint name!"};
    if (!confirmed) return {DeleteStatus::Unconfirmed, ""};
    constraints_.erase(it);
    return {DeleteStatus::Deleted, ""};
  }

  const std::vector<Constraint>& list() const { return constraints_; }

  const Constraint* find(const std::string& name) const {
    for (const auto& c : constraints_)
      if (c.name == name) return &c;
    return nullptr;
  }

  ResolvedConstraint resolve(const Constraint& c) const {
    ResolvedConstraint rc;
    rc.def = c;
    for (const auto& n : c.left.components)
      rc.left.push_back(resolve_component(n));
    for (const auto& n : c.right.components)
      rc.right.push_back(resolve_component(n));
    return rc;
  }

  // All violating rows of the constraint's base view, in key order.
  std::vector<RowKey> validate_instance(const Constraint& c) const {
    ResolvedConstraint rc = resolve(c);
    std::vector<RowKey> out;
    for (const Row* row : store_->view(c.base))
      if (violates(rc, *row)) out.push_back(row->key);
    return out;
  }

  // Hooks for saves of rows in `set`: every constraint whose base covers the
  // set, non-existence group before existence group, declaration order
  // within each.
  std::vector<ResolvedConstraint> hooks_for(const std::string& set) const {
    std::vector<ResolvedConstraint> out;
    for (const auto& c : constraints_)
      if (c.kind != ConstraintKind::Existence &&
          catalog_->includes(set, c.base))
        out.push_back(resolve(c));
    for (const auto& c : constraints_)
      if (c.kind == ConstraintKind::Existence &&
          catalog_->includes(set, c.base))
        out.push_back(resolve(c));
    return out;
  }

  bool references_function(const std::string& fn_name) const {
    for (const auto& c : constraints_) {
      for (const auto& n : c.left.components)
        if (n == fn_name) return true;
      for (const auto& n : c.right.components)
        if (n == fn_name) return true;
    }
    return false;
  }

  bool references_set(const std::string& set) const {
    for (const auto& c : constraints_)
      if (c.base == set) return true;
    return false;
  }

  AdmissionCounters& counters() { return counters_; }
  const AdmissionCounters& counters() const { return counters_; }

 private:
  FunctionDef resolve_component(const std::string& name) const {
    const FunctionDef* fn = catalog_->find_function(name);
    if (!fn) throw EngineError("unknown function " + name);
    return *fn;
  }

  static void check_shape(const Constraint& c) {
    if (c.right.components.empty())
      throw EngineError("constraint " + c.name +
                        ": right-side product must not be empty");
    switch (c.kind) {
      case ConstraintKind::Existence:
        break;  // empty left is rejected by admission with advice
      case ConstraintKind::NonExistence:
        if (c.left.components.empty())
          throw EngineError("constraint " + c.name +
                            ": non-existence needs a left side; declare it "
                            "consolidated instead");
        break;
      case ConstraintKind::Consolidated:
        if (!c.left.components.empty())
          throw EngineError("constraint " + c.name +
                            ": consolidated form has no left side");
        if (c.right.components.size() < 2)
          throw EngineError("constraint " + c.name +
                            ": consolidated form needs at least two columns");
        break;
    }
  }

  bool violates(const ResolvedConstraint& rc, const Row& row) const {
    EvalCounters scratch;
    return enforce(rc, CommittedRowView{catalog_, &row}, scratch).has_value();
  }

  const Catalog* catalog_;
  const Store* store_;
  std::vector<Constraint> constraints_;
  AdmissionCounters counters_;
};

}  // namespace nullity
