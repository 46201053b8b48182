#pragma once

// Row-level enforcement: the two check methods and the pre-save pipeline.
// Violation messages are a public, byte-exact contract; the SQL code
// generator reuses the same builders.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nullity/constraint.hpp"

namespace nullity {

struct Violation {
  std::string constraint;  // empty for totality (NOT NULL) violations
  std::string message;
  std::vector<std::string> columns;
};

struct EnforcementOutcome {
  bool cancelled = false;
  std::optional<Violation> violation;  // present iff cancelled
};

// Per-constraint component reads; the complexity and short-circuit claims
// are asserted against these in the tests.
struct ReadCounts {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t total() const { return left + right; }
};

struct EvalCounters {
  std::size_t constraints_evaluated = 0;  // method invocations, gate included
  std::map<std::string, ReadCounts> reads;

  void reset() {
    constraints_evaluated = 0;
    reads.clear();
  }
  ReadCounts reads_for(const std::string& constraint) const {
    auto it = reads.find(constraint);
    return it == reads.end() ? ReadCounts{} : it->second;
  }
};

// Access to one row's pending state during evaluation. component() yields
// null for columns whose domain does not cover the row's set.
template <typename V>
concept RowAccess = requires(const V& v, const FunctionDef& f) {
  { v.component(f) } -> std::convertible_to<std::optional<Value>>;
  { v.fresh() } -> std::convertible_to<bool>;
  { v.modified(f) } -> std::convertible_to<bool>;
};

inline std::string existence_message(const std::string& constraint,
                                     const std::string& column) {
  return "Saving these values is rejected: according to existence constraint " +
         constraint + ", column " + column + " must have a not null value!";
}

inline std::string non_existence_message(const std::string& constraint,
                                         const std::string& column) {
  return "Saving these values is rejected: according to non-existence "
         "constraint " +
         constraint + ", column " + column + " must have a null value!";
}

inline std::string consolidated_message(const std::string& constraint,
                                        const std::string& second_column,
                                        const std::string& first_column) {
  return "Saving these values is rejected: according to non-existence "
         "constraint " +
         constraint + ", only one of the columns " + second_column + " and " +
         first_column + " may have a not null value!";
}

namespace detail {

template <RowAccess V>
bool row_untouched(const ResolvedConstraint& c, const V& row) {
  if (row.fresh()) return false;
  for (const auto& f : c.left)
    if (row.modified(f)) return false;
  for (const auto& g : c.right)
    if (row.modified(g)) return false;
  return true;
}

}  // namespace detail

// Existence: when any left component is non-null, every right component must
// be non-null. Skips entirely when an update touched no component; stops at
// the first null right component and names it.
template <RowAccess V>
std::optional<Violation> enforce_existence(const ResolvedConstraint& c,
                                           const V& row, EvalCounters& k) {
  ++k.constraints_evaluated;
  if (detail::row_untouched(c, row)) return std::nullopt;
  auto& reads = k.reads[c.def.name];
  bool left_all_null = true;
  for (const auto& f : c.left) {
    ++reads.left;
    if (row.component(f)) {
      left_all_null = false;
      break;
    }
  }
  if (left_all_null) return std::nullopt;
  for (const auto& g : c.right) {
    ++reads.right;
    if (!row.component(g))
      return Violation{c.def.name, existence_message(c.def.name, g.name),
                       {g.name}};
  }
  return std::nullopt;
}

// Non-existence, both flavors. Single (left non-empty): when any left
// component is non-null, every right component must be null; stops at the
// first non-null right component. Consolidated (left empty): at most one
// right component may be non-null; stops at the second non-null one.
template <RowAccess V>
std::optional<Violation> enforce_non_existence(const ResolvedConstraint& c,
                                               const V& row, EvalCounters& k) {
  ++k.constraints_evaluated;
  if (detail::row_untouched(c, row)) return std::nullopt;
  auto& reads = k.reads[c.def.name];
  if (c.left.empty()) {
    const FunctionDef* first = nullptr;
    for (const auto& g : c.right) {
      ++reads.right;
      if (row.component(g)) {
        if (!first) {
          first = &g;
        } else {
          return Violation{
              c.def.name, consolidated_message(c.def.name, g.name, first->name),
              {g.name, first->name}};
        }
      }
    }
    return std::nullopt;
  }
  bool left_all_null = true;
  for (const auto& f : c.left) {
    ++reads.left;
    if (row.component(f)) {
      left_all_null = false;
      break;
    }
  }
  if (left_all_null) return std::nullopt;
  for (const auto& g : c.right) {
    ++reads.right;
    if (row.component(g))
      return Violation{c.def.name, non_existence_message(c.def.name, g.name),
                       {g.name}};
  }
  return std::nullopt;
}

template <RowAccess V>
std::optional<Violation> enforce(const ResolvedConstraint& c, const V& row,
                                 EvalCounters& k) {
  return c.def.kind == ConstraintKind::Existence
             ? enforce_existence(c, row, k)
             : enforce_non_existence(c, row, k);
}

// Runs the hooks in order (callers pass non-existence hooks before existence
// hooks) and cancels the save at the first violation.
template <RowAccess V>
EnforcementOutcome before_update(std::span<const ResolvedConstraint> hooks,
                                 const V& row, EvalCounters& k) {
  EnforcementOutcome out;
  for (const auto& hook : hooks) {
    if (auto v = enforce(hook, row, k)) {
      out.cancelled = true;
      out.violation = std::move(v);
      return out;
    }
  }
  return out;
}

}  // namespace nullity
