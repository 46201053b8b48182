#pragma once

// Emits a SQL trigger script per base table that enforces the registered
// constraints in an external RDBMS. One BEFORE INSERT and one BEFORE UPDATE
// trigger; each raises the exact engine message. Verified against SQLite
// (RAISE(ABORT, ...)); the abort statement is the only dialect-specific
// piece and lives in raise_statement().

#include <string>
#include <vector>

#include "nullity/registry.hpp"

namespace nullity {

struct TriggerScript {
  std::string table;
  std::string sql;
};

namespace codegen_detail {

inline std::string quote_ident(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

inline std::string quote_literal(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += "'";
  return out;
}

inline std::string raise_statement(const std::string& message,
                                   const std::string& condition) {
  return "  SELECT RAISE(ABORT, " + quote_literal(message) + ") WHERE " +
         condition + ";\n";
}

inline std::string new_col(const FunctionDef& f) {
  return "NEW." + quote_ident(f.name);
}

inline std::string left_any_non_null(const ResolvedConstraint& c) {
  std::string out = "(";
  for (size_t i = 0; i < c.left.size(); ++i) {
    if (i) out += " OR ";
    out += new_col(c.left[i]) + " IS NOT NULL";
  }
  out += ")";
  return out;
}

// Statement order carries the short-circuit column naming: the first
// statement whose condition holds raises, so statement j fires exactly when
// the engine would have named column j.
inline std::string body(const std::vector<ResolvedConstraint>& hooks) {
  std::string out;
  for (const auto& c : hooks) {
    out += "  -- " + c.def.name + "\n";
    switch (c.def.kind) {
      case ConstraintKind::Existence:
        for (const auto& g : c.right)
          out += raise_statement(existence_message(c.def.name, g.name),
                                 left_any_non_null(c) + " AND " + new_col(g) +
                                     " IS NULL");
        break;
      case ConstraintKind::NonExistence:
        for (const auto& g : c.right)
          out += raise_statement(non_existence_message(c.def.name, g.name),
                                 left_any_non_null(c) + " AND " + new_col(g) +
                                     " IS NOT NULL");
        break;
      case ConstraintKind::Consolidated:
        for (size_t i = 1; i < c.right.size(); ++i)
          for (size_t j = 0; j < i; ++j)
            out += raise_statement(
                consolidated_message(c.def.name, c.right[i].name,
                                     c.right[j].name),
                new_col(c.right[j]) + " IS NOT NULL AND " +
                    new_col(c.right[i]) + " IS NOT NULL");
        break;
    }
  }
  return out;
}

inline std::string column_sql_type(const FunctionDef& f) {
  if (!f.value_typed()) return "INTEGER";
  switch (f.value_domain()->kind) {
    case ValueKind::Integer: return "INTEGER";
    case ValueKind::Decimal: return "REAL";
    case ValueKind::Text: return "TEXT";
    case ValueKind::Date: return "TEXT";
    case ValueKind::Boolean: return "INTEGER";
  }
  return "TEXT";
}

}  // namespace codegen_detail

// Builds the trigger script for `table`. Hooks are emitted in pipeline
// order (non-existence before existence, declaration order within each), so
// identical registries produce byte-identical scripts.
inline TriggerScript generate_triggers(const Catalog& catalog,
                                       const ConstraintRegistry& registry,
                                       const std::string& table) {
  using namespace codegen_detail;
  if (!catalog.has_set(table)) throw EngineError("unknown set " + table);

  std::vector<ResolvedConstraint> hooks;
  for (const auto& c : registry.list())
    if (c.kind != ConstraintKind::Existence && c.base == table)
      hooks.push_back(registry.resolve(c));
  for (const auto& c : registry.list())
    if (c.kind == ConstraintKind::Existence && c.base == table)
      hooks.push_back(registry.resolve(c));
  if (hooks.empty())
    throw EngineError("no constraints registered for table " + table);

  TriggerScript script;
  script.table = table;
  std::string& sql = script.sql;
  sql += "-- Nullity trigger script for table " + table + "\n";
  sql += "-- Constraints:\n";
  for (const auto& c : hooks)
    sql += "--   " + c.def.name + " (" + std::string(kind_name(c.def.kind)) +
           ")\n";
  sql += "--\n";
  sql += "-- Table scaffold (uncomment if the table does not exist yet):\n";
  sql += "-- CREATE TABLE " + quote_ident(table) + " (\n";
  sql += "--   \"_x\" INTEGER PRIMARY KEY";
  for (const auto* f : catalog.applicable_functions(table))
    sql += ",\n--   " + quote_ident(f->name) + " " + column_sql_type(*f);
  sql += "\n-- );\n\n";

  std::string trigger_body = body(hooks);
  sql += "CREATE TRIGGER " + quote_ident(table + "_nullity_before_insert") +
         "\nBEFORE INSERT ON " + quote_ident(table) +
         "\nFOR EACH ROW\nBEGIN\n" + trigger_body + "END;\n\n";
  sql += "CREATE TRIGGER " + quote_ident(table + "_nullity_before_update") +
         "\nBEFORE UPDATE ON " + quote_ident(table) +
         "\nFOR EACH ROW\nBEGIN\n" + trigger_body + "END;\n";
  return script;
}

}  // namespace nullity
