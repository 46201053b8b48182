#pragma once

// The facade wiring catalog, store, registry and enforcement together.
// Mutations are serialized here (single writer); reads are safe whenever no
// mutation is in flight.

#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nullity/csv.hpp"
#include "nullity/dsl.hpp"
#include "nullity/registry.hpp"

namespace nullity {

struct SaveResult {
  bool ok = false;
  RowKey key = 0;
  std::optional<Violation> violation;
};

struct LoadResult {
  bool ok = false;
  size_t rows = 0;
  std::string error;  // with row/column coordinates where applicable
};

class Engine {
 public:
  explicit Engine(Clock clock = system_clock())
      : store_(catalog_, std::move(clock)), registry_(catalog_, store_) {}

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const Catalog& catalog() const { return catalog_; }
  const Store& store() const { return store_; }
  const ConstraintRegistry& registry() const { return registry_; }

  // --- schema ----------------------------------------------------------------

  void declare_set(const std::string& name) {
    std::lock_guard lock(mu_);
    catalog_.declare_set(name);
    store_.create_table(name);
  }

  void declare_inclusion(const std::string& sub, const std::string& super) {
    std::lock_guard lock(mu_);
    catalog_.declare_inclusion(sub, super);
  }

  void declare_function(const std::string& name, const std::string& domain,
                        Codomain codomain, bool total = false) {
    std::lock_guard lock(mu_);
    FunctionDef def{name, domain, std::move(codomain), total};
    store_.ensure_total_allowed(def);
    catalog_.declare_function(std::move(def));
  }

  void apply_schema(const std::vector<dsl::SchemaDecl>& decls) {
    for (const auto& decl : decls) {
      if (const auto* s = std::get_if<dsl::SetDecl>(&decl)) {
        declare_set(s->name);
      } else if (const auto* s = std::get_if<dsl::SubsetDecl>(&decl)) {
        declare_inclusion(s->sub, s->super);
      } else {
        const auto& f = std::get<dsl::FnDecl>(decl);
        declare_function(f.name, f.domain, f.codomain, f.total);
      }
    }
  }

  std::string render_schema() const {
    std::string out;
    for (const auto& s : catalog_.sets())
      out += dsl::render(dsl::SchemaDecl{dsl::SetDecl{s, {}}}) + "\n";
    for (const auto& [sub, super] : catalog_.inclusions())
      out += dsl::render(dsl::SchemaDecl{dsl::SubsetDecl{sub, super, {}}}) +
             "\n";
    for (const auto& f : catalog_.functions())
      out += dsl::render(dsl::SchemaDecl{
                 dsl::FnDecl{f.name, f.domain, f.codomain, f.total, {}}}) +
             "\n";
    return out;
  }

  void drop_function(const std::string& name, const std::string& domain) {
    std::lock_guard lock(mu_);
    if (!catalog_.function_on(name, domain))
      throw EngineError("unknown function " + name + " on " + domain);
    if (registry_.references_function(name))
      throw EngineError("function " + name +
                        " is referenced by a constraint");
    catalog_.drop_function(name, domain);
    store_.scrub_column(domain, name);
  }

  void drop_set(const std::string& name) {
    std::lock_guard lock(mu_);
    if (!catalog_.has_set(name)) throw EngineError("unknown set " + name);
    if (registry_.references_set(name))
      throw EngineError("set " + name + " is the base of a constraint");
    if (!store_.rows(name).empty())
      throw EngineError("set " + name + " still has rows");
    catalog_.drop_set(name);  // refuses functions/inclusions itself
  }

  // --- constraints -----------------------------------------------------------

  AddResult add_constraint(const std::string& name, ConstraintKind kind,
                           const std::vector<std::string>& left,
                           const std::vector<std::string>& right) {
    std::lock_guard lock(mu_);
    return registry_.add(name, kind, left, right);
  }

  AddResult add_constraint(const dsl::ConstraintAst& ast) {
    return add_constraint(ast.name, ast.op, ast.left, ast.right);
  }

  DeleteResult delete_constraint(const std::string& name, bool confirmed) {
    std::lock_guard lock(mu_);
    return registry_.remove(name, confirmed);
  }

  const std::vector<Constraint>& constraints() const {
    return registry_.list();
  }

  std::vector<RowKey> validate_instance(const std::string& name) const {
    const Constraint* c = registry_.find(name);
    if (!c) throw EngineError("unknown constraint " + name);
    return registry_.validate_instance(*c);
  }

  std::string render_constraints() const {
    std::string out;
    for (const auto& c : registry_.list()) {
      dsl::ConstraintAst ast;
      ast.name = c.name;
      ast.op = c.kind;
      ast.left = c.left.components;
      ast.right = c.right.components;
      out += dsl::render(ast) + "\n";
    }
    return out;
  }

  // --- rows ------------------------------------------------------------------

  // An edit session plus the enforcement hooks snapshotted when it opened.
  class Session {
   public:
    const std::string& table() const { return inner_.table(); }
    bool is_new() const { return inner_.is_new(); }
    std::optional<RowKey> key() const { return inner_.key(); }
    void set_value(const std::string& column, std::optional<Value> v) {
      inner_.set_value(column, std::move(v));
    }
    std::optional<Value> value(const std::string& column) const {
      return inner_.value(column);
    }
    std::set<std::string> dirty() const { return inner_.dirty(); }
    void abandon() { inner_.abandon(); }

   private:
    friend class Engine;
    Session(EditSession inner, std::vector<ResolvedConstraint> hooks)
        : inner_(std::move(inner)), hooks_(std::move(hooks)) {}
    EditSession inner_;
    std::vector<ResolvedConstraint> hooks_;
  };

  Session open_insert(const std::string& table) {
    std::lock_guard lock(mu_);
    return Session(store_.open_insert(table), registry_.hooks_for(table));
  }

  Session open_update(const std::string& table, RowKey key) {
    std::lock_guard lock(mu_);
    return Session(store_.open_update(table, key), registry_.hooks_for(table));
  }

  // Totality first, then the constraint hooks; nothing is written unless
  // every check passes. A rejected session stays open for correction.
  SaveResult save(Session& session) {
    std::lock_guard lock(mu_);
    if (!session.inner_.open()) throw EngineError("session is closed");
    for (const FunctionDef* fn :
         catalog_.applicable_functions(session.table())) {
      if (!fn->total) continue;
      if (!session.value(fn->name))
        return {false,
                0,
                Violation{"",
                          "column " + fn->name + " must have a not null value!",
                          {fn->name}}};
    }
    SessionRowView view{&catalog_, &session.inner_, session.dirty()};
    auto outcome = before_update(
        std::span<const ResolvedConstraint>(session.hooks_), view, counters_);
    if (outcome.cancelled) return {false, 0, std::move(outcome.violation)};
    RowKey key = store_.commit(session.inner_);
    return {true, key, std::nullopt};
  }

  void delete_row(const std::string& table, RowKey key) {
    std::lock_guard lock(mu_);
    store_.delete_row(table, key);
  }

  const std::map<RowKey, Row>& rows(const std::string& table) const {
    return store_.rows(table);
  }

  // --- CSV -------------------------------------------------------------------

  // Header: `_x` first, then the table's applicable columns in any order.
  std::string save_csv(const std::string& table) const {
    auto columns = catalog_.applicable_functions(table);
    std::vector<std::string> header{"_x"};
    for (const auto* fn : columns) header.push_back(fn->name);
    std::string out;
    csv::append_record(out, header);
    for (const auto& [key, row] : store_.rows(table)) {
      std::vector<std::string> fields{std::to_string(key)};
      for (const auto* fn : columns) {
        auto v = row.value(fn->name);
        fields.push_back(v ? render_value(*v) : "");
      }
      csv::append_record(out, fields);
    }
    return out;
  }

  void save_csv_file(const std::string& table, const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EngineError("cannot write " + path);
    out << save_csv(table);
  }

  LoadResult load_csv(const std::string& table, std::string_view text,
                      bool trusted) {
    if (!store_.has_table(table)) throw EngineError("unknown table " + table);
    auto parsed = csv::parse(text);
    if (!parsed.ok()) return {false, 0, *parsed.error};
    if (parsed.records.empty()) return {false, 0, "missing header row"};

    const auto& header = parsed.records.front();
    if (header.empty() || header[0] != "_x")
      return {false, 0, "header must start with _x"};
    std::vector<const FunctionDef*> columns;
    {
      std::set<std::string> seen;
      for (size_t i = 1; i < header.size(); ++i) {
        if (!seen.insert(header[i]).second)
          return {false, 0, "duplicate column " + header[i] + " in header"};
        const FunctionDef* fn = catalog_.applicable_function(table, header[i]);
        if (!fn)
          return {false, 0,
                  "header mismatch: unknown column " + header[i] + " for " +
                      table};
        columns.push_back(fn);
      }
      if (columns.size() != catalog_.applicable_functions(table).size())
        return {false, 0, "header mismatch: missing columns for " + table};
    }

    size_t loaded = 0;
    for (size_t r = 1; r < parsed.records.size(); ++r) {
      const auto& record = parsed.records[r];
      std::string where = "row " + std::to_string(r);
      if (record.size() != header.size())
        return {false, loaded,
                where + ": expected " + std::to_string(header.size()) +
                    " fields, got " + std::to_string(record.size())};
      auto key = parse_value(ValueKind::Integer, record[0]);
      if (!key || std::get<std::int64_t>(*key) <= 0)
        return {false, loaded,
                where + ", column _x: invalid key '" + record[0] + "'"};
      RowKey x = std::get<std::int64_t>(*key);

      std::vector<std::optional<Value>> values(columns.size());
      for (size_t c = 0; c < columns.size(); ++c) {
        const std::string& field = record[c + 1];
        if (field.empty()) continue;
        auto v = parse_value(columns[c]->stored_kind(), field);
        if (!v)
          return {false, loaded,
                  where + ", column " + columns[c]->name + ": cannot parse '" +
                      field + "' as " +
                      std::string(kind_name(columns[c]->stored_kind()))};
        values[c] = std::move(v);
      }

      try {
        if (trusted) {
          Row row{x, table, {}};
          for (size_t c = 0; c < columns.size(); ++c)
            if (values[c]) row.values.emplace(columns[c]->name, values[c]);
          std::lock_guard lock(mu_);
          store_.insert_committed(std::move(row));
        } else {
          Session session = open_insert(table);
          session.inner_.forced_key_ = x;
          for (size_t c = 0; c < columns.size(); ++c)
            if (values[c]) session.set_value(columns[c]->name, values[c]);
          SaveResult res = save(session);
          if (!res.ok)
            return {false, loaded, where + ": " + res.violation->message};
        }
      } catch (const EngineError& e) {
        return {false, loaded, where + ": " + e.what()};
      }
      ++loaded;
    }
    return {true, loaded, ""};
  }

  LoadResult load_csv_file(const std::string& table, const std::string& path,
                           bool trusted) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EngineError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_csv(table, buf.str(), trusted);
  }

  // --- instrumentation ---------------------------------------------------------

  const EvalCounters& counters() const { return counters_; }
  void reset_counters() { counters_.reset(); }
  const AdmissionCounters& admission_counters() const {
    return registry_.counters();
  }
  void reset_admission_counters() { registry_.counters().reset(); }

 private:
  // Evaluation view over a pending session: pending values overlay the
  // committed row; columns outside the row's sets read null.
  struct SessionRowView {
    const Catalog* catalog;
    const EditSession* session;
    std::set<std::string> dirty;

    std::optional<Value> component(const FunctionDef& f) const {
      if (!catalog->includes(session->table(), f.domain)) return std::nullopt;
      return session->value(f.name);
    }
    bool fresh() const { return session->is_new(); }
    bool modified(const FunctionDef& f) const { return dirty.count(f.name); }
  };

  Catalog catalog_;
  Store store_;
  ConstraintRegistry registry_;
  EvalCounters counters_;
  mutable std::mutex mu_;
};

}  // namespace nullity
