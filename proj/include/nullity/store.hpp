#pragma once

// In-memory tables with surrogate keys, nullable typed values and edit
// sessions that track which columns actually changed. One table per object
// set; a row lives in its most specific set and is visible in every
// superset's view.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nullity/catalog.hpp"

namespace nullity {

using RowKey = std::int64_t;

struct Row {
  RowKey key = 0;
  std::string table;  // most specific set
  std::map<std::string, std::optional<Value>> values;

  // Missing entries and explicit nullopt both read as null.
  std::optional<Value> value(const std::string& column) const {
    auto it = values.find(column);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
};

class Store;

// A pending insert or update of one row. Dirtiness is a value diff against
// the committed row, not a record of which columns were touched.
class EditSession {
 public:
  EditSession(EditSession&& other) noexcept { steal(std::move(other)); }
  EditSession& operator=(EditSession&& other) noexcept {
    if (this != &other) {
      release();
      steal(std::move(other));
    }
    return *this;
  }
  EditSession(const EditSession&) = delete;
  EditSession& operator=(const EditSession&) = delete;
  ~EditSession() { release(); }

  const std::string& table() const { return table_; }
  bool is_new() const { return is_new_; }
  bool open() const { return open_; }
  std::optional<RowKey> key() const { return key_; }

  void set_value(const std::string& column, std::optional<Value> v);
  std::optional<Value> value(const std::string& column) const;
  std::set<std::string> dirty() const;

  void abandon() { release(); }

 private:
  friend class Store;
  friend class Engine;  // forced keys for CSV loads
  EditSession(Store* store, std::string table, std::optional<RowKey> key,
              bool is_new)
      : store_(store), table_(std::move(table)), key_(key), is_new_(is_new) {}

  void steal(EditSession&& other) {
    store_ = other.store_;
    table_ = std::move(other.table_);
    key_ = other.key_;
    is_new_ = other.is_new_;
    forced_key_ = other.forced_key_;
    pending_ = std::move(other.pending_);
    open_ = other.open_;
    other.open_ = false;
  }
  void release();

  Store* store_ = nullptr;
  std::string table_;
  std::optional<RowKey> key_;
  bool is_new_ = true;
  std::optional<RowKey> forced_key_;  // CSV loads preserve file keys
  std::map<std::string, std::optional<Value>> pending_;
  bool open_ = true;
};

class Store {
 public:
  Store(const Catalog& catalog, Clock clock)
      : catalog_(&catalog), clock_(std::move(clock)) {}

  Date today() const { return clock_(); }

  // --- tables ---------------------------------------------------------------

  void create_table(const std::string& set) { tables_[set]; }

  bool has_table(const std::string& set) const { return tables_.count(set); }

  const std::map<RowKey, Row>& rows(const std::string& set) const {
    return table(set);
  }

  // Every row visible in `base`: rows of base's table and of every subset's
  // table, in global key order.
  std::vector<const Row*> view(const std::string& base) const {
    std::vector<const Row*> out;
    for (const auto& [set, rows] : tables_) {
      if (!catalog_->includes(set, base)) continue;
      for (const auto& [key, row] : rows) out.push_back(&row);
    }
    std::sort(out.begin(), out.end(),
              [](const Row* a, const Row* b) { return a->key < b->key; });
    return out;
  }

  // Declaring a total function is refused once rows exist that would have to
  // carry it; existing rows would all read null.
  void ensure_total_allowed(const FunctionDef& def) const {
    if (!def.total) return;
    if (!view(def.domain).empty())
      throw EngineError("cannot declare total function " + def.name + " on " +
                        def.domain + ": existing rows have no value for it");
  }

  void scrub_column(const std::string& domain, const std::string& column) {
    for (auto& [set, rows] : tables_) {
      if (!catalog_->includes(set, domain)) continue;
      for (auto& [key, row] : rows) row.values.erase(column);
    }
  }

  // --- sessions ---------------------------------------------------------------

  EditSession open_insert(const std::string& set) {
    table(set);
    return EditSession(this, set, std::nullopt, true);
  }

  EditSession open_update(const std::string& set, RowKey key) {
    const auto& rows = table(set);
    if (!rows.count(key))
      throw EngineError("unknown key " + std::to_string(key) + " in " + set);
    if (!locks_.insert({set, key}).second)
      throw EngineError("row " + std::to_string(key) + " of " + set +
                        " is already being edited");
    return EditSession(this, set, key, false);
  }

  // Applies the session atomically. Callers run all checks first; a session
  // that fails them stays open for correction.
  RowKey commit(EditSession& s) {
    if (!s.open_) throw EngineError("session is closed");
    if (s.is_new_) {
      RowKey key = s.forced_key_ ? *s.forced_key_ : next_key_++;
      auto& rows = table(s.table_);
      if (rows.count(key))
        throw EngineError("key " + std::to_string(key) + " already present in " +
                          s.table_);
      if (key >= next_key_) next_key_ = key + 1;
      Row row{key, s.table_, {}};
      for (auto& [col, v] : s.pending_)
        if (v) row.values.emplace(col, std::move(v));
      rows.emplace(key, std::move(row));
      s.key_ = key;
      s.open_ = false;
      return key;
    }
    Row& row = table(s.table_).at(*s.key_);
    for (auto& [col, v] : s.pending_) {
      if (v)
        row.values[col] = std::move(v);
      else
        row.values.erase(col);
    }
    locks_.erase({s.table_, *s.key_});
    s.open_ = false;
    return *s.key_;
  }

  // Deletion never consults any constraint.
  void delete_row(const std::string& set, RowKey key) {
    auto& rows = table(set);
    auto it = rows.find(key);
    if (it == rows.end())
      throw EngineError("unknown key " + std::to_string(key) + " in " + set);
    if (locks_.count({set, key}))
      throw EngineError("row " + std::to_string(key) + " of " + set +
                        " is being edited");
    rows.erase(it);
  }

  // Trusted bulk insert: parsed values, file keys kept, no checks.
  void insert_committed(Row row) {
    auto& rows = table(row.table);
    if (rows.count(row.key))
      throw EngineError("key " + std::to_string(row.key) +
                        " already present in " + row.table);
    if (row.key >= next_key_) next_key_ = row.key + 1;
    rows.emplace(row.key, std::move(row));
  }

  RowKey peek_next_key() const { return next_key_; }

  const Catalog& catalog() const { return *catalog_; }

 private:
  friend class EditSession;

  std::map<RowKey, Row>& table(const std::string& set) {
    auto it = tables_.find(set);
    if (it == tables_.end()) throw EngineError("unknown table " + set);
    return it->second;
  }
  const std::map<RowKey, Row>& table(const std::string& set) const {
    auto it = tables_.find(set);
    if (it == tables_.end()) throw EngineError("unknown table " + set);
    return it->second;
  }

  const Catalog* catalog_;
  Clock clock_;
  std::map<std::string, std::map<RowKey, Row>> tables_;
  RowKey next_key_ = 1;
  std::set<std::pair<std::string, RowKey>> locks_;
};

inline void EditSession::release() {
  if (open_ && !is_new_ && store_ && key_)
    store_->locks_.erase({table_, *key_});
  open_ = false;
}

inline void EditSession::set_value(const std::string& column,
                                   std::optional<Value> v) {
  if (!open_) throw EngineError("session is closed");
  const FunctionDef* fn =
      store_->catalog().applicable_function(table_, column);
  if (!fn)
    throw EngineError("unknown column " + column + " on " + table_);
  if (v) {
    if (fn->value_typed()) {
      if (auto reason = fn->value_domain()->check(*v, store_->today()))
        throw EngineError("column " + column + ": " + *reason);
    } else if (kind_of(*v) != ValueKind::Integer) {
      throw EngineError("column " + column + ": expected " +
                        *fn->codomain_set() + " surrogate key (integer)");
    }
  }
  pending_[column] = std::move(v);
}

inline std::optional<Value> EditSession::value(
    const std::string& column) const {
  auto it = pending_.find(column);
  if (it != pending_.end()) return it->second;
  if (is_new_) return std::nullopt;
  return store_->rows(table_).at(*key_).value(column);
}

inline std::set<std::string> EditSession::dirty() const {
  std::set<std::string> out;
  const Row* committed = nullptr;
  if (!is_new_) committed = &store_->rows(table_).at(*key_);
  for (const auto& [col, v] : pending_) {
    std::optional<Value> base =
        committed ? committed->value(col) : std::nullopt;
    if (v != base) out.insert(col);
  }
  return out;
}

}  // namespace nullity
