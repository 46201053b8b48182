// Command-line front end for the nullity constraint engine.
//
// State lives in a workspace directory: schema.emdm, constraints.emdm and
// one <table>.csv per object set. Every invocation reloads the workspace
// (trusted row load, then full constraint re-admission with instance
// validation) and persists it back after a successful mutation.
//
// Exit codes: 0 success, 1 engine rejection/violation, 2 usage/parse error.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nullity/nullity.hpp"

namespace fs = std::filesystem;
using namespace nullity;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct Workspace {
  fs::path dir;

  fs::path schema_file() const { return dir / "schema.emdm"; }
  fs::path constraints_file() const { return dir / "constraints.emdm"; }
  fs::path table_file(const std::string& table) const {
    return dir / (table + ".csv");
  }
};

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EngineError("cannot write " + path.string());
  out << content;
}

// Loads schema, rows (trusted) and constraints (full re-admission). Returns
// an exit code, 0 on success.
int load_workspace(Engine& engine, const Workspace& ws) {
  if (auto schema_text = read_file(ws.schema_file())) {
    auto parsed = dsl::parse_schema(*schema_text);
    if (!parsed.ok()) {
      for (const auto& e : parsed.errors)
        std::cerr << ws.schema_file().string() << ":" << e.str() << "\n";
      return kUsage;
    }
    engine.apply_schema(parsed.decls);
  }
  for (const auto& set : engine.catalog().sets()) {
    auto csv_text = read_file(ws.table_file(set));
    if (!csv_text) continue;
    auto loaded = engine.load_csv(set, *csv_text, /*trusted=*/true);
    if (!loaded.ok) {
      std::cerr << ws.table_file(set).string() << ": " << loaded.error << "\n";
      return kRejected;
    }
  }
  if (auto constraint_text = read_file(ws.constraints_file())) {
    auto parsed = dsl::parse_constraint_file(*constraint_text);
    if (!parsed.ok()) {
      for (const auto& e : parsed.errors)
        std::cerr << ws.constraints_file().string() << ":" << e.str() << "\n";
      return kUsage;
    }
    for (const auto& ast : parsed.decls) {
      auto res = engine.add_constraint(ast);
      if (!res.admitted) {
        std::cerr << res.message << "\n";
        return kRejected;
      }
    }
  }
  return kOk;
}

void persist_workspace(const Engine& engine, const Workspace& ws) {
  write_file(ws.schema_file(), engine.render_schema());
  write_file(ws.constraints_file(), engine.render_constraints());
  for (const auto& set : engine.catalog().sets())
    write_file(ws.table_file(set), engine.save_csv(set));
}

// col=val tokens; an empty val means null. Shape problems are usage errors
// and are reported before any session is opened.
std::optional<std::vector<std::pair<std::string, std::string>>>
split_assignments(const std::vector<std::string>& assignments) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& a : assignments) {
    size_t eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "malformed assignment '" << a << "' (expected col=val)\n";
      return std::nullopt;
    }
    out.emplace_back(a.substr(0, eq), a.substr(eq + 1));
  }
  return out;
}

void apply_assignments(
    Engine& engine, Engine::Session& session,
    const std::vector<std::pair<std::string, std::string>>& assignments) {
  for (const auto& [col, text] : assignments) {
    if (text.empty()) {
      session.set_value(col, std::nullopt);
      continue;
    }
    const FunctionDef* fn =
        engine.catalog().applicable_function(session.table(), col);
    if (!fn)
      throw EngineError("unknown column " + col + " on " + session.table());
    auto v = parse_value(fn->stored_kind(), text);
    if (!v)
      throw EngineError("column " + col + ": cannot parse '" + text +
                        "' as " + std::string(kind_name(fn->stored_kind())));
    session.set_value(col, std::move(v));
  }
}

int finish_save(Engine& engine, Engine::Session& session, const Workspace& ws,
                bool print_key) {
  auto res = engine.save(session);
  if (!res.ok) {
    std::cerr << res.violation->message << "\n";
    return kRejected;
  }
  persist_workspace(engine, ws);
  if (print_key) std::cout << res.key << "\n";
  return kOk;
}

std::string porcelain_product(const std::vector<std::string>& components) {
  std::string out;
  for (size_t i = 0; i < components.size(); ++i) {
    if (i) out += "*";
    out += components[i];
  }
  return out;
}

bool confirm_on_tty(const std::string& name) {
  std::cout << "Delete constraint " << name << "? [y/N] " << std::flush;
  std::string line;
  if (!std::getline(std::cin, line)) return false;
  return line == "y" || line == "Y" || line == "yes";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nullity - existence/non-existence constraint engine"};
  app.require_subcommand(1);

  std::string workspace_dir = ".";
  app.add_option("-C,--workspace", workspace_dir,
                 "workspace directory (default: current directory)");

  // schema load <file>
  auto* schema = app.add_subcommand("schema", "schema management");
  schema->require_subcommand(1);
  std::string schema_path;
  auto* schema_load = schema->add_subcommand("load", "apply a schema file");
  schema_load->add_option("file", schema_path, "schema file")->required();

  // constraint add/del/list
  auto* constraint = app.add_subcommand("constraint", "constraint management");
  constraint->require_subcommand(1);
  std::vector<std::string> decl_parts;
  auto* constraint_add =
      constraint->add_subcommand("add", "declare a constraint");
  constraint_add->add_option("decl", decl_parts, "constraint declaration")
      ->required()
      ->expected(-1);
  std::string del_name;
  bool del_yes = false;
  auto* constraint_del =
      constraint->add_subcommand("del", "delete a constraint");
  constraint_del->add_option("name", del_name, "constraint name")->required();
  constraint_del->add_flag("--yes", del_yes, "skip confirmation");
  bool list_porcelain = false;
  auto* constraint_list =
      constraint->add_subcommand("list", "list constraints");
  constraint_list->add_flag("--porcelain", list_porcelain,
                            "tab-separated output");

  // row insert/update/del
  auto* row = app.add_subcommand("row", "row editing");
  row->require_subcommand(1);
  std::string ins_table;
  std::vector<std::string> ins_assignments;
  auto* row_insert = row->add_subcommand("insert", "insert a row");
  row_insert->add_option("table", ins_table, "table")->required();
  row_insert->add_option("assignments", ins_assignments, "col=val...")
      ->expected(-1);
  std::string upd_table;
  std::int64_t upd_key = 0;
  std::vector<std::string> upd_assignments;
  auto* row_update = row->add_subcommand("update", "update a row");
  row_update->add_option("table", upd_table, "table")->required();
  row_update->add_option("x", upd_key, "surrogate key")->required();
  row_update->add_option("assignments", upd_assignments, "col=val...")
      ->expected(-1);
  std::string del_table;
  std::int64_t del_key = 0;
  auto* row_del = row->add_subcommand("del", "delete a row");
  row_del->add_option("table", del_table, "table")->required();
  row_del->add_option("x", del_key, "surrogate key")->required();

  // check [<constraint>]
  std::string check_name;
  bool check_porcelain = false;
  auto* check = app.add_subcommand("check", "validate the instance");
  check->add_option("constraint", check_name, "limit to one constraint");
  check->add_flag("--porcelain", check_porcelain, "tab-separated output");

  // gen-sql <table> [-o file]
  std::string gen_table, gen_out;
  auto* gen = app.add_subcommand("gen-sql", "emit SQL trigger script");
  gen->add_option("table", gen_table, "base table")->required();
  gen->add_option("-o,--output", gen_out, "output file (default: stdout)");

  // load-csv / save-csv
  std::string lcsv_table, lcsv_file;
  bool lcsv_trusted = false;
  auto* lcsv = app.add_subcommand("load-csv", "load rows from a CSV file");
  lcsv->add_option("table", lcsv_table, "table")->required();
  lcsv->add_option("file", lcsv_file, "CSV file")->required();
  lcsv->add_flag("--trusted", lcsv_trusted, "bypass enforcement");
  std::string scsv_table, scsv_file;
  auto* scsv = app.add_subcommand("save-csv", "write a table to a CSV file");
  scsv->add_option("table", scsv_table, "table")->required();
  scsv->add_option("file", scsv_file, "CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Workspace ws{fs::path(workspace_dir)};
  Engine engine;

  try {
    if (int rc = load_workspace(engine, ws); rc != kOk) return rc;

    if (schema_load->parsed()) {
      auto text = read_file(schema_path);
      if (!text) {
        std::cerr << "cannot read " << schema_path << "\n";
        return kRejected;
      }
      auto parsed = dsl::parse_schema(*text);
      if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
          std::cerr << schema_path << ":" << e.str() << "\n";
        return kUsage;
      }
      engine.apply_schema(parsed.decls);
      persist_workspace(engine, ws);
      return kOk;
    }

    if (constraint_add->parsed()) {
      std::string decl;
      for (const auto& part : decl_parts) {
        if (!decl.empty()) decl += " ";
        decl += part;
      }
      // Accept the declaration with or without the leading keyword.
      if (decl.rfind("constraint", 0) != 0) decl = "constraint " + decl;
      auto parsed = dsl::parse_constraint(decl);
      if (!parsed.ok()) {
        std::cerr << parsed.error->str() << "\n";
        return kUsage;
      }
      auto res = engine.add_constraint(*parsed.ast);
      if (!res.admitted) {
        std::cerr << res.message << "\n";
        return kRejected;
      }
      persist_workspace(engine, ws);
      return kOk;
    }

    if (constraint_del->parsed()) {
      bool confirmed = del_yes;
      if (!confirmed) {
        if (!isatty(STDIN_FILENO)) {
          std::cerr << "constraint del " << del_name
                    << ": refusing without --yes (stdin is not a TTY)\n";
          return kRejected;
        }
        confirmed = confirm_on_tty(del_name);
      }
      auto res = engine.delete_constraint(del_name, confirmed);
      if (res.status == DeleteStatus::UnknownName) {
        std::cerr << res.message << "\n";
        return kRejected;
      }
      if (res.status == DeleteStatus::Deleted) persist_workspace(engine, ws);
      return kOk;
    }

    if (constraint_list->parsed()) {
      for (const auto& c : engine.constraints()) {
        if (list_porcelain) {
          std::cout << c.name << "\t" << kind_name(c.kind) << "\t"
                    << porcelain_product(c.left.components) << "\t"
                    << porcelain_product(c.right.components) << "\t" << c.base
                    << "\n";
        } else {
          dsl::ConstraintAst ast;
          ast.name = c.name;
          ast.op = c.kind;
          ast.left = c.left.components;
          ast.right = c.right.components;
          std::cout << dsl::render(ast) << "\n";
        }
      }
      return kOk;
    }

    if (row_insert->parsed()) {
      auto assignments = split_assignments(ins_assignments);
      if (!assignments) return kUsage;
      auto session = engine.open_insert(ins_table);
      apply_assignments(engine, session, *assignments);
      return finish_save(engine, session, ws, /*print_key=*/true);
    }

    if (row_update->parsed()) {
      auto assignments = split_assignments(upd_assignments);
      if (!assignments) return kUsage;
      auto session = engine.open_update(upd_table, upd_key);
      apply_assignments(engine, session, *assignments);
      return finish_save(engine, session, ws, /*print_key=*/false);
    }

    if (row_del->parsed()) {
      engine.delete_row(del_table, del_key);
      persist_workspace(engine, ws);
      return kOk;
    }

    if (check->parsed()) {
      std::vector<const Constraint*> targets;
      if (!check_name.empty()) {
        const Constraint* c = engine.registry().find(check_name);
        if (!c) throw EngineError("unknown constraint " + check_name);
        targets.push_back(c);
      } else {
        for (const auto& c : engine.constraints()) targets.push_back(&c);
      }
      bool violated = false;
      for (const Constraint* c : targets) {
        for (RowKey x : engine.registry().validate_instance(*c)) {
          violated = true;
          if (check_porcelain)
            std::cout << c->name << "\t" << x << "\n";
          else
            std::cout << "constraint " << c->name << " is violated for " << x
                      << "\n";
        }
      }
      return violated ? kRejected : kOk;
    }

    if (gen->parsed()) {
      auto script =
          generate_triggers(engine.catalog(), engine.registry(), gen_table);
      if (gen_out.empty())
        std::cout << script.sql;
      else
        write_file(gen_out, script.sql);
      return kOk;
    }

    if (lcsv->parsed()) {
      auto text = read_file(lcsv_file);
      if (!text) {
        std::cerr << "cannot read " << lcsv_file << "\n";
        return kRejected;
      }
      auto loaded = engine.load_csv(lcsv_table, *text, lcsv_trusted);
      if (!loaded.ok) {
        std::cerr << lcsv_file << ": " << loaded.error << "\n";
        return kRejected;  // workspace not persisted: load is all-or-nothing
      }
      persist_workspace(engine, ws);
      return kOk;
    }

    if (scsv->parsed()) {
      engine.save_csv_file(scsv_table, scsv_file);
      return kOk;
    }
  } catch (const EngineError& e) {
    std::cerr << e.what() << "\n";
    return kRejected;
  }

  std::cerr << app.help();
  return kUsage;
}
