#pragma once

// Parsers for the schema and constraint text formats. Pure functions; the
// caller applies accepted declarations to the engine. One declaration per
// line, `#` starts a comment, LF or CRLF.
//
//   set NAME
//   subset SUB <= SUPER
//   fn NAME : DOMAIN -> kind[(WIDTH)][ [MIN,MAX] ] [total]
//   fn NAME : DOMAIN -> SETNAME [total]
//   constraint NAME : LHS |- RHS        existence
//   constraint NAME : LHS !|- RHS       non-existence
//   constraint NAME : !|- RHS           consolidated (RHS arity >= 2)
//
// LHS/RHS are *-separated function names; `*` renders as the product bullet
// in engine messages.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nullity/catalog.hpp"
#include "nullity/constraint.hpp"

namespace nullity::dsl {

struct SourcePos {
  int line = 1;
  int col = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct SourceSpan {
  SourcePos begin;
  SourcePos end;
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct ParseError {
  SourcePos pos;
  std::string message;

  std::string str() const {
    return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " +
           message;
  }
};

struct SetDecl {
  std::string name;
  SourceSpan span;
};

struct SubsetDecl {
  std::string sub;
  std::string super;
  SourceSpan span;
};

struct FnDecl {
  std::string name;
  std::string domain;
  Codomain codomain = ValueDomain{};
  bool total = false;
  SourceSpan span;
};

using SchemaDecl = std::variant<SetDecl, SubsetDecl, FnDecl>;

struct SchemaParse {
  std::vector<SchemaDecl> decls;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

struct ConstraintAst {
  std::string name;
  ConstraintKind op = ConstraintKind::Existence;
  std::vector<std::string> left;
  std::vector<std::string> right;
  SourceSpan span;

  // Spans are positional metadata, not identity.
  friend bool operator==(const ConstraintAst& a, const ConstraintAst& b) {
    return a.name == b.name && a.op == b.op && a.left == b.left &&
           a.right == b.right;
  }
};

struct ConstraintParse {
  std::optional<ConstraintAst> ast;
  std::optional<ParseError> error;
  bool ok() const { return ast.has_value(); }
};

struct ConstraintFileParse {
  std::vector<ConstraintAst> decls;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

// ---------------------------------------------------------------------------
// Rendering (canonical single-space form; parse of the output is identity)

inline std::string render(const std::vector<std::string>& product) {
  std::string out;
  for (size_t i = 0; i < product.size(); ++i) {
    if (i) out += " * ";
    out += product[i];
  }
  return out;
}

inline std::string render(const ConstraintAst& ast) {
  std::string out = "constraint " + ast.name + " : ";
  switch (ast.op) {
    case ConstraintKind::Existence:
      out += render(ast.left) + " |- " + render(ast.right);
      break;
    case ConstraintKind::NonExistence:
      out += render(ast.left) + " !|- " + render(ast.right);
      break;
    case ConstraintKind::Consolidated:
      out += "!|- " + render(ast.right);
      break;
  }
  return out;
}

inline std::string render_bound(const Value& v) { return render_value(v); }

inline std::string render(const SchemaDecl& decl) {
  if (const auto* s = std::get_if<SetDecl>(&decl)) return "set " + s->name;
  if (const auto* s = std::get_if<SubsetDecl>(&decl))
    return "subset " + s->sub + " <= " + s->super;
  const auto& f = std::get<FnDecl>(decl);
  std::string out = "fn " + f.name + " : " + f.domain + " -> ";
  if (const auto* set = std::get_if<std::string>(&f.codomain)) {
    out += *set;
  } else {
    const auto& vd = std::get<ValueDomain>(f.codomain);
    out += std::string(kind_name(vd.kind));
    if (vd.width) out += "(" + std::to_string(*vd.width) + ")";
    if (vd.has_range()) {
      out += " [";
      out += vd.min_today ? "TODAY" : (vd.min ? render_bound(*vd.min) : "");
      out += ",";
      out += vd.max_today ? "TODAY" : (vd.max ? render_bound(*vd.max) : "");
      out += "]";
    }
  }
  if (f.total) out += " total";
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
inline bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9');
}

// Cursor over one logical line.
struct Cursor {
  Cursor(std::string_view text, int line) : text(text), line(line) {}

  std::string_view text;
  int line;
  size_t pos = 0;
  ParseError err;
  bool failed = false;

  SourcePos here() const { return {line, static_cast<int>(pos) + 1}; }

  bool fail(const std::string& message, std::optional<SourcePos> at = {}) {
    if (!failed) {
      failed = true;
      err = {at.value_or(here()), message};
    }
    return false;
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  std::optional<std::string> ident(const char* what) {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) {
      fail(std::string("expected ") + what);
      return std::nullopt;
    }
    size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  }

  bool symbol(std::string_view sym) {
    skip_ws();
    if (text.substr(pos, sym.size()) != sym)
      return fail("expected '" + std::string(sym) + "'");
    pos += sym.size();
    return true;
  }

  bool peek_symbol(std::string_view sym) {
    skip_ws();
    return text.substr(pos, sym.size()) == sym;
  }

  // Raw run up to one of the stop characters, trimmed.
  std::string raw_until(std::string_view stops) {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && stops.find(text[pos]) == std::string_view::npos)
      ++pos;
    size_t end = pos;
    while (end > start && (text[end - 1] == ' ' || text[end - 1] == '\t'))
      --end;
    return std::string(text.substr(start, end - start));
  }

  bool expect_end() {
    if (!at_end()) return fail("unexpected trailing input");
    return true;
  }
};

// Strips the `#` comment and returns the declaration part of a line.
inline std::string_view strip_comment(std::string_view line) {
  size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                           line.back() == '\r'))
    line.remove_suffix(1);
  return line;
}

inline std::vector<std::pair<int, std::string_view>> logical_lines(
    std::string_view text) {
  std::vector<std::pair<int, std::string_view>> out;
  int line_no = 1;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      out.emplace_back(line_no, text.substr(start, i - start));
      start = i + 1;
      ++line_no;
    }
  }
  return out;
}

inline bool parse_bound(Cursor& cur, ValueKind kind, std::string_view raw,
                        SourcePos at, std::optional<Value>& value,
                        bool& today) {
  if (raw.empty()) return true;  // open bound
  if (raw == "TODAY") {
    if (kind != ValueKind::Date)
      return cur.fail("TODAY bound applies to date only", at);
    today = true;
    return true;
  }
  auto v = parse_value(kind, raw);
  if (!v)
    return cur.fail("malformed range: cannot parse '" + std::string(raw) +
                        "' as " + std::string(kind_name(kind)),
                    at);
  value = std::move(v);
  return true;
}

inline std::optional<FnDecl> parse_fn(Cursor& cur) {
  FnDecl decl;
  auto name = cur.ident("function name");
  if (!name) return std::nullopt;
  decl.name = *name;
  if (!cur.symbol(":")) return std::nullopt;
  auto domain = cur.ident("domain set");
  if (!domain) return std::nullopt;
  decl.domain = *domain;
  if (!cur.symbol("->")) return std::nullopt;
  SourcePos cod_pos = cur.here();
  cur.skip_ws();
  cod_pos = cur.here();
  auto cod = cur.ident("codomain");
  if (!cod) return std::nullopt;
  auto kind = kind_from_name(*cod);
  if (kind) {
    ValueDomain vd;
    vd.kind = *kind;
    if (cur.peek_symbol("(")) {
      cur.symbol("(");
      SourcePos wpos = cur.here();
      std::string w = cur.raw_until(")");
      auto wv = parse_value(ValueKind::Integer, w);
      if (!wv || std::get<std::int64_t>(*wv) <= 0) {
        cur.fail("malformed width '" + w + "'", wpos);
        return std::nullopt;
      }
      vd.width = static_cast<int>(std::get<std::int64_t>(*wv));
      if (!cur.symbol(")")) return std::nullopt;
    }
    if (cur.peek_symbol("[")) {
      cur.symbol("[");
      SourcePos mpos = cur.here();
      std::string lo = cur.raw_until(",]");
      if (!cur.symbol(",")) return std::nullopt;
      SourcePos xpos = cur.here();
      std::string hi = cur.raw_until("]");
      if (!cur.symbol("]")) return std::nullopt;
      if (!parse_bound(cur, vd.kind, lo, mpos, vd.min, vd.min_today))
        return std::nullopt;
      if (!parse_bound(cur, vd.kind, hi, xpos, vd.max, vd.max_today))
        return std::nullopt;
      if (auto problem = vd.problem()) {
        cur.fail("malformed range: " + *problem, mpos);
        return std::nullopt;
      }
    }
    if (auto problem = vd.problem()) {
      cur.fail(*problem, cod_pos);
      return std::nullopt;
    }
    decl.codomain = vd;
  } else {
    // A set-typed codomain, unless the shape insists on a value kind.
    if (cur.peek_symbol("(") || cur.peek_symbol("[")) {
      cur.fail("unknown value kind '" + *cod + "'", cod_pos);
      return std::nullopt;
    }
    decl.codomain = *cod;
  }
  cur.skip_ws();
  if (cur.peek_symbol("total")) {
    cur.symbol("total");
    decl.total = true;
  }
  if (!cur.expect_end()) return std::nullopt;
  return decl;
}

inline std::optional<SchemaDecl> parse_schema_line(Cursor& cur) {
  auto kw = cur.ident("declaration keyword (set, subset, fn)");
  if (!kw) return std::nullopt;
  if (*kw == "set") {
    auto name = cur.ident("set name");
    if (!name || !cur.expect_end()) return std::nullopt;
    return SchemaDecl{SetDecl{*name, {}}};
  }
  if (*kw == "subset") {
    auto sub = cur.ident("subset name");
    if (!sub || !cur.symbol("<=")) return std::nullopt;
    auto super = cur.ident("superset name");
    if (!super || !cur.expect_end()) return std::nullopt;
    return SchemaDecl{SubsetDecl{*sub, *super, {}}};
  }
  if (*kw == "fn") {
    auto fn = parse_fn(cur);
    if (!fn) return std::nullopt;
    return SchemaDecl{*fn};
  }
  cur.fail("unknown declaration '" + *kw + "' (expected set, subset or fn)",
           {SourcePos{cur.line, 1}});
  return std::nullopt;
}

inline bool parse_product(Cursor& cur, std::vector<std::string>& out) {
  auto first = cur.ident("function name");
  if (!first) return false;
  out.push_back(*first);
  while (cur.peek_symbol("*")) {
    cur.symbol("*");
    auto next = cur.ident("function name");
    if (!next) return false;
    out.push_back(*next);
  }
  return true;
}

inline std::optional<ConstraintAst> parse_constraint_line(Cursor& cur) {
  if (!cur.symbol("constraint")) return std::nullopt;
  ConstraintAst ast;
  auto name = cur.ident("constraint name");
  if (!name) return std::nullopt;
  ast.name = *name;
  if (!cur.symbol(":")) return std::nullopt;
  if (cur.peek_symbol("!|-")) {
    cur.symbol("!|-");
    ast.op = ConstraintKind::Consolidated;
    SourcePos rpos = cur.here();
    if (!parse_product(cur, ast.right)) return std::nullopt;
    if (ast.right.size() < 2) {
      cur.fail("consolidated constraint needs at least 2 columns", rpos);
      return std::nullopt;
    }
  } else {
    if (!parse_product(cur, ast.left)) return std::nullopt;
    if (cur.peek_symbol("!|-")) {
      cur.symbol("!|-");
      ast.op = ConstraintKind::NonExistence;
    } else if (cur.peek_symbol("|-")) {
      cur.symbol("|-");
      ast.op = ConstraintKind::Existence;
    } else {
      cur.fail("expected '|-' or '!|-'");
      return std::nullopt;
    }
    if (!parse_product(cur, ast.right)) return std::nullopt;
  }
  if (!cur.expect_end()) return std::nullopt;
  ast.span = {SourcePos{cur.line, 1}, cur.here()};
  return ast;
}

}  // namespace detail

// Parses a whole schema file. Collects every error; a parse with errors
// must not be applied (no partial application).
inline SchemaParse parse_schema(std::string_view text) {
  SchemaParse out;
  for (auto [line_no, raw] : detail::logical_lines(text)) {
    std::string_view body = detail::strip_comment(raw);
    detail::Cursor cur(body, line_no);
    if (cur.at_end()) continue;
    auto decl = detail::parse_schema_line(cur);
    if (decl)
      out.decls.push_back(std::move(*decl));
    else
      out.errors.push_back(cur.err);
  }
  return out;
}

// Parses exactly one constraint declaration (blank and comment lines around
// it are ignored).
inline ConstraintParse parse_constraint(std::string_view text) {
  ConstraintParse out;
  for (auto [line_no, raw] : detail::logical_lines(text)) {
    std::string_view body = detail::strip_comment(raw);
    detail::Cursor cur(body, line_no);
    if (cur.at_end()) continue;
    if (out.ast) {
      out.ast.reset();
      out.error = ParseError{{line_no, 1}, "expected a single declaration"};
      return out;
    }
    auto ast = detail::parse_constraint_line(cur);
    if (!ast) {
      out.error = cur.err;
      return out;
    }
    out.ast = std::move(*ast);
  }
  if (!out.ast && !out.error)
    out.error = ParseError{{1, 1}, "expected a constraint declaration"};
  return out;
}

inline ConstraintFileParse parse_constraint_file(std::string_view text) {
  ConstraintFileParse out;
  for (auto [line_no, raw] : detail::logical_lines(text)) {
    std::string_view body = detail::strip_comment(raw);
    detail::Cursor cur(body, line_no);
    if (cur.at_end()) continue;
    auto ast = detail::parse_constraint_line(cur);
    if (ast)
      out.decls.push_back(std::move(*ast));
    else
      out.errors.push_back(cur.err);
  }
  return out;
}

}  // namespace nullity::dsl
