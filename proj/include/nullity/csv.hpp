#pragma once

// Minimal RFC-4180-style CSV: comma separated, double-quote escaping,
// LF or CRLF line ends. An empty field is the null spelling.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nullity::csv {

inline bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void append_field(std::string& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

inline void append_record(std::string& out,
                          const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    append_field(out, fields[i]);
  }
  out += '\n';
}

struct ParseResult {
  std::vector<std::vector<std::string>> records;
  std::optional<std::string> error;  // includes 1-based line number
  bool ok() const { return !error; }
};

inline ParseResult parse(std::string_view text) {
  ParseResult out;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes "" from a bare empty line
  size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (record.empty() && !field_started && field.empty()) return;  // blank line
    end_field();
    out.records.push_back(std::move(record));
    record.clear();
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        field_started = true;  // a separator implies fields on both sides
        end_field();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field_started = true;
        field += c;
    }
  }
  if (in_quotes) {
    out.error = "line " + std::to_string(line) + ": unterminated quoted field";
    return out;
  }
  end_record();
  return out;
}

}  // namespace nullity::csv
