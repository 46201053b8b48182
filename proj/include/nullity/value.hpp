#pragma once

// Scalar values, nullable storage, value domains and the clock used to
// resolve the moving TODAY bound.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace nullity {

// Usage/contract errors (unknown names, bad values, broken preconditions).
// Expected rejections -- admission refusals and save violations -- are
// returned as values, never thrown.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dates

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  friend auto operator<=>(const Date&, const Date&) = default;

  static bool leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  }

  static int days_in_month(int y, int m) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30,
                                      31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12) return 0;
    if (m == 2 && leap_year(y)) return 29;
    return kDays[m - 1];
  }

  bool valid() const {
    return year >= 1 && month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
  }

  // Strict ISO-8601 YYYY-MM-DD.
  static std::optional<Date> parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto digits = [](std::string_view t) {
      for (char c : t)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (!digits(s.substr(0, 4)) || !digits(s.substr(5, 2)) ||
        !digits(s.substr(8, 2)))
      return std::nullopt;
    auto num = [](std::string_view t) {
      int v = 0;
      for (char c : t) v = v * 10 + (c - '0');
      return v;
    };
    Date d{num(s.substr(0, 4)), num(s.substr(5, 2)), num(s.substr(8, 2))};
    if (!d.valid()) return std::nullopt;
    return d;
  }

  std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

using Clock = std::function<Date()>;

inline Date system_today() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  return Date{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday};
}

inline Clock system_clock() {
  return [] { return system_today(); };
}

inline Clock fixed_clock(Date d) {
  return [d] { return d; };
}

// ---------------------------------------------------------------------------
// Values

enum class ValueKind { Integer, Decimal, Text, Date, Boolean };

inline std::string_view kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::Integer: return "integer";
    case ValueKind::Decimal: return "decimal";
    case ValueKind::Text: return "text";
    case ValueKind::Date: return "date";
    case ValueKind::Boolean: return "boolean";
  }
  return "?";
}

inline std::optional<ValueKind> kind_from_name(std::string_view s) {
  if (s == "integer") return ValueKind::Integer;
  if (s == "decimal") return ValueKind::Decimal;
  if (s == "text") return ValueKind::Text;
  if (s == "date") return ValueKind::Date;
  if (s == "boolean") return ValueKind::Boolean;
  return std::nullopt;
}

// Tagged scalar; absence (std::optional empty) is the NULL case.
using Value = std::variant<std::int64_t, double, std::string, Date, bool>;

inline ValueKind kind_of(const Value& v) {
  switch (v.index()) {
    case 0: return ValueKind::Integer;
    case 1: return ValueKind::Decimal;
    case 2: return ValueKind::Text;
    case 3: return ValueKind::Date;
    default: return ValueKind::Boolean;
  }
}

inline std::string render_value(const Value& v) {
  switch (v.index()) {
    case 0: return std::to_string(std::get<std::int64_t>(v));
    case 1: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(v));
      return std::string(buf, res.ptr);
    }
    case 2: return std::get<std::string>(v);
    case 3: return std::get<Date>(v).str();
    default: return std::get<bool>(v) ? "true" : "false";
  }
}

// Strict full-match parse of `s` as a value of kind `k`. Text must be
// non-empty; the empty string is the null spelling everywhere.
inline std::optional<Value> parse_value(ValueKind k, std::string_view s) {
  switch (k) {
    case ValueKind::Integer: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
      return Value{v};
    }
    case ValueKind::Decimal: {
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
      return Value{v};
    }
    case ValueKind::Text:
      if (s.empty()) return std::nullopt;
      return Value{std::string(s)};
    case ValueKind::Date: {
      auto d = Date::parse(s);
      if (!d) return std::nullopt;
      return Value{*d};
    }
    case ValueKind::Boolean:
      if (s == "true") return Value{true};
      if (s == "false") return Value{false};
      return std::nullopt;
  }
  return std::nullopt;
}

inline int decimal_digits(std::int64_t v) {
  std::uint64_t m = v < 0 ? ~static_cast<std::uint64_t>(v) + 1
                          : static_cast<std::uint64_t>(v);
  int n = 1;
  while (m >= 10) {
    m /= 10;
    ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Value domains

// Kind plus optional width and inclusive range. A date bound may be the
// moving TODAY, resolved against the store clock at write time.
struct ValueDomain {
  ValueKind kind = ValueKind::Text;
  std::optional<int> width;         // digit count (integer) / length (text)
  std::optional<Value> min;
  std::optional<Value> max;
  bool min_today = false;
  bool max_today = false;

  friend bool operator==(const ValueDomain&, const ValueDomain&) = default;

  bool has_range() const { return min || max || min_today || max_today; }

  // Structural sanity, independent of any value: bound kinds, width sign,
  // TODAY only on dates, min <= max.
  std::optional<std::string> problem() const {
    if (width && *width <= 0) return "width must be positive";
    if (width && kind != ValueKind::Integer && kind != ValueKind::Text)
      return "width applies to integer and text only";
    if ((min_today || max_today) && kind != ValueKind::Date)
      return "TODAY bound applies to date only";
    if (kind == ValueKind::Text || kind == ValueKind::Boolean) {
      if (has_range()) return std::string("range not supported for ") +
                              std::string(kind_name(kind));
    }
    for (const auto* b : {&min, &max})
      if (*b && kind_of(**b) != kind) return "range bound kind mismatch";
    if (min && max && !(*min < *max) && !(*min == *max))
      return "range min exceeds max";
    return std::nullopt;
  }

  // Returns a reason when `v` does not conform; nullopt when it does.
  std::optional<std::string> check(const Value& v, const Date& today) const {
    if (kind_of(v) != kind)
      return "expected " + std::string(kind_name(kind)) + " value, got " +
             std::string(kind_name(kind_of(v)));
    if (kind == ValueKind::Text && std::get<std::string>(v).empty())
      return "text values must be non-empty";
    if (width) {
      if (kind == ValueKind::Integer &&
          decimal_digits(std::get<std::int64_t>(v)) > *width)
        return "value " + render_value(v) + " exceeds width " +
               std::to_string(*width);
      if (kind == ValueKind::Text &&
          std::get<std::string>(v).size() > static_cast<size_t>(*width))
        return "value exceeds width " + std::to_string(*width);
    }
    std::optional<Value> lo = min;
    std::optional<Value> hi = max;
    if (min_today) lo = Value{today};
    if (max_today) hi = Value{today};
    if (lo && v < *lo)
      return "value " + render_value(v) + " below minimum " +
             render_value(*lo);
    if (hi && *hi < v)
      return "value " + render_value(v) + " above maximum " +
             render_value(*hi);
    return std::nullopt;
  }
};

}  // namespace nullity
