#pragma once

// Shared helpers for the test suites.

#include <cstdint>
#include <optional>
#include <string>

#include "nullity/engine.hpp"

namespace testutil {

inline nullity::Value iv(std::int64_t v) { return nullity::Value{v}; }
inline nullity::Value tv(std::string v) {
  return nullity::Value{std::move(v)};
}
inline nullity::Value dv(int y, int m, int d) {
  return nullity::Value{nullity::Date{y, m, d}};
}

inline nullity::ValueDomain integer_domain(std::optional<int> width = {}) {
  nullity::ValueDomain vd;
  vd.kind = nullity::ValueKind::Integer;
  vd.width = width;
  return vd;
}

inline nullity::ValueDomain text_domain() {
  return nullity::ValueDomain{nullity::ValueKind::Text, {}, {}, {}, false,
                              false};
}

inline nullity::ValueDomain date_domain_1900_today() {
  nullity::ValueDomain vd;
  vd.kind = nullity::ValueKind::Date;
  vd.min = nullity::Value{nullity::Date{1900, 1, 1}};
  vd.max_today = true;
  return vd;
}

inline nullity::Clock test_clock() {
  return nullity::fixed_clock({2024, 5, 18});
}

// The worked example: PERSONS with two identification numbers and two
// required-when-identified attributes.
inline void declare_persons(nullity::Engine& engine) {
  engine.declare_set("PERSONS");
  engine.declare_function("SSN", "PERSONS", integer_domain(9));
  engine.declare_function("ITIN", "PERSONS", integer_domain(9));
  engine.declare_function("BirthDate", "PERSONS", date_domain_1900_today());
  engine.declare_function("Sex", "PERSONS", text_domain());
}

inline void admit_ec_nec(nullity::Engine& engine) {
  auto ec = engine.add_constraint("ec", nullity::ConstraintKind::Existence,
                                  {"SSN", "ITIN"}, {"BirthDate", "Sex"});
  auto nec = engine.add_constraint(
      "nec", nullity::ConstraintKind::Consolidated, {}, {"SSN", "ITIN"});
  if (!ec.admitted || !nec.admitted)
    throw std::runtime_error("worked-example constraints were not admitted");
}

}  // namespace testutil
