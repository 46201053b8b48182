#include <gtest/gtest.h>

#include "nullity/nullity.hpp"
#include "test_util.hpp"

using namespace nullity;

namespace {

void setup_worked_example(Engine& engine) {
  testutil::declare_persons(engine);
  testutil::admit_ec_nec(engine);
}

}  // namespace

TEST(Codegen, DeterministicByteIdenticalOutput) {
  Engine a(testutil::test_clock()), b(testutil::test_clock());
  setup_worked_example(a);
  setup_worked_example(b);
  auto sa = generate_triggers(a.catalog(), a.registry(), "PERSONS");
  auto sb = generate_triggers(b.catalog(), b.registry(), "PERSONS");
  EXPECT_EQ(sa.sql, sb.sql);
  EXPECT_EQ(sa.table, "PERSONS");
}

TEST(Codegen, NoConstraintsError) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  EXPECT_THROW(generate_triggers(engine.catalog(), engine.registry(),
                                 "PERSONS"),
               EngineError);
  EXPECT_THROW(generate_triggers(engine.catalog(), engine.registry(), "NOPE"),
               EngineError);
}

TEST(Codegen, RegenerationAfterDeleteOmitsConstraint) {
  Engine engine(testutil::test_clock());
  setup_worked_example(engine);
  auto before = generate_triggers(engine.catalog(), engine.registry(),
                                  "PERSONS");
  EXPECT_NE(before.sql.find("existence constraint ec"), std::string::npos);
  ASSERT_EQ(engine.delete_constraint("ec", true).status,
            DeleteStatus::Deleted);
  auto after = generate_triggers(engine.catalog(), engine.registry(),
                                 "PERSONS");
  EXPECT_EQ(after.sql.find("existence constraint ec"), std::string::npos);
  EXPECT_NE(after.sql.find("non-existence constraint nec"),
            std::string::npos);
}

TEST(Codegen, RaisedMessagesEqualEnforcementMessages) {
  Engine engine(testutil::test_clock());
  setup_worked_example(engine);
  auto script = generate_triggers(engine.catalog(), engine.registry(),
                                  "PERSONS");
  EXPECT_NE(script.sql.find(existence_message("ec", "BirthDate")),
            std::string::npos);
  EXPECT_NE(script.sql.find(existence_message("ec", "Sex")),
            std::string::npos);
  EXPECT_NE(script.sql.find(consolidated_message("nec", "ITIN", "SSN")),
            std::string::npos);
  // Non-existence hooks precede existence hooks in the trigger body.
  EXPECT_LT(script.sql.find("-- nec"), script.sql.find("-- ec"));
}

TEST(Codegen, HeaderListsConstraintNamesAndKinds) {
  Engine engine(testutil::test_clock());
  setup_worked_example(engine);
  auto script = generate_triggers(engine.catalog(), engine.registry(),
                                  "PERSONS");
  EXPECT_NE(script.sql.find("--   nec (consolidated)"), std::string::npos);
  EXPECT_NE(script.sql.find("--   ec (existence)"), std::string::npos);
  EXPECT_NE(script.sql.find("BEFORE INSERT ON \"PERSONS\""),
            std::string::npos);
  EXPECT_NE(script.sql.find("BEFORE UPDATE ON \"PERSONS\""),
            std::string::npos);
}

TEST(Codegen, SingleQuotesInMessagesAreEscaped) {
  Engine engine(testutil::test_clock());
  engine.declare_set("T");
  engine.declare_function("a", "T", testutil::integer_domain());
  engine.declare_function("b", "T", testutil::integer_domain());
  // The library API does not restrict constraint names; a quote in the name
  // flows into the message and must be doubled inside the SQL literal.
  ASSERT_TRUE(engine
                  .add_constraint("it's", ConstraintKind::Existence, {"a"},
                                  {"b"})
                  .admitted);
  auto script = generate_triggers(engine.catalog(), engine.registry(), "T");
  EXPECT_NE(script.sql.find("constraint it''s"), std::string::npos);
}
