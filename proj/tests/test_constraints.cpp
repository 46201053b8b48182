#include <gtest/gtest.h>

#include <random>

#include "nullity/engine.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace nullity;
using testutil::iv;
using testutil::tv;

TEST(Admission, WorkedExampleConstraintsAdmittedOnEmptyInstance) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  auto ec = engine.add_constraint("ec", ConstraintKind::Existence,
                                  {"SSN", "ITIN"}, {"BirthDate", "Sex"});
  ASSERT_TRUE(ec.admitted) << ec.message;
  EXPECT_EQ(ec.constraint->base, "PERSONS");
  auto nec = engine.add_constraint("nec", ConstraintKind::Consolidated, {},
                                   {"SSN", "ITIN"});
  ASSERT_TRUE(nec.admitted) << nec.message;
}

TEST(Admission, DuplicateNameRejectedBeforeAnyOtherCheck) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  ASSERT_TRUE(engine
                  .add_constraint("ec", ConstraintKind::Existence, {"SSN"},
                                  {"BirthDate"})
                  .admitted);
  engine.reset_admission_counters();
  auto res = engine.add_constraint("ec", ConstraintKind::Existence, {"ITIN"},
                                   {"Sex"});
  ASSERT_FALSE(res.admitted);
  EXPECT_EQ(res.message,
            "Request rejected: ec is the name of another constraint! Please "
            "choose a unique constraint name!");
  const auto& k = engine.admission_counters();
  EXPECT_EQ(k.name_checks, 1u);
  EXPECT_EQ(k.arity_checks, 0u);
  EXPECT_EQ(k.compat_checks, 0u);
  EXPECT_EQ(k.totality_checks, 0u);
  EXPECT_EQ(k.instance_rows, 0u);
  EXPECT_EQ(engine.constraints().size(), 1u);
}

TEST(Admission, EmptyLeftExistenceAdvisesTotality) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  engine.reset_admission_counters();
  auto res = engine.add_constraint("ec0", ConstraintKind::Existence, {},
                                   {"BirthDate", "Sex"});
  ASSERT_FALSE(res.admitted);
  EXPECT_EQ(res.message,
            "Request rejected: please add to C the constraint "
            "BirthDate•Sex total instead!");
  const auto& k = engine.admission_counters();
  EXPECT_EQ(k.arity_checks, 1u);
  EXPECT_EQ(k.compat_checks, 0u);
  EXPECT_EQ(k.totality_checks, 0u);
}

TEST(Admission, IncompatibleDomainsRejected) {
  Engine engine(testutil::test_clock());
  engine.declare_set("PERSONS");
  engine.declare_set("CITIES");
  engine.declare_set("COUNTRIES");
  engine.declare_function("BirthPlace", "PERSONS", Codomain{"CITIES"});
  engine.declare_function("Country", "CITIES", Codomain{"COUNTRIES"});
  engine.reset_admission_counters();
  auto res = engine.add_constraint("bad", ConstraintKind::Existence,
                                   {"BirthPlace"}, {"Country"});
  ASSERT_FALSE(res.admitted);
  EXPECT_EQ(res.message,
            "Request rejected: BirthPlace and Country do not have compatible "
            "domains!");
  const auto& k = engine.admission_counters();
  EXPECT_EQ(k.compat_checks, 1u);
  EXPECT_EQ(k.totality_checks, 0u);
  EXPECT_EQ(k.instance_rows, 0u);
}

TEST(Admission, TotalComponentRejectedFailFast) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  engine.declare_function("Name", "PERSONS", testutil::text_domain(), true);

  engine.reset_admission_counters();
  auto right_total = engine.add_constraint(
      "c1", ConstraintKind::Existence, {"SSN"}, {"Name", "Sex"});
  ASSERT_FALSE(right_total.admitted);
  EXPECT_EQ(right_total.message,
            "Request rejected: Name is totally defined!");
  // One left check, then stopped at the first right component.
  EXPECT_EQ(engine.admission_counters().totality_checks, 2u);
  EXPECT_EQ(engine.admission_counters().instance_rows, 0u);

  engine.reset_admission_counters();
  auto left_total = engine.add_constraint(
      "c2", ConstraintKind::Existence, {"Name", "SSN"}, {"Sex"});
  ASSERT_FALSE(left_total.admitted);
  EXPECT_EQ(left_total.message, "Request rejected: Name is totally defined!");
  EXPECT_EQ(engine.admission_counters().totality_checks, 1u);
}

TEST(Admission, ViolatedInstanceRejectedNamingFirstRow) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  // A committed row that has SSN but no BirthDate.
  auto s = engine.open_insert("PERSONS");
  s.set_value("SSN", iv(123456789));
  s.set_value("Sex", tv("F"));
  ASSERT_TRUE(engine.save(s).ok);

  engine.reset_admission_counters();
  auto res = engine.add_constraint("ec", ConstraintKind::Existence,
                                   {"SSN", "ITIN"}, {"BirthDate", "Sex"});
  ASSERT_FALSE(res.admitted);
  EXPECT_EQ(res.message, "Request rejected: ec is violated for 1!");
  const auto& k = engine.admission_counters();
  EXPECT_EQ(k.totality_checks, 4u);  // every component was cleared first
  EXPECT_EQ(k.instance_rows, 1u);
  EXPECT_TRUE(engine.constraints().empty());
}

TEST(Admission, InstanceScanStopsAtFirstViolator) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  for (int i = 0; i < 3; ++i) {
    auto s = engine.open_insert("PERSONS");
    s.set_value("Sex", tv("F"));
    ASSERT_TRUE(engine.save(s).ok);
  }
  auto bad = engine.open_insert("PERSONS");
  bad.set_value("SSN", iv(5));
  ASSERT_TRUE(engine.save(bad).ok);  // key 4, violates the ec below
  auto more = engine.open_insert("PERSONS");
  more.set_value("SSN", iv(6));
  ASSERT_TRUE(engine.save(more).ok);  // key 5, also violates

  engine.reset_admission_counters();
  auto res = engine.add_constraint("ec", ConstraintKind::Existence,
                                   {"SSN", "ITIN"}, {"BirthDate", "Sex"});
  ASSERT_FALSE(res.admitted);
  EXPECT_EQ(res.message, "Request rejected: ec is violated for 4!");
  EXPECT_EQ(engine.admission_counters().instance_rows, 4u);
}

TEST(Admission, UsageErrorsAreExceptionsNotMessages) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  EXPECT_THROW(engine.add_constraint("x", ConstraintKind::Existence,
                                     {"Nope"}, {"Sex"}),
               EngineError);
  EXPECT_THROW(engine.add_constraint("x", ConstraintKind::NonExistence, {},
                                     {"Sex", "BirthDate"}),
               EngineError);
  EXPECT_THROW(engine.add_constraint("x", ConstraintKind::Consolidated, {},
                                     {"Sex"}),
               EngineError);
  EXPECT_THROW(engine.add_constraint("x", ConstraintKind::Consolidated,
                                     {"SSN"}, {"Sex", "BirthDate"}),
               EngineError);
}

TEST(Deletion, ConfirmedDeleteUnregistersHook) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  testutil::admit_ec_nec(engine);

  auto res = engine.delete_constraint("ec", true);
  EXPECT_EQ(res.status, DeleteStatus::Deleted);
  ASSERT_EQ(engine.constraints().size(), 1u);
  EXPECT_EQ(engine.constraints().front().name, "nec");

  // Saves opened afterwards no longer run ec.
  auto s = engine.open_insert("PERSONS");
  s.set_value("SSN", iv(123456789));
  s.set_value("Sex", tv("F"));
  EXPECT_TRUE(engine.save(s).ok);
}

TEST(Deletion, UnknownNameMessage) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  auto res = engine.delete_constraint("nope", true);
  EXPECT_EQ(res.status, DeleteStatus::UnknownName);
  EXPECT_EQ(res.message,
            "Request rejected: nope is not a known constraint name!");
}

TEST(Deletion, UnconfirmedDeleteIsANoOp) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  testutil::admit_ec_nec(engine);
  auto res = engine.delete_constraint("ec", false);
  EXPECT_EQ(res.status, DeleteStatus::Unconfirmed);
  EXPECT_TRUE(res.message.empty());
  EXPECT_EQ(engine.constraints().size(), 2u);
}

TEST(Deletion, RunsNoAdmissionChecks) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  testutil::admit_ec_nec(engine);
  engine.reset_admission_counters();
  ASSERT_EQ(engine.delete_constraint("ec", true).status,
            DeleteStatus::Deleted);
  const auto& k = engine.admission_counters();
  EXPECT_EQ(k.name_checks + k.arity_checks + k.compat_checks +
                k.totality_checks + k.instance_rows,
            0u);
}

TEST(Registry, ListKeepsDeclarationOrder) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  EXPECT_TRUE(engine.constraints().empty());
  ASSERT_TRUE(engine
                  .add_constraint("nec", ConstraintKind::Consolidated, {},
                                  {"SSN", "ITIN"})
                  .admitted);
  ASSERT_TRUE(engine
                  .add_constraint("ec", ConstraintKind::Existence,
                                  {"SSN", "ITIN"}, {"BirthDate", "Sex"})
                  .admitted);
  std::vector<std::string> names;
  for (const auto& c : engine.constraints()) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"nec", "ec"}));

  ASSERT_EQ(engine.delete_constraint("nec", true).status,
            DeleteStatus::Deleted);
  names.clear();
  for (const auto& c : engine.constraints()) names.push_back(c.name);
  EXPECT_EQ(names, std::vector<std::string>{"ec"});
}

TEST(Registry, DeleteThenIdenticalAddRestoresBehavior) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  testutil::admit_ec_nec(engine);

  auto attempt = [&](Engine& e) {
    auto s = e.open_insert("PERSONS");
    s.set_value("SSN", iv(123456789));
    s.set_value("Sex", tv("F"));
    auto res = e.save(s);
    return res.ok ? std::string("ok") : res.violation->message;
  };
  std::string before = attempt(engine);

  ASSERT_EQ(engine.delete_constraint("ec", true).status,
            DeleteStatus::Deleted);
  ASSERT_TRUE(engine
                  .add_constraint("ec", ConstraintKind::Existence,
                                  {"SSN", "ITIN"}, {"BirthDate", "Sex"})
                  .admitted);
  EXPECT_EQ(attempt(engine), before);
}

TEST(Registry, ValidateInstanceFindsAllViolatorsInKeyOrder) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  // x1 violates the ec below, x2 complies, x3 violates.
  auto a = engine.open_insert("PERSONS");
  a.set_value("SSN", iv(123456789));
  a.set_value("Sex", tv("F"));
  ASSERT_TRUE(engine.save(a).ok);
  auto b = engine.open_insert("PERSONS");
  b.set_value("SSN", iv(2));
  b.set_value("BirthDate", testutil::dv(1990, 1, 1));
  b.set_value("Sex", tv("M"));
  ASSERT_TRUE(engine.save(b).ok);
  auto c = engine.open_insert("PERSONS");
  c.set_value("ITIN", iv(3));
  ASSERT_TRUE(engine.save(c).ok);

  // The instance violates ec, so admission refuses it; validate the
  // hand-built constraint through a standalone registry instead.
  ConstraintRegistry registry(engine.catalog(), engine.store());
  auto added = registry.add("ec", ConstraintKind::Existence, {"SSN", "ITIN"},
                            {"BirthDate", "Sex"});
  ASSERT_FALSE(added.admitted);
  Constraint ec;
  ec.name = "ec";
  ec.kind = ConstraintKind::Existence;
  ec.left.components = {"SSN", "ITIN"};
  ec.right.components = {"BirthDate", "Sex"};
  ec.base = "PERSONS";
  EXPECT_EQ(registry.validate_instance(ec),
            (std::vector<RowKey>{1, 3}));
}

TEST(Registry, ValidateInstanceEmptyTable) {
  Engine engine(testutil::test_clock());
  testutil::declare_persons(engine);
  testutil::admit_ec_nec(engine);
  EXPECT_TRUE(engine.validate_instance("ec").empty());
  EXPECT_THROW(engine.validate_instance("nope"), EngineError);
}

// Exhaustive oracle check of validate_instance over every null-pattern of
// six columns under both worked-example constraints.
TEST(Registry, ValidateInstanceAgreesWithOracleOver64Patterns) {
  Engine engine(testutil::test_clock());
  engine.declare_set("T");
  std::vector<std::string> cols;
  for (int i = 0; i < 6; ++i) {
    cols.push_back("F" + std::to_string(i));
    engine.declare_function(cols.back(), "T", testutil::integer_domain());
  }
  // Load all 64 patterns as trusted rows: key = mask + 1.
  std::string csv_text = "_x";
  for (const auto& c : cols) csv_text += "," + c;
  csv_text += "\n";
  for (unsigned mask = 0; mask < 64; ++mask) {
    csv_text += std::to_string(mask + 1);
    for (int i = 0; i < 6; ++i)
      csv_text += (mask >> i) & 1u ? ",1" : ",";
    csv_text += "\n";
  }
  ASSERT_TRUE(engine.load_csv("T", csv_text, /*trusted=*/true).ok);

  ConstraintRegistry registry(engine.catalog(), engine.store());
  Constraint ec;
  ec.name = "ec";
  ec.kind = ConstraintKind::Existence;
  ec.left.components = {cols[0], cols[1]};
  ec.right.components = {cols[2], cols[3]};
  ec.base = "T";
  Constraint nec;
  nec.name = "nec";
  nec.kind = ConstraintKind::Consolidated;
  nec.right.components = {cols[4], cols[5]};
  nec.base = "T";

  std::vector<RowKey> expect_ec, expect_nec;
  for (unsigned mask = 0; mask < 64; ++mask) {
    auto bit = [&](int i) { return ((mask >> i) & 1u) != 0; };
    if (oracle::violated(ConstraintKind::Existence, {bit(0), bit(1)},
                         {bit(2), bit(3)}))
      expect_ec.push_back(mask + 1);
    if (oracle::violated(ConstraintKind::Consolidated, {},
                         {bit(4), bit(5)}))
      expect_nec.push_back(mask + 1);
  }
  EXPECT_EQ(registry.validate_instance(ec), expect_ec);
  EXPECT_EQ(registry.validate_instance(nec), expect_nec);
}

// Random catalogs: admission never lets a totally defined component through.
TEST(Registry, AdmittedConstraintsNeverHaveTotalComponents) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    Engine engine(testutil::test_clock());
    engine.declare_set("T");
    std::vector<std::string> fns;
    std::vector<bool> total;
    for (int i = 0; i < 6; ++i) {
      fns.push_back("F" + std::to_string(i));
      total.push_back(rng() % 3 == 0);
      engine.declare_function(fns.back(), "T", testutil::integer_domain(),
                              total.back());
    }
    std::vector<std::string> left{fns[rng() % 6]}, right{fns[rng() % 6]};
    while (right.front() == left.front()) right.front() = fns[rng() % 6];
    auto res = engine.add_constraint("c", ConstraintKind::Existence, left,
                                     right);
    bool any_total = total[left.front().back() - '0'] ||
                     total[right.front().back() - '0'];
    EXPECT_EQ(res.admitted, !any_total);
    if (!res.admitted) {
      const std::string& first_total =
          total[left.front().back() - '0'] ? left.front() : right.front();
      EXPECT_EQ(res.message, "Request rejected: " + first_total +
                                 " is totally defined!");
    }
  }
}
