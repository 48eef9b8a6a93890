#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "ixm/error.hpp"
#include "ixm/finite_model.hpp"
#include "ixm/harness.hpp"

using ixm::FMap;
using ixm::FSet;

namespace {

  std::vector<FSet> predicted(int n) {
    std::vector<FSet> v;
    for (auto const& m : ixm::predicted_finite_maximals(n)) {
      v.push_back(m.set);
    }
    return v;
  }

  ixm::ConditionResult const& condition(std::vector<ixm::ConditionResult> const& r, std::string const& label) {
    for (auto const& c : r) {
      if (c.label == label) {
        return c;
      }
    }
    FAIL("missing condition " << label);
    return r.front();
  }

}  // namespace

TEST_CASE("suite registry") {
  CHECK(ixm::suites().size() >= 19);
  for (auto const& s : ixm::suites()) {
    CHECK_FALSE(s.name.empty());
  }
  CHECK_THROWS_AS(ixm::run_suite("no-such-suite", 1, 1), ixm::InvalidParameter);
}

TEST_CASE("reports are reproducible and independent of the fan-out") {
  for (auto const* name :
       {"rank-relations", "closure-P", "duality", "padding", "ultrafilter-forms", "ideal-in-every-class"}) {
    auto a = ixm::run_suite(name, 99, 40);
    auto b = ixm::run_suite(name, 99, 40);
    auto c = ixm::run_suite_serial(name, 99, 40);
    CHECK(a.hash == b.hash);
    CHECK(a.hash == c.hash);
    CHECK(a.failures == c.failures);
    CHECK(a.cases == c.cases);
    // the seed is part of the report
    CHECK(ixm::run_suite(name, 100, 40).hash != a.hash);
  }
}

TEST_CASE("case counts") {
  CHECK(ixm::run_suite("rank-relations", 1, 10).cases == 10 + 34 * 34);
  CHECK(ixm::run_suite("closure-S", 1, 3).cases == 3 * 6);
  CHECK(ixm::run_suite("nxn", 1, 5).cases == 2);
  // 0 picks the default
  CHECK(ixm::run_suite("mutt", 1, 0).cases == 200);
}

TEST_CASE("records are one JSON object per line") {
  auto r = ixm::run_suite("witnesses", 5, 0);
  REQUIRE(r.passed());
  r.failures.push_back({3, "fail", "f = chart { }", "made up"});
  std::istringstream in(ixm::report_records(r));
  std::string        line;
  std::vector<nlohmann::json> rows;
  while (std::getline(in, line)) {
    rows.push_back(nlohmann::json::parse(line));
  }
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["suite"] == "witnesses");
  CHECK(rows[0]["seed"] == 5);
  CHECK(rows[0]["failures"] == 1);
  CHECK(rows[1]["index"] == 3);
  CHECK(rows[1]["input"] == "f = chart { }");
  CHECK(ixm::report_text(r).find("FAIL") != std::string::npos);
}

TEST_CASE("conditions on the predicted families") {
  for (int n = 2; n <= 4; ++n) {
    auto r = ixm::check_conditions({FMap::identity(n)}, predicted(n), n);
    for (auto const* l : {"i", "ii", "iii", "iv"}) {
      CHECK_MESSAGE(condition(r, l).passed, n << " " << l);
    }
    CHECK_FALSE(condition(r, "v").checked);
  }
  // members built from proper subgroups do not contain Sym(3)
  auto r3 = ixm::check_conditions(ixm::all_perms(3), predicted(3), 3);
  CHECK_FALSE(condition(r3, "i").passed);
  CHECK(condition(r3, "ii").passed);
  CHECK(condition(r3, "iii").passed);
  CHECK(condition(r3, "iv").passed);
  // restricted to the members containing Sym(3)
  std::vector<FSet> with_sym;
  for (auto const& m : predicted(3)) {
    if (m.contains(FMap::from({1, 2, 0})) && m.contains(FMap::from({1, 0, 2}))) {
      with_sym.push_back(m);
    }
  }
  REQUIRE(with_sym.size() == 1);
  CHECK(condition(ixm::check_conditions(ixm::all_perms(3), with_sym, 3), "i").passed);
}

TEST_CASE("conditions report counterexamples") {
  auto fam = predicted(3);
  fam.push_back(fam.front());
  auto r = ixm::check_conditions({FMap::identity(3)}, fam, 3);
  CHECK_FALSE(condition(r, "iii").passed);
  CHECK_FALSE(condition(r, "iii").counterexample.empty());

  // {0 -> 1, empty} is closed but its inverse is not in the family
  FSet t = ixm::closure({FMap::from({1, -1, -1})});
  REQUIRE(t.size() == 2);
  r = ixm::check_conditions({}, {t}, 3);
  CHECK(condition(r, "ii").passed);
  CHECK_FALSE(condition(r, "iv").passed);

  // not closed
  FSet bad = FSet::from({FMap::from({1, -1, -1})});
  CHECK_FALSE(condition(ixm::check_conditions({}, {bad}, 3), "ii").passed);
  // all of I_2
  CHECK_FALSE(condition(ixm::check_conditions({}, {FSet::from(ixm::all_charts(2))}, 2), "ii").passed);

  CHECK_THROWS_AS(ixm::check_conditions({}, {}, 6), ixm::PreconditionError);
  CHECK_THROWS_AS(ixm::check_conditions({FMap::identity(2)}, {}, 3), ixm::PreconditionError);
}
