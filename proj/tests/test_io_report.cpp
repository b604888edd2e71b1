#include <random>
#include <string>

#include "doctest.h"
#include "fairsub/io.hpp"
#include "fairsub/report.hpp"
#include "fairsub/subsidy.hpp"
#include "support.hpp"

using namespace fairsub;
using fairsub::test::ints;
using fairsub::test::kind_of;
using fairsub::test::q;

namespace {

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

io::AllocationFile solution_of(const Report& r) {
  io::Json doc;
  doc["allocation"] = r.doc["allocation"];
  doc["subsidy"] = r.doc["subsidy"];
  return io::allocation_from_json(doc);
}

}  // namespace

TEST_CASE("rationals in JSON") {
  CHECK(io::rational_from_json(io::Json(3)) == Rational(3));
  CHECK(io::rational_from_json(io::Json("-3/4")) == Rational(-3, 4));
  CHECK(io::rational_to_json(Rational(6, 4)) == io::Json("3/2"));
  CHECK(kind_of([] { io::rational_from_json(io::Json(0.5)); }) == ErrorKind::Input);
  CHECK(kind_of([] { io::rational_from_json(io::Json("0.5")); }) == ErrorKind::Input);
  CHECK(kind_of([] { io::rational_from_json(io::Json(true)); }) == ErrorKind::Input);
}

TEST_CASE("instance documents round-trip") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 4, m = rng() % 6;
    const Instance inst = t % 2 ? io::random_mixed(n, m, rng()) : io::random_general_table(n, m, rng());
    const std::string text = io::dump(io::instance_to_json(inst));
    const Instance back = io::instance_from_json(io::parse(text));
    CHECK(io::dump(io::instance_to_json(back)) == text);
    CHECK(back.is_additive() == inst.is_additive());
    for (std::size_t i = 0; i < n; ++i) {
      Bundle all;
      for (std::size_t e = 0; e < m; ++e) all.push_back(e);
      CHECK(back.value(i, all) == inst.value(i, all));
    }
  }
}

TEST_CASE("instance documents are validated") {
  const char* good = R"({"schema_version":"1","n":2,"m":1,"valuation_kind":"additive","values":[["1/2"],[1]]})";
  CHECK_NOTHROW(io::instance_from_json(io::parse(good)));

  const char* bad[] = {
      R"({"schema_version":"1","n":2,"m":1,"valuation_kind":"additive","values":[["0.5"],[1]]})",
      R"({"schema_version":"1","n":2,"m":1,"valuation_kind":"additive","values":[[0.5],[1]]})",
      R"({"schema_version":"1","n":3,"m":1,"valuation_kind":"additive","values":[["1/2"],[1]]})",
      R"({"schema_version":"1","n":2,"m":2,"valuation_kind":"additive","values":[["1/2"],[1]]})",
      R"({"schema_version":"1","n":2,"m":1,"valuation_kind":"additive","values":[["3/2"],[1]]})",
      R"({"schema_version":"2","n":2,"m":1,"valuation_kind":"additive","values":[["1/2"],[1]]})",
      R"({"schema_version":"1","n":1,"m":1,"valuation_kind":"table","values":[{"":"0"}]})",
      R"({"schema_version":"1","n":1,"m":1,"valuation_kind":"cubic","values":[]})",
      R"({"n":1)",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK(kind_of([&] { io::instance_from_json(io::parse(text)); }) == ErrorKind::Input);
  }
}

TEST_CASE("table documents use comma-joined subsets") {
  const char* text = R"({"schema_version":"1","n":1,"m":2,"valuation_kind":"table",
      "values":[{"":"0","0":"1/2","1":"1","0,1":"1/2"}]})";
  const Instance inst = io::instance_from_json(io::parse(text));
  CHECK(inst.value(0, Bundle{0, 1}) == Rational(1, 2));
  CHECK(inst.classify_item(0, 0) == ItemClass::Mixed);
}

TEST_CASE("allocation documents") {
  const SubsidyVector p = ints({0, 1});
  const io::Json doc = io::allocation_to_json(Allocation({{0, 2}, {1}}), &p);
  const io::AllocationFile back = io::allocation_from_json(doc);
  CHECK(back.allocation == Allocation({{0, 2}, {1}}));
  REQUIRE(back.subsidy);
  CHECK(*back.subsidy == p);
  CHECK_FALSE(io::allocation_from_json(io::allocation_to_json(Allocation(std::vector<Bundle>{{0}}))).subsidy);
  CHECK(kind_of([] { io::allocation_from_json(io::parse(R"({"allocation":[[0,-1]]})")); }) ==
        ErrorKind::Input);
}

TEST_CASE("generators") {
  const Instance ex = io::example1(3);
  CHECK(ex.agents() == 3);
  CHECK(ex.items() == 12);
  for (std::size_t e = 0; e < 4; ++e) CHECK(ex.item_value(0, e) == Rational(3, 4));
  for (std::size_t e = 4; e < 12; ++e) CHECK(ex.item_value(0, e) == Rational(0));
  CHECK(ex.item_value(1, 0) == Rational(1));
  CHECK(kind_of([] { io::example1(1); }) == ErrorKind::Input);

  const Instance one = io::single_item(2);
  CHECK(one.items() == 1);
  CHECK(one.item_value(0, 0) == Rational(1));
  CHECK(one.item_value(1, 0) == Rational(1));

  const auto a = io::dump(io::instance_to_json(io::generate("random-additive-goods", 3, 6, 7).instance));
  const auto b = io::dump(io::instance_to_json(io::generate("random-additive-goods", 3, 6, 7).instance));
  CHECK(a == b);
  CHECK(a != io::dump(io::instance_to_json(io::generate("random-additive-goods", 3, 6, 8).instance)));
  CHECK(io::generate("example1", 4, 0, 0).canonical == io::example1_allocation(4));
  CHECK_FALSE(io::generate("single-item", 4, 0, 0).canonical);
  CHECK(kind_of([] { io::generate("lottery", 2, 2, 0); }) == ErrorKind::Input);
}

TEST_CASE("random families stay in their classes") {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 4, m = rng() % 8;
    CHECK(io::random_additive_goods(n, m, rng()).instance_class() == InstanceClass::Monotone);
    CHECK(io::random_mixed(n, m, rng()).instance_class() != InstanceClass::General);
    CHECK(io::random_monotone_table(n, m, rng()).instance_class() == InstanceClass::Monotone);
  }
}

TEST_CASE("solve report on the tight family, basic mode") {
  SolveOptions opts;
  opts.mode = SolveMode::Basic;
  opts.start = io::example1_allocation(3);
  const Report r = solve_report(io::example1(3), opts);
  CHECK(r.verdict == Verdict::Ok);
  CHECK(contains(r.text, "ef1_bound max 2 <= 2 PASS"));
  CHECK(contains(r.text, "ef1_bound total 3 <= 3 PASS"));
  CHECK(r.doc["subsidy"] == io::Json::array({"0", "1", "2"}));
  CHECK(r.doc["total_subsidy"] == "3");
  CHECK(r.doc["max_subsidy"] == "2");
  CHECK(r.doc["bounds"]["ef1_bound"]["applicable"] == true);
  CHECK(r.doc["certificates"]["envy_free"] == true);
  CHECK(r.doc["certificates"]["input_ef1"] == true);
  CHECK_FALSE(r.doc.contains("trace"));
}

TEST_CASE("solve report on the tight family, improved mode") {
  SolveOptions opts;
  opts.mode = SolveMode::Improved;
  opts.start = io::example1_allocation(3);
  const Report r = solve_report(io::example1(3), opts);
  CHECK(r.verdict == Verdict::Ok);
  CHECK(contains(r.text, "improved_bound max 1 <= 3/2 PASS"));
  CHECK(contains(r.text, "improved_bound total 1 <= 5/2 PASS"));
  CHECK(r.doc["trace"]["triggered"] == true);
  CHECK(r.doc["trace"]["e_star"] == 0);
  CHECK(r.doc["trace"]["longest_path"] == io::Json::array({2, 1, 0}));
  CHECK(r.doc["trace"]["s"] == io::Json::array({"0", "0"}));
}

TEST_CASE("solve report with nothing to allocate") {
  const Instance empty = Instance::additive({{}, {}, {}});
  const Report r = solve_report(empty, {});
  CHECK(r.verdict == Verdict::Ok);
  CHECK(r.doc["subsidy"] == io::Json::array({"0", "0", "0"}));
  CHECK_FALSE(contains(r.text, "FAIL"));
}

TEST_CASE("solve report mode selection") {
  CHECK(solve_report(io::example1(3), {}).doc["mode"] == "improved");
  CHECK(solve_report(io::single_item(2), {}).doc["mode"] == "basic");
  CHECK(solve_report(Instance::additive({{q("-1")}, {q("1")}, {q("1")}}), {}).doc["mode"] == "basic");
  SolveOptions improved;
  improved.mode = SolveMode::Improved;
  CHECK(kind_of([&] { solve_report(io::single_item(2), improved); }) == ErrorKind::Precondition);
}

TEST_CASE("a non-EF1 start marks the EF1 bound as not applicable") {
  SolveOptions opts;
  opts.mode = SolveMode::Basic;
  opts.start = Allocation({{}, {0, 1}});
  const Report r = solve_report(Instance::additive({{1, 1}, {1, 1}}), opts);
  CHECK(r.doc["certificates"]["input_ef1"] == false);
  CHECK(r.doc["bounds"]["ef1_bound"]["applicable"] == false);
  CHECK(contains(r.text, "not applicable"));
}

TEST_CASE("every solve report re-verifies with check") {
  std::mt19937_64 rng(63);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 2 + rng() % 3, m = rng() % 8;
    const Instance inst = t % 3 == 0   ? io::random_mixed(n, m, rng())
                          : t % 3 == 1 ? io::random_additive_goods(n, m, rng())
                                       : io::random_monotone_table(n, m, rng());
    const Report r = solve_report(inst, {});
    CHECK(r.verdict == Verdict::Ok);
    const Report c = check_report(inst, solution_of(r));
    CHECK(c.verdict == Verdict::Ok);
    CHECK(c.doc["envy_free"] == true);
  }
}

TEST_CASE("solve reports are deterministic") {
  const Instance inst = io::random_monotone_table(4, 7, 5);
  CHECK(io::dump(solve_report(inst, {}).doc) == io::dump(solve_report(inst, {}).doc));
}

TEST_CASE("check report") {
  const Instance inst = io::example1(3);
  const Allocation a = io::example1_allocation(3);
  CHECK(check_report(inst, {a, ints({0, 1, 2})}).verdict == Verdict::Ok);

  const Report bad = check_report(inst, {a, ints({0, 0, 0})});
  CHECK(bad.verdict == Verdict::VerificationFailed);
  CHECK(bad.doc["max_violation"] == "1");
  REQUIRE(bad.doc["violations"].size() == 2);
  CHECK(bad.doc["violations"][0]["agent"] == 1);
  CHECK(bad.doc["violations"][0]["envied"] == 0);
  CHECK(bad.doc["violations"][0]["amount"] == "1");

  const Instance empty = Instance::additive({{}, {}});
  CHECK(check_report(empty, {Allocation({{}, {}}), ints({0, 0})}).verdict == Verdict::Ok);
  CHECK(kind_of([&] { check_report(inst, {a, std::nullopt}); }) == ErrorKind::Input);
}

TEST_CASE("oracle report") {
  const Report single = oracle_report(io::single_item(2), {});
  CHECK(single.verdict == Verdict::Ok);
  CHECK(single.doc["solver_basic"]["total_subsidy"] == "1");
  CHECK(single.doc["global_minimum"]["total_subsidy"] == "1");
  CHECK(single.doc["global_minimum"]["basic_gap"] == "0");
  CHECK(single.doc["cross_check"]["subsidy_vectors_equal"] == true);

  const Report empty = oracle_report(Instance::additive({{}, {}, {}}), {});
  CHECK(empty.doc["global_minimum"]["total_subsidy"] == "0");
  CHECK(empty.doc["global_minimum"]["basic_gap"] == "0");
  CHECK(empty.doc["global_minimum"]["improved_gap"] == "0");

  OracleOptions small;
  small.budget.max_allocations = 10;
  const Report partial = oracle_report(io::example1(2), small);
  CHECK(partial.verdict == Verdict::ResourceExceeded);
  CHECK(partial.doc["global_minimum"].contains("skipped"));
  CHECK(partial.doc["cross_check"]["subsidy_vectors_equal"] == true);
}
