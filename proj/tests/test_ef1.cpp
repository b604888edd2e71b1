#include <random>

#include "doctest.h"
#include "fairsub/ef1.hpp"
#include "fairsub/io.hpp"
#include "support.hpp"

using namespace fairsub;
using fairsub::test::kind_of;
using fairsub::test::q;

TEST_CASE("envy_cycles on small cases") {
  const Instance solo = Instance::additive({{q("1/2"), q("1"), q("0")}});
  CHECK(envy_cycles(solo) == Allocation(std::vector<Bundle>{{0, 1, 2}}));

  const Instance zeros = Instance::additive({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  const Allocation z = envy_cycles(zeros);
  CHECK_NOTHROW(z.validate(zeros));
  CHECK(is_ef1(zeros, z));

  const Instance ex = io::example1(3);
  CHECK(is_ef1(ex, envy_cycles(ex)));
}

TEST_CASE("envy_cycles rejects non-monotone instances") {
  const Instance chores = Instance::additive({{q("-1")}, {q("1")}});
  CHECK(kind_of([&] { envy_cycles(chores); }) == ErrorKind::Precondition);
}

TEST_CASE("envy_cycles is EF1 on random monotone instances") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 5, m = rng() % 11;
    const Instance inst = t % 2 ? io::random_additive_goods(n, m, rng())
                                : io::random_monotone_table(n, m, rng());
    const Allocation a = envy_cycles(inst);
    CHECK_NOTHROW(a.validate(inst));
    CHECK(is_ef1(inst, a));
    CHECK(envy_cycles(inst) == a);
  }
}

TEST_CASE("double_round_robin symmetric cases") {
  const Instance goods = Instance::additive({{1, 1}, {1, 1}});
  const Allocation g = double_round_robin(goods);
  CHECK(g[0].size() == 1);
  CHECK(g[1].size() == 1);
  CHECK(is_ef1(goods, g));

  const Instance chores = Instance::additive({{-1, -1}, {-1, -1}});
  const Allocation c = double_round_robin(chores);
  CHECK(c[0].size() == 1);
  CHECK(c[1].size() == 1);
  CHECK(is_ef1(chores, c));
}

TEST_CASE("double_round_robin needs additive valuations") {
  const Instance tab = Instance::table(1, {{q("0"), q("1")}, {q("0"), q("1")}});
  CHECK(kind_of([&] { double_round_robin(tab); }) == ErrorKind::Precondition);
}

TEST_CASE("double_round_robin is EF1 on random mixed instances") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3, m = 6;
    const Instance inst = io::random_mixed(n, m, rng());
    const Allocation a = double_round_robin(inst);
    CHECK_NOTHROW(a.validate(inst));
    CHECK(is_ef1(inst, a));
  }
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 5, m = rng() % 13;
    const Instance inst = io::random_mixed(n, m, rng());
    CHECK(is_ef1(inst, double_round_robin(inst)));
  }
}

TEST_CASE("exhaustive_ef1") {
  const auto first = exhaustive_ef1(io::single_item(2));
  REQUIRE(first);
  CHECK(*first == Allocation({{0}, {}}));

  const Instance solo = Instance::additive({{1, 1}});
  CHECK(*exhaustive_ef1(solo) == Allocation(std::vector<Bundle>{{0, 1}}));

  const Instance wide = Instance::additive(std::vector<std::vector<Rational>>(3, std::vector<Rational>(13)));
  CHECK(kind_of([&] { exhaustive_ef1(wide); }) == ErrorKind::Resource);
  CHECK(kind_of([&] { exhaustive_ef1(io::single_item(4), 3); }) == ErrorKind::Resource);
}

TEST_CASE("two agents with general tables always have an EF1 allocation") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = rng() % 7;
    const Instance inst = io::random_general_table(2, m, rng());
    const auto a = exhaustive_ef1(inst);
    REQUIRE(a);
    CHECK(is_ef1(inst, *a));
  }
}

TEST_CASE("find_ef1 dispatch") {
  CHECK(find_ef1(io::example1(3)).method == Ef1Method::EnvyCycles);
  CHECK(find_ef1(Instance::additive({{q("1"), q("-1/2")}, {q("1/2"), q("-1")}})).method ==
        Ef1Method::DoubleRoundRobin);

  std::mt19937_64 rng(24);
  Instance general = io::random_general_table(2, 5, rng());
  while (general.instance_class() != InstanceClass::General)
    general = io::random_general_table(2, 5, rng());
  const Ef1Result r = find_ef1(general);
  CHECK(r.method == Ef1Method::Exhaustive);
  CHECK(is_ef1(general, r.allocation));
}

TEST_CASE("find_ef1 reports unsupported instances with a hint") {
  std::mt19937_64 rng(25);
  Instance big = io::random_general_table(4, 12, rng());
  while (big.instance_class() != InstanceClass::General) big = io::random_general_table(4, 12, rng());
  try {
    find_ef1(big);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
    CHECK(std::string(e.what()).find("supply an EF1 allocation") != std::string::npos);
  }
  CHECK(kind_of([] { find_ef1(Instance::additive({{q("-1")}, {q("1")}}), Ef1Method::EnvyCycles); }) ==
        ErrorKind::Precondition);
}

TEST_CASE("method names round-trip") {
  for (Ef1Method m : {Ef1Method::EnvyCycles, Ef1Method::DoubleRoundRobin, Ef1Method::Exhaustive,
                      Ef1Method::Auto})
    CHECK(parse_ef1_method(to_string(m)) == m);
  CHECK(kind_of([] { parse_ef1_method("greedy"); }) == ErrorKind::Input);
}

TEST_CASE("allocation_count saturates") {
  CHECK(allocation_count(3, 4) == 81);
  CHECK(allocation_count(5, 0) == 1);
  CHECK(allocation_count(10, 40) == UINT64_MAX);
}
