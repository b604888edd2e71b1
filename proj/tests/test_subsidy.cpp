#include <algorithm>
#include <random>

#include "doctest.h"
#include "fairsub/ef1.hpp"
#include "fairsub/io.hpp"
#include "fairsub/oracle.hpp"
#include "fairsub/subsidy.hpp"
#include "support.hpp"

using namespace fairsub;
using fairsub::test::ints;
using fairsub::test::kind_of;
using fairsub::test::matrix;
using fairsub::test::q;

namespace {

const WeightMatrix kTight = matrix({{3, 0, 0}, {4, 3, 0}, {0, 4, 3}});
const WeightMatrix kSwap = matrix({{0, 1}, {1, 0}});

// Columns permuted so the identity is a maximum weight permutation.
WeightMatrix arranged(const WeightMatrix& w) {
  const Permutation sigma = oracle::brute_max_weight_perm(w).sigma;
  WeightMatrix out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) out(i, j) = w(i, sigma[j]);
  return out;
}

}  // namespace

TEST_CASE("weight_matrix") {
  CHECK(weight_matrix(io::example1(3), io::example1_allocation(3)) == kTight);

  const Instance empty = Instance::additive({{}, {}});
  CHECK(weight_matrix(empty, Allocation({{}, {}})) == WeightMatrix(2));

  // The modified allocation of the tight family: item 0 moved to the last bundle.
  // Agent 1 still values item 0 at 1 wherever it goes.
  const Allocation a_prime({{1, 2, 3}, {4, 5, 6, 7}, {0, 8, 9, 10, 11}});
  const WeightMatrix expected = WeightMatrix::from_rows(
      {test::qs({"9/4", "0", "3/4"}), test::qs({"3", "3", "1"}), test::qs({"0", "4", "3"})});
  CHECK(weight_matrix(io::example1(3), a_prime) == expected);
}

TEST_CASE("max_weight_permutation examples") {
  CHECK(max_weight_permutation(kTight) == identity_permutation(3));
  CHECK(permutation_weight(kTight, identity_permutation(3)) == Rational(9));
  CHECK(max_weight_permutation(WeightMatrix(4)) == identity_permutation(4));
  CHECK(max_weight_permutation(kSwap) == Permutation{1, 0});
  CHECK(max_weight_permutation(WeightMatrix(0)).empty());
}

TEST_CASE("max_weight_permutation matches enumeration, ties included") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = 1 + rng() % 6;
    // Coarse entries produce many ties, exercising the lexicographic rule.
    const WeightMatrix w = t % 2 ? test::random_matrix(n, 2, 2, rng) : test::random_matrix(n, 10, 10, rng);
    CHECK(max_weight_permutation(w) == oracle::brute_max_weight_perm(w).sigma);
  }
}

TEST_CASE("is_envy_freeable") {
  CHECK(is_envy_freeable(kTight));
  CHECK_FALSE(is_envy_freeable(kSwap));
  CHECK(is_envy_freeable(matrix({{-5}})));
}

TEST_CASE("envy_graph") {
  const Permutation id = identity_permutation(3);
  const EnvyGraph g = envy_graph(kTight, id);
  CHECK(g.gamma(1, 0) == Rational(1));
  CHECK(g.gamma(2, 1) == Rational(1));
  CHECK(g.gamma(0, 1) == Rational(-3));
  CHECK(g.gamma(0, 2) == Rational(-3));
  CHECK(g.gamma(1, 2) == Rational(-3));
  CHECK(g.gamma(2, 0) == Rational(-3));
  CHECK_FALSE(g.has_positive_cycle);

  CHECK(envy_graph(WeightMatrix(3), id).gamma == WeightMatrix(3));

  const EnvyGraph cyc = envy_graph(kSwap, identity_permutation(2));
  CHECK(cyc.gamma(0, 1) == Rational(1));
  CHECK(cyc.gamma(1, 0) == Rational(1));
  CHECK(cyc.has_positive_cycle);

  CHECK(kind_of([] { envy_graph(kSwap, Permutation{0, 0}); }) == ErrorKind::Input);
}

TEST_CASE("min_subsidy examples") {
  CHECK(min_subsidy(kTight, identity_permutation(3)) == ints({0, 1, 2}));
  const WeightMatrix ex2 = WeightMatrix::from_rows(
      {test::qs({"9/4", "0", "3/4"}), test::qs({"3", "3", "0"}), test::qs({"0", "4", "3"})});
  CHECK(min_subsidy(ex2, identity_permutation(3)) == ints({0, 0, 1}));
  CHECK(min_subsidy(WeightMatrix(3), identity_permutation(3)) == ints({0, 0, 0}));
  CHECK(kind_of([] { min_subsidy(kSwap, identity_permutation(2)); }) == ErrorKind::NotEnvyFreeable);
}

TEST_CASE("min_subsidy is indexed by bundle") {
  // Same matrix with agents listed in the other order: bundle 0 still gets nothing.
  const WeightMatrix w = matrix({{2, 0}, {3, 2}});
  CHECK(min_subsidy(w, identity_permutation(2)) == ints({0, 1}));
  const WeightMatrix flipped = matrix({{3, 2}, {2, 0}});
  CHECK(max_weight_permutation(flipped) == Permutation{1, 0});
  CHECK(min_subsidy(flipped, Permutation{1, 0}) == ints({0, 1}));
}

TEST_CASE("minimum subsidy does not depend on the maximum permutation chosen") {
  std::mt19937_64 rng(32);
  std::size_t tied = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + rng() % 5;
    const WeightMatrix w = test::random_matrix(n, 1, 1, rng);
    const Rational best = oracle::brute_max_weight_perm(w).total;
    Permutation sigma = identity_permutation(n);
    std::vector<SubsidyVector> seen;
    do {
      if (permutation_weight(w, sigma) == best) seen.push_back(min_subsidy(w, sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    tied += seen.size() > 1;
    for (const auto& p : seen) CHECK(p == seen.front());
  }
  CHECK(tied > 0);
}

TEST_CASE("envy-freeability characterisation") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const WeightMatrix w = test::random_matrix(n, 4, 4, rng);
    bool has_subsidy = true;
    try {
      min_subsidy(w, identity_permutation(n));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotEnvyFreeable);
      has_subsidy = false;
    }
    CHECK(is_envy_freeable(w) == has_subsidy);
  }
}

TEST_CASE("solve_given_allocation examples") {
  const SubsidizedAllocation ex =
      solve_given_allocation(io::example1(3), io::example1_allocation(3));
  CHECK(ex.sigma == identity_permutation(3));
  CHECK(ex.subsidy == ints({0, 1, 2}));
  CHECK(ex.allocation == io::example1_allocation(3));

  const SubsidizedAllocation one = solve_given_allocation(io::single_item(2), Allocation({{0}, {}}));
  CHECK(test::total(one.subsidy) == Rational(1));

  const Instance empty = Instance::additive({{}, {}, {}});
  CHECK(solve_given_allocation(empty, Allocation({{}, {}, {}})).subsidy == ints({0, 0, 0}));
}

TEST_CASE("solve_given_allocation rearranges non-envy-freeable inputs") {
  // Each agent holds the bundle the other prefers.
  const Instance inst = Instance::additive({{0, 1}, {1, 0}});
  const SubsidizedAllocation s = solve_given_allocation(inst, Allocation({{0}, {1}}));
  CHECK(s.sigma == Permutation{1, 0});
  CHECK(s.allocation == Allocation({{1}, {0}}));
  CHECK(s.subsidy == ints({0, 0}));
}

TEST_CASE("subsidies are minimal") {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 3, m = rng() % 7;
    const Instance inst = io::random_mixed(n, m, rng());
    const SubsidizedAllocation s = solve_given_allocation(inst, test::random_allocation(n, m, rng));
    REQUIRE(is_envy_free_with_subsidy(inst, s.allocation, s.subsidy));
    CHECK(*std::min_element(s.subsidy.begin(), s.subsidy.end()) == Rational(0));

    // Smallest positive slack v_i(A_i) + p_i - v_i(A_j) - p_j over all pairs.
    std::optional<Rational> slack;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Rational d = inst.value(i, s.allocation[i]) + s.subsidy[i] -
                           inst.value(i, s.allocation[j]) - s.subsidy[j];
        if (Rational(0) < d && (!slack || d < *slack)) slack = d;
      }
    const Rational eps = slack ? *slack / Rational(2) : Rational(1, 2);
    for (std::size_t i = 0; i < n; ++i) {
      if (s.subsidy[i].is_zero()) continue;
      SubsidyVector lowered = s.subsidy;
      lowered[i] -= min(eps, lowered[i]);
      CHECK_FALSE(is_envy_free_with_subsidy(inst, s.allocation, lowered));
    }
  }
}

TEST_CASE("EF1 inputs meet the n-1 and n(n-1)/2 ceilings") {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 4, m = rng() % 10;
    const Instance inst = t % 2 ? io::random_mixed(n, m, rng()) : io::random_monotone_table(n, m, rng());
    const SubsidizedAllocation s = solve_given_allocation(inst, find_ef1(inst).allocation);
    const long nl = static_cast<long>(n);
    for (const auto& p : s.subsidy) CHECK(p <= Rational(nl - 1));
    CHECK(test::total(s.subsidy) <= Rational(nl * (nl - 1), 2));
  }
}

TEST_CASE("beta_bounds") {
  const BetaBounds b = beta_bounds(kTight);
  CHECK(b.beta == ints({1, 1, 0}));
  CHECK(b.bounds == ints({2, 1, 0}));

  const BetaBounds z = beta_bounds(WeightMatrix(3));
  CHECK(z.beta == ints({0, 0, 0}));
  CHECK(z.bounds == ints({0, 0, 0}));
}

TEST_CASE("rank bounds hold on random EF1 allocations") {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4, m = rng() % 12;
    const Instance inst = io::random_additive_goods(n, m, rng());
    const Allocation a = envy_cycles(inst);
    const WeightMatrix w = weight_matrix(inst, a);
    const BetaBounds b = beta_bounds(w);
    for (const auto& x : b.beta) {
      CHECK(Rational(0) <= x);
      CHECK(x <= Rational(1));
    }
    auto p = min_subsidy(w, max_weight_permutation(w));
    std::sort(p.begin(), p.end(), [](const Rational& x, const Rational& y) { return y < x; });
    for (std::size_t r = 0; r < n; ++r) CHECK(p[r] <= b.bounds[r]);
  }
}

TEST_CASE("efk_bound_check") {
  CHECK(efk_bound_check(io::example1(3), io::example1_allocation(3), 1));
  const Instance empty = Instance::additive({{}, {}, {}});
  CHECK(efk_bound_check(empty, Allocation({{}, {}, {}}), 0));
  CHECK(efk_bound_check(empty, Allocation({{}, {}, {}}), 5));

  const Instance two = Instance::additive({{1, 1}, {1, 1}});
  CHECK(kind_of([&] { efk_bound_check(two, Allocation({{}, {0, 1}}), 1); }) ==
        ErrorKind::Precondition);
  CHECK(efk_bound_check(two, Allocation({{}, {0, 1}}), 2));
}

TEST_CASE("diagnostic_view on the tight family") {
  // q_i = max_j (w_ij + p_j) evaluated by hand: (max(3,1,2), max(4,4,2), max(0,5,5)).
  const DiagnosticView v = diagnostic_view(kTight, ints({0, 1, 2}));
  CHECK(v.q == ints({3, 4, 5}));
  CHECK(v.r == ints({0, 0, 0}));
  CHECK(v.hat_w == kTight);
  CHECK(v.beta == ints({1, 1, 0}));

  const DiagnosticView z = diagnostic_view(WeightMatrix(2), ints({0, 0}));
  CHECK(z.q == ints({0, 0}));
  CHECK(z.r == ints({0, 0}));
  CHECK(z.hat_w == WeightMatrix(2));
}

TEST_CASE("diagnostic_view invariants on random envy-freeable matrices") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 4;
    const WeightMatrix w = arranged(test::random_matrix(n, 10, 10, rng));
    const SubsidyVector p = min_subsidy(w, identity_permutation(n));
    const DiagnosticView v = diagnostic_view(w, p);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(Rational(0) <= v.r[i]);
      for (std::size_t j = 0; j < n; ++j) CHECK(w(i, j) <= v.hat_w(i, j));
    }
  }
}

TEST_CASE("longest_paths") {
  const LongestPaths lp = longest_paths(envy_graph(kTight, identity_permutation(3)).gamma);
  CHECK_FALSE(lp.has_positive_cycle);
  CHECK(lp.dist(2, 0) == Rational(2));
  CHECK(lp.dist(1, 0) == Rational(1));
  CHECK(lp.dist(0, 0) == Rational(0));
  CHECK(longest_paths(envy_graph(kSwap, identity_permutation(2)).gamma).has_positive_cycle);
}
