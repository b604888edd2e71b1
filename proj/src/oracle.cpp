#include "fairsub/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "fairsub/error.hpp"

namespace fairsub::oracle {

namespace {

std::uint64_t factorial_capped(std::size_t n, std::uint64_t cap) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > cap / k) return cap + 1;
    f *= k;
  }
  return f;
}

std::uint64_t power_capped(std::size_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t p = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (base != 0 && p > cap / base) return cap + 1;
    p *= base;
  }
  return p;
}

// Visits owner vectors in lexicographic order (item 0 most significant).
template <typename Visit>
void for_each_assignment(std::size_t n, std::size_t m, Visit&& visit) {
  std::vector<Agent> owner(m, 0);
  for (;;) {
    if (!visit(owner)) return;
    std::size_t e = m;
    while (e > 0 && owner[e - 1] + 1 == n) owner[--e] = 0;
    if (e == 0) return;
    ++owner[e - 1];
  }
}

}  // namespace

PermutationResult brute_max_weight_perm(const WeightMatrix& w, const Budget& budget) {
  const std::size_t n = w.size();
  if (factorial_capped(n, budget.max_permutations) > budget.max_permutations)
    fail(ErrorKind::Resource, std::to_string(n) + "! permutations exceed the oracle budget");
  Permutation perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  PermutationResult best{perm, Rational()};
  bool first = true;
  do {
    Rational total;
    for (std::size_t i = 0; i < n; ++i) total += w(i, perm[i]);
    if (first || total > best.total) {
      best = {perm, std::move(total)};
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SubsidyVector brute_min_subsidy(const WeightMatrix& w, std::span<const std::size_t> sigma,
                                const Budget& budget) {
  const std::size_t n = w.size();
  if (n > 8) fail(ErrorKind::Resource, "path enumeration oracle supports n <= 8");
  if (sigma.size() != n) fail(ErrorKind::Input, "sigma has the wrong length");
  auto gamma = [&](std::size_t i, std::size_t j) { return w(i, sigma[j]) - w(i, sigma[i]); };

  std::uint64_t paths = 0;
  SubsidyVector p(n);
  std::vector<char> on_path(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    Rational best;  // the empty path
    auto dfs = [&](auto&& self, std::size_t u, const Rational& length) -> void {
      if (++paths > budget.max_simple_paths)
        fail(ErrorKind::Resource, "simple path enumeration exceeded the oracle budget");
      best = max(best, length);
      if (u != start && (length + gamma(u, start)).sign() > 0)
        fail(ErrorKind::NotEnvyFreeable, "envy graph contains a positive-weight cycle");
      for (std::size_t v = 0; v < n; ++v) {
        if (on_path[v]) continue;
        on_path[v] = 1;
        self(self, v, length + gamma(u, v));
        on_path[v] = 0;
      }
    };
    on_path[start] = 1;
    dfs(dfs, start, Rational());
    on_path[start] = 0;
    p[sigma[start]] = best;
  }
  return p;
}

GlobalOptimum brute_min_total_subsidy(const Instance& inst, const Budget& budget) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.items();
  if (power_capped(n, m, budget.max_allocations) > budget.max_allocations)
    fail(ErrorKind::Resource, std::to_string(n) + "^" + std::to_string(m) +
                                  " allocations exceed the oracle budget");
  GlobalOptimum best;
  bool found = false;
  for_each_assignment(n, m, [&](const std::vector<Agent>& owner) {
    const Allocation a = Allocation::from_assignment(n, owner);
    WeightMatrix w(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = inst.value(i, a[j]);
    const PermutationResult perm = brute_max_weight_perm(w, budget);
    const SubsidyVector by_bundle = brute_min_subsidy(w, perm.sigma, budget);
    Rational total;
    for (const auto& v : by_bundle) total += v;
    if (!found || total < best.total) {
      best.allocation = a.permuted(perm.sigma);
      best.subsidy.assign(n, Rational());
      for (std::size_t i = 0; i < n; ++i) best.subsidy[i] = by_bundle[perm.sigma[i]];
      best.total = std::move(total);
      found = true;
    }
    return true;
  });
  return best;
}

bool brute_is_ef1_exists(const Instance& inst, const Budget& budget) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.items();
  if (power_capped(n, m, budget.max_allocations) > budget.max_allocations)
    fail(ErrorKind::Resource, std::to_string(n) + "^" + std::to_string(m) +
                                  " allocations exceed the oracle budget");
  bool exists = false;
  for_each_assignment(n, m, [&](const std::vector<Agent>& owner) {
    exists = is_ef1(inst, Allocation::from_assignment(n, owner));
    return !exists;
  });
  return exists;
}

}  // namespace fairsub::oracle
