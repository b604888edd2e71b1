#ifndef FAIRSUB_ORACLE_HPP
#define FAIRSUB_ORACLE_HPP

// Brute-force ground truth for desk-scale instances. Shares only the core
// types and checkers with the solver, none of its algorithms.

#include <cstdint>

#include "fairsub/core.hpp"
#include "fairsub/subsidy.hpp"

namespace fairsub::oracle {

struct Budget {
  std::uint64_t max_allocations = 1'000'000;
  std::uint64_t max_permutations = 40'320;  // 8!
  std::uint64_t max_simple_paths = 1'000'000;
};

struct PermutationResult {
  Permutation sigma;
  Rational total;
};

// Full n! enumeration in lexicographic order; the first maximiser wins.
PermutationResult brute_max_weight_perm(const WeightMatrix& w, const Budget& budget = {});

// Bundle-indexed minimum subsidy by enumerating every simple path of
// G^{w,sigma}. Throws NotEnvyFreeable if some simple path closes into a
// positive cycle, Resource when a budget is exceeded or n > 8.
SubsidyVector brute_min_subsidy(const WeightMatrix& w, std::span<const std::size_t> sigma,
                                const Budget& budget = {});

struct GlobalOptimum {
  Allocation allocation;  // already rearranged so that it is envy-freeable
  SubsidyVector subsidy;  // agent-indexed
  Rational total;
};

// Minimum total subsidy over all n^m allocations (first in assignment order
// on ties).
GlobalOptimum brute_min_total_subsidy(const Instance& inst, const Budget& budget = {});

bool brute_is_ef1_exists(const Instance& inst, const Budget& budget = {});

}  // namespace fairsub::oracle

#endif
