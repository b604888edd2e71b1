#ifndef FAIRSUB_MONOTONE_IMPROVE_HPP
#define FAIRSUB_MONOTONE_IMPROVE_HPP

// Single-item modification for monotone instances with n >= 3 that lowers
// the subsidy ceilings to n - 3/2 per agent and (n^2 - n - 1)/2 in total.

#include <optional>
#include <string>
#include <vector>

#include "fairsub/core.hpp"
#include "fairsub/subsidy.hpp"

namespace fairsub {

// Permutes the bundles of an EF1 allocation X to maximise utilitarian
// welfare among the permutations that keep it EF1. Agent i may take bundle
// X_j iff v_i(X_j) >= min_{|Y|<=1, Y in X_k} v_i(X_k \ Y) for every k.
// Throws Precondition unless X is EF1 and the instance is monotone.
Allocation welfare_max_ef1_rearrange(const Instance& inst, const Allocation& x);

// Agents and bundles renumbered so that the longest envy path visits labels
// n-1, n-2, ..., 0 in that order (0-based).
struct RelabeledView {
  std::vector<Agent> path;    // original vertices, from the max-subsidy end
  Permutation order;          // order[k] = original agent/bundle with label k
  Allocation allocation;      // allocation[k] = A[order[k]]
  std::vector<Rational> p;    // p*[order[k]]
  std::vector<Rational> r;    // r[order[k]] from the diagnostic view
  std::vector<Rational> s;    // s[k-1] for labels k = 1..n-1
};

// Returns nullopt when max p* <= n - 3/2 (no modification needed). p* is the
// bundle-indexed minimum subsidy vector of A. Throws Internal if the longest
// path in G^{hat_w,id} from the max-subsidy vertex does not span every agent.
std::optional<RelabeledView> relabel_along_longest_path(const Instance& inst,
                                                        const Allocation& a,
                                                        std::span<const Rational> p_star);

// Lowest-index e in A_0 with v_1(A_1) >= v_1(A_0 \ {e}); agents given by
// their relabeled order. nullopt when A_0 is empty. Throws Internal when no
// item qualifies.
std::optional<Item> select_estar(const Instance& inst, const Allocation& relabeled,
                                 std::span<const Agent> order);

// (B_{n-1}, B_0, ..., B_{n-2}).
Allocation build_a_double_prime(const Allocation& a_prime);

struct ImproveOptions {
  // Experimental: start from this EF1 allocation instead of envy-cycles.
  std::optional<Allocation> start;
};

struct ImprovementTrace {
  Allocation start_allocation;  // X
  Allocation base_allocation;   // A, welfare-max EF1 rearrangement of X
  SubsidyVector base_subsidy;   // p*, bundle-indexed for A
  bool triggered = false;       // max p* > n - 3/2
  std::optional<RelabeledView> relabeled;
  std::optional<Item> e_star;
  std::optional<Allocation> a_prime;         // relabeled order
  std::optional<Allocation> a_double_prime;  // relabeled order
  std::optional<Permutation> tau;            // maximum weight permutation of w'
  std::string chosen;  // "p*" (unmodified), "p'" or "p''" (which analysis certifies)
  std::size_t assertions_checked = 0;
};

struct ImprovedResult {
  SubsidizedAllocation solution;  // agent-indexed, original agent numbering
  ImprovementTrace trace;
};

// Throws Precondition unless the instance is monotone with n >= 3.
ImprovedResult improved_solve(const Instance& inst, const ImproveOptions& options = {});

}  // namespace fairsub

#endif
