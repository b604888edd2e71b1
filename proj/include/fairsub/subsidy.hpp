#ifndef FAIRSUB_SUBSIDY_HPP
#define FAIRSUB_SUBSIDY_HPP

// Envy-freeability, maximum weight permutations, envy graphs and minimum
// subsidy vectors.
//
// Conventions: sigma[i] is the bundle given to agent i. A subsidy vector is
// "bundle-indexed" when p[j] is paid to whoever holds bundle j, and
// "agent-indexed" when p[i] is paid to agent i. min_subsidy() returns the
// former; SubsidizedAllocation carries the latter.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fairsub/core.hpp"

namespace fairsub {

class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(std::size_t n) : n_(n), w_(n * n) {}
  static WeightMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t size() const { return n_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return w_[i * n_ + j]; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> w_;
};

using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
bool is_permutation_of(std::span<const std::size_t> sigma, std::size_t n);
Rational permutation_weight(const WeightMatrix& w, std::span<const std::size_t> sigma);

// w[i][j] = v_i(A_j).
WeightMatrix weight_matrix(const Instance& inst, const Allocation& alloc);

// A permutation maximising sum_i w[i][sigma(i)]; among maximisers, the
// lexicographically smallest. Exact Hungarian method on rationals; the tie
// break picks the lexicographically first perfect matching on the edges
// that are tight under the optimal dual potentials.
Permutation max_weight_permutation(const WeightMatrix& w);

// The identity arrangement already attains the maximum permutation weight.
bool is_envy_freeable(const WeightMatrix& w);

struct EnvyGraph {
  std::size_t n = 0;
  WeightMatrix gamma;  // gamma(i, j) = w[i][sigma(j)] - w[i][sigma(i)]
  bool has_positive_cycle = false;
};

EnvyGraph envy_graph(const WeightMatrix& w, std::span<const std::size_t> sigma);

// All-pairs longest walk lengths in an envy graph; dist(i, i) starts at 0 so
// every entry is >= the empty path. Only meaningful without positive cycles.
struct LongestPaths {
  WeightMatrix dist;
  bool has_positive_cycle = false;
};
LongestPaths longest_paths(const WeightMatrix& gamma);

// Bundle-indexed minimum subsidy vector: p[sigma(i)] is the longest path
// length from i in G^{w,sigma}. Throws NotEnvyFreeable when sigma is not a
// maximum weight permutation (the envy graph then has a positive cycle).
SubsidyVector min_subsidy(const WeightMatrix& w, std::span<const std::size_t> sigma);

struct SubsidizedAllocation {
  Allocation allocation;  // the input rearranged: allocation[i] = input[sigma[i]]
  SubsidyVector subsidy;  // agent-indexed
  Permutation sigma;
};

// Rearranges any allocation by a maximum weight permutation and pays the
// minimum subsidy. The result is envy-free (checked).
SubsidizedAllocation solve_given_allocation(const Instance& inst, const Allocation& alloc);

struct BetaBounds {
  std::vector<Rational> beta;    // max_j (w[i][j] - w[i][i]), clamped at 0, descending
  std::vector<Rational> bounds;  // bounds[r-1] = beta_1 + ... + beta_{n-r}, r = 1..n
};

// Per-rank ceilings on the sorted minimum subsidy vector.
BetaBounds beta_bounds(const WeightMatrix& w);

// Checks that solve_given_allocation meets max p <= k(n-1) and
// sum p <= k n(n-1)/2. Throws Precondition unless the allocation is EF-k.
bool efk_bound_check(const Instance& inst, const Allocation& alloc, std::size_t k);

struct DiagnosticView {
  std::vector<Rational> q;  // q_i = max_j (w[i][j] + p_j)
  std::vector<Rational> r;  // r_i = q_i - w[i][i] - p_i
  WeightMatrix hat_w;       // w with the diagonal raised by r
  std::vector<Rational> beta;
  std::optional<std::vector<Rational>> s;  // filled in by the monotone improvement
};

// Dual view of a minimum subsidy vector p (bundle-indexed) for w. Throws
// Internal unless the identity is a maximum weight permutation for hat_w,
// min_subsidy(hat_w, id) == p, and complementary slackness holds on a
// maximum weight permutation of w.
DiagnosticView diagnostic_view(const WeightMatrix& w, std::span<const Rational> p);

}  // namespace fairsub

#endif
