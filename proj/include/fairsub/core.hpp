#ifndef FAIRSUB_CORE_HPP
#define FAIRSUB_CORE_HPP

// Instance model and fairness checkers shared by every solver module.
//
// Agents and items are 0-based. Every value is an exact Rational; there is no
// floating point anywhere in the solver.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "fairsub/rational.hpp"

namespace fairsub {

using Item = std::size_t;
using Agent = std::size_t;

// Sorted, duplicate-free list of item indices.
using Bundle = std::vector<Item>;

inline constexpr std::size_t kMaxTableItems = 16;

struct AdditiveValuation {
  std::vector<Rational> values;  // per item
};

// Full value table indexed by the bitmask of the subset (bit e set iff e in X).
struct TableValuation {
  std::vector<Rational> values;  // size 2^m
};

using Valuation = std::variant<AdditiveValuation, TableValuation>;

enum class ItemClass { Good, Chore, Mixed };
enum class InstanceClass { Monotone, DoublyMonotone, General };

const char* to_string(ItemClass c) noexcept;
const char* to_string(InstanceClass c) noexcept;

class Instance {
 public:
  // values[i][e] = v_i({e}). Throws Input if a row has the wrong length or
  // some |value| > 1.
  static Instance additive(std::vector<std::vector<Rational>> values);

  // tables[i][mask] = v_i(X). Each table is shifted so v_i(empty) = 0, then
  // every marginal is checked against the unit bound. Requires m <= 16.
  static Instance table(std::size_t items, std::vector<std::vector<Rational>> tables);

  std::size_t agents() const { return valuations_.size(); }
  std::size_t items() const { return items_; }
  bool is_additive() const { return additive_; }
  const Valuation& valuation(Agent i) const { return valuations_.at(i); }

  // v_i(bundle). Duplicate items are counted once. Throws Input on an
  // unknown agent or item.
  Rational value(Agent i, std::span<const Item> bundle) const;

  // v_i(bundle \ {removed}).
  Rational value_without(Agent i, std::span<const Item> bundle, Item removed) const;

  // Additive item value v_i({e}); for tables this is the singleton entry.
  Rational item_value(Agent i, Item e) const;

  ItemClass classify_item(Agent i, Item e) const;
  InstanceClass instance_class() const;

 private:
  Instance(std::size_t items, std::vector<Valuation> valuations, bool additive);

  std::uint32_t mask_of(std::span<const Item> bundle) const;

  std::size_t items_ = 0;
  std::vector<Valuation> valuations_;
  bool additive_ = true;
};

class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<Bundle> bundles);

  // All items to agent 0, the rest empty.
  static Allocation all_to_first(std::size_t agents, std::size_t items);
  // assignment[e] = owner of item e.
  static Allocation from_assignment(std::size_t agents, std::span<const Agent> assignment);

  std::size_t size() const { return bundles_.size(); }
  const Bundle& operator[](std::size_t i) const { return bundles_[i]; }
  const std::vector<Bundle>& bundles() const { return bundles_; }

  // (A_{sigma(0)}, ..., A_{sigma(n-1)}).
  Allocation permuted(std::span<const std::size_t> sigma) const;

  // Throws Input unless the bundles partition {0..m-1} into n parts.
  void validate(const Instance& inst) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Bundle> bundles_;
};

using SubsidyVector = std::vector<Rational>;

struct EnvyPair {
  Agent envious = 0;
  Agent envied = 0;
};

struct EfkResult {
  bool ok = true;
  std::optional<EnvyPair> violation;  // first violating pair in (i, j) order
};

// EF-k check. For k = 1 the removal set X is tried in the order: empty set,
// singletons of A_i, singletons of A_j (item-index order).
EfkResult check_efk(const Instance& inst, const Allocation& alloc, std::size_t k);
inline EfkResult check_ef1(const Instance& inst, const Allocation& alloc) {
  return check_efk(inst, alloc, 1);
}
inline bool is_efk(const Instance& inst, const Allocation& alloc, std::size_t k) {
  return check_efk(inst, alloc, k).ok;
}
inline bool is_ef1(const Instance& inst, const Allocation& alloc) {
  return check_efk(inst, alloc, 1).ok;
}

struct EnvyViolation {
  EnvyPair pair;
  Rational amount;  // v_i(A_j) + p_j - v_i(A_i) - p_i > 0
};

struct EnvyFreeCheck {
  bool ok = true;
  Rational max_violation;  // 0 when ok
  std::optional<EnvyPair> worst;
  std::vector<EnvyViolation> violations;  // every violated ordered pair
};

// v_i(A_i) + p_i >= v_i(A_j) + p_j for all i, j. Negative entries or a length
// mismatch throw Input.
EnvyFreeCheck check_envy_free_with_subsidy(const Instance& inst, const Allocation& alloc,
                                           std::span<const Rational> subsidy);
inline bool is_envy_free_with_subsidy(const Instance& inst, const Allocation& alloc,
                                      std::span<const Rational> subsidy) {
  return check_envy_free_with_subsidy(inst, alloc, subsidy).ok;
}

Rational utilitarian_welfare(const Instance& inst, const Allocation& alloc);

}  // namespace fairsub

#endif
