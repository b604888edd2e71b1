#include "fairsub/core.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "fairsub/error.hpp"

namespace fairsub {

const char* to_string(ItemClass c) noexcept {
  switch (c) {
    case ItemClass::Good: return "good";
    case ItemClass::Chore: return "chore";
    case ItemClass::Mixed: return "mixed";
  }
  return "?";
}

const char* to_string(InstanceClass c) noexcept {
  switch (c) {
    case InstanceClass::Monotone: return "monotone";
    case InstanceClass::DoublyMonotone: return "doubly-monotone";
    case InstanceClass::General: return "general";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::size_t items, std::vector<Valuation> valuations, bool additive)
    : items_(items), valuations_(std::move(valuations)), additive_(additive) {}

Instance Instance::additive(std::vector<std::vector<Rational>> values) {
  if (values.empty()) fail(ErrorKind::Input, "instance needs at least one agent");
  const std::size_t m = values.front().size();
  const Rational one(1);
  std::vector<Valuation> vals;
  vals.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != m)
      fail(ErrorKind::Input, "agent " + std::to_string(i) + " has " +
                                 std::to_string(values[i].size()) + " item values, expected " +
                                 std::to_string(m));
    for (std::size_t e = 0; e < m; ++e)
      if (abs(values[i][e]) > one)
        fail(ErrorKind::Input, "agent " + std::to_string(i) + " item " + std::to_string(e) +
                                   ": |value| " + values[i][e].str() + " exceeds 1");
    vals.emplace_back(AdditiveValuation{std::move(values[i])});
  }
  return Instance(m, std::move(vals), true);
}

Instance Instance::table(std::size_t items, std::vector<std::vector<Rational>> tables) {
  if (tables.empty()) fail(ErrorKind::Input, "instance needs at least one agent");
  if (items > kMaxTableItems)
    fail(ErrorKind::Input, "table valuations support at most " + std::to_string(kMaxTableItems) +
                               " items, got " + std::to_string(items));
  const std::size_t size = std::size_t{1} << items;
  const Rational one(1);
  std::vector<Valuation> vals;
  vals.reserve(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    auto& t = tables[i];
    if (t.size() != size)
      fail(ErrorKind::Input, "agent " + std::to_string(i) + " table has " +
                                 std::to_string(t.size()) + " entries, expected " +
                                 std::to_string(size));
    const Rational base = t[0];
    if (!base.is_zero())
      for (auto& v : t) v -= base;
    for (std::size_t e = 0; e < items; ++e) {
      const std::size_t bit = std::size_t{1} << e;
      for (std::size_t x = 0; x < size; ++x) {
        if (x & bit) continue;
        if (abs(t[x | bit] - t[x]) > one)
          fail(ErrorKind::Input, "agent " + std::to_string(i) + " item " + std::to_string(e) +
                                     ": marginal exceeds 1 in magnitude at subset mask " +
                                     std::to_string(x));
      }
    }
    vals.emplace_back(TableValuation{std::move(t)});
  }
  return Instance(items, std::move(vals), false);
}

std::uint32_t Instance::mask_of(std::span<const Item> bundle) const {
  std::uint32_t mask = 0;
  for (Item e : bundle) {
    if (e >= items_) fail(ErrorKind::Input, "unknown item index " + std::to_string(e));
    mask |= std::uint32_t{1} << e;
  }
  return mask;
}

Rational Instance::value(Agent i, std::span<const Item> bundle) const {
  if (i >= agents()) fail(ErrorKind::Input, "unknown agent index " + std::to_string(i));
  if (const auto* add = std::get_if<AdditiveValuation>(&valuations_[i])) {
    if (!std::is_sorted(bundle.begin(), bundle.end())) {
      Bundle sorted(bundle.begin(), bundle.end());
      std::sort(sorted.begin(), sorted.end());
      return value(i, sorted);
    }
    Rational total;
    for (std::size_t k = 0; k < bundle.size(); ++k) {
      const Item e = bundle[k];
      if (e >= items_) fail(ErrorKind::Input, "unknown item index " + std::to_string(e));
      if (k > 0 && bundle[k - 1] == e) continue;
      total += add->values[e];
    }
    return total;
  }
  return std::get<TableValuation>(valuations_[i]).values[mask_of(bundle)];
}

Rational Instance::value_without(Agent i, std::span<const Item> bundle, Item removed) const {
  Bundle rest;
  rest.reserve(bundle.size());
  for (Item e : bundle)
    if (e != removed) rest.push_back(e);
  return value(i, rest);
}

Rational Instance::item_value(Agent i, Item e) const {
  const Item single[] = {e};
  return value(i, single);
}

ItemClass Instance::classify_item(Agent i, Item e) const {
  if (i >= agents()) fail(ErrorKind::Input, "unknown agent index " + std::to_string(i));
  if (e >= items_) fail(ErrorKind::Input, "unknown item index " + std::to_string(e));
  if (const auto* add = std::get_if<AdditiveValuation>(&valuations_[i]))
    return add->values[e].sign() < 0 ? ItemClass::Chore : ItemClass::Good;

  const auto& t = std::get<TableValuation>(valuations_[i]).values;
  const std::size_t bit = std::size_t{1} << e;
  bool any_negative = false;
  bool any_positive = false;
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (x & bit) continue;
    const int s = (t[x | bit] - t[x]).sign();
    any_negative |= s < 0;
    any_positive |= s > 0;
  }
  if (!any_negative) return ItemClass::Good;
  if (!any_positive) return ItemClass::Chore;
  return ItemClass::Mixed;
}

InstanceClass Instance::instance_class() const {
  bool monotone = true;
  for (Agent i = 0; i < agents(); ++i)
    for (Item e = 0; e < items_; ++e) {
      const ItemClass c = classify_item(i, e);
      if (c == ItemClass::Mixed) return InstanceClass::General;
      monotone &= c == ItemClass::Good;
    }
  return monotone ? InstanceClass::Monotone : InstanceClass::DoublyMonotone;
}

// ---------------------------------------------------------------------------
// Allocation

Allocation::Allocation(std::vector<Bundle> bundles) : bundles_(std::move(bundles)) {
  for (auto& b : bundles_) std::sort(b.begin(), b.end());
}

Allocation Allocation::all_to_first(std::size_t agents, std::size_t items) {
  std::vector<Bundle> b(agents);
  for (Item e = 0; e < items; ++e) b[0].push_back(e);
  return Allocation(std::move(b));
}

Allocation Allocation::from_assignment(std::size_t agents, std::span<const Agent> assignment) {
  std::vector<Bundle> b(agents);
  for (Item e = 0; e < assignment.size(); ++e) {
    if (assignment[e] >= agents)
      fail(ErrorKind::Input, "item " + std::to_string(e) + " assigned to unknown agent");
    b[assignment[e]].push_back(e);
  }
  return Allocation(std::move(b));
}

Allocation Allocation::permuted(std::span<const std::size_t> sigma) const {
  std::vector<Bundle> b;
  b.reserve(sigma.size());
  for (std::size_t j : sigma) b.push_back(bundles_.at(j));
  return Allocation(std::move(b));
}

void Allocation::validate(const Instance& inst) const {
  if (bundles_.size() != inst.agents())
    fail(ErrorKind::Input, "allocation has " + std::to_string(bundles_.size()) +
                               " bundles, instance has " + std::to_string(inst.agents()) +
                               " agents");
  std::vector<char> seen(inst.items(), 0);
  for (const auto& b : bundles_)
    for (Item e : b) {
      if (e >= inst.items()) fail(ErrorKind::Input, "unknown item index " + std::to_string(e));
      if (seen[e]) fail(ErrorKind::Input, "item " + std::to_string(e) + " allocated twice");
      seen[e] = 1;
    }
  for (Item e = 0; e < inst.items(); ++e)
    if (!seen[e]) fail(ErrorKind::Input, "item " + std::to_string(e) + " is not allocated");
}

// ---------------------------------------------------------------------------
// Checkers

namespace {

// Additive: removing e from A_i changes the envy margin by -v_i(e), removing
// e from A_j by +v_i(e); the best X takes the k largest positive gains.
bool pair_efk_additive(const Instance& inst, Agent i, const Bundle& own, const Bundle& other,
                       std::size_t k) {
  Rational margin = inst.value(i, own) - inst.value(i, other);
  if (margin.sign() >= 0) return true;
  if (k == 0) return false;
  std::vector<Rational> gains;
  gains.reserve(own.size() + other.size());
  for (Item e : own) {
    Rational g = -inst.item_value(i, e);
    if (g.sign() > 0) gains.push_back(std::move(g));
  }
  for (Item e : other) {
    Rational g = inst.item_value(i, e);
    if (g.sign() > 0) gains.push_back(std::move(g));
  }
  std::sort(gains.begin(), gains.end(), [](const Rational& a, const Rational& b) { return b < a; });
  for (std::size_t t = 0; t < gains.size() && t < k; ++t) {
    margin += gains[t];
    if (margin.sign() >= 0) return true;
  }
  return false;
}

bool pair_ef1_ordered(const Instance& inst, Agent i, const Bundle& own, const Bundle& other) {
  if (inst.value(i, own) >= inst.value(i, other)) return true;
  for (Item e : own)
    if (inst.value_without(i, own, e) >= inst.value(i, other)) return true;
  for (Item e : other)
    if (inst.value(i, own) >= inst.value_without(i, other, e)) return true;
  return false;
}

bool pair_efk_enumerate(const Instance& inst, Agent i, const Bundle& own, const Bundle& other,
                        std::size_t k) {
  Bundle uni(own);
  uni.insert(uni.end(), other.begin(), other.end());
  if (k >= uni.size()) return true;
  const auto& t = std::get<TableValuation>(inst.valuation(i)).values;
  std::uint32_t own_mask = 0;
  std::uint32_t other_mask = 0;
  for (Item e : own) own_mask |= std::uint32_t{1} << e;
  for (Item e : other) other_mask |= std::uint32_t{1} << e;
  const std::uint32_t uni_mask = own_mask | other_mask;
  // Iterate all submasks of the union with at most k bits.
  for (std::uint32_t x = uni_mask;; x = (x - 1) & uni_mask) {
    if (static_cast<std::size_t>(std::popcount(x)) <= k &&
        t[own_mask & ~x] >= t[other_mask & ~x])
      return true;
    if (x == 0) break;
  }
  return false;
}

}  // namespace

EfkResult check_efk(const Instance& inst, const Allocation& alloc, std::size_t k) {
  alloc.validate(inst);
  const std::size_t n = inst.agents();
  for (Agent i = 0; i < n; ++i)
    for (Agent j = 0; j < n; ++j) {
      if (i == j) continue;
      bool ok;
      if (inst.is_additive())
        ok = pair_efk_additive(inst, i, alloc[i], alloc[j], k);
      else if (k == 1)
        ok = pair_ef1_ordered(inst, i, alloc[i], alloc[j]);
      else
        ok = pair_efk_enumerate(inst, i, alloc[i], alloc[j], k);
      if (!ok) return {false, EnvyPair{i, j}};
    }
  return {};
}

EnvyFreeCheck check_envy_free_with_subsidy(const Instance& inst, const Allocation& alloc,
                                           std::span<const Rational> subsidy) {
  alloc.validate(inst);
  const std::size_t n = inst.agents();
  if (subsidy.size() != n)
    fail(ErrorKind::Input, "subsidy vector has " + std::to_string(subsidy.size()) +
                               " entries, expected " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i)
    if (subsidy[i].sign() < 0)
      fail(ErrorKind::Input, "subsidy entry " + std::to_string(i) + " is negative");

  EnvyFreeCheck out;
  for (Agent i = 0; i < n; ++i) {
    const Rational own = inst.value(i, alloc[i]) + subsidy[i];
    for (Agent j = 0; j < n; ++j) {
      if (i == j) continue;
      Rational excess = inst.value(i, alloc[j]) + subsidy[j] - own;
      if (excess.sign() <= 0) continue;
      if (out.ok || excess > out.max_violation) {
        out.max_violation = excess;
        out.worst = EnvyPair{i, j};
      }
      out.ok = false;
      out.violations.push_back({EnvyPair{i, j}, std::move(excess)});
    }
  }
  return out;
}

Rational utilitarian_welfare(const Instance& inst, const Allocation& alloc) {
  Rational total;
  for (Agent i = 0; i < alloc.size(); ++i) total += inst.value(i, alloc[i]);
  return total;
}

}  // namespace fairsub
