#include "fairsub/ef1.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

#include "fairsub/error.hpp"

namespace fairsub {

const char* to_string(Ef1Method m) noexcept {
  switch (m) {
    case Ef1Method::EnvyCycles: return "envy-cycles";
    case Ef1Method::DoubleRoundRobin: return "double-round-robin";
    case Ef1Method::Exhaustive: return "exhaustive";
    case Ef1Method::Auto: return "auto";
  }
  return "?";
}

Ef1Method parse_ef1_method(const char* name) {
  for (Ef1Method m : {Ef1Method::EnvyCycles, Ef1Method::DoubleRoundRobin, Ef1Method::Exhaustive,
                      Ef1Method::Auto})
    if (std::strcmp(name, to_string(m)) == 0) return m;
  fail(ErrorKind::Input, std::string("unknown EF1 method \"") + name + "\"");
}

std::uint64_t allocation_count(std::size_t agents, std::size_t items) {
  std::uint64_t total = 1;
  for (std::size_t e = 0; e < items; ++e) {
    if (agents != 0 && total > UINT64_MAX / agents) return UINT64_MAX;
    total *= agents;
  }
  return total;
}

// ---------------------------------------------------------------------------

namespace {

class EnvyState {
 public:
  EnvyState(const Instance& inst) : inst_(inst), n_(inst.agents()), bundles_(n_) {
    values_.assign(n_ * n_, Rational());
  }

  bool envies(Agent i, Agent j) const { return at(i, i) < at(i, j); }

  std::optional<Agent> lowest_unenvied() const {
    for (Agent j = 0; j < n_; ++j) {
      bool envied = false;
      for (Agent i = 0; i < n_ && !envied; ++i) envied = i != j && envies(i, j);
      if (!envied) return j;
    }
    return std::nullopt;
  }

  void give(Agent j, Item e) {
    auto& b = bundles_[j];
    b.insert(std::upper_bound(b.begin(), b.end(), e), e);
    refresh_column(j);
  }

  // Walks from agent 0 to its lowest-index envier until an agent repeats.
  // Returns the cycle as (c_0, ..., c_{k-1}) where c_{t+1} envies c_t.
  std::vector<Agent> find_cycle() const {
    std::vector<int> pos(n_, -1);
    std::vector<Agent> walk;
    Agent cur = 0;
    while (pos[cur] < 0) {
      pos[cur] = static_cast<int>(walk.size());
      walk.push_back(cur);
      Agent next = n_;
      for (Agent i = 0; i < n_; ++i)
        if (i != cur && envies(i, cur)) {
          next = i;
          break;
        }
      ensure(next < n_, "envy-cycles: every agent is envied but no envier found");
      cur = next;
    }
    return {walk.begin() + pos[cur], walk.end()};
  }

  void rotate(const std::vector<Agent>& cycle) {
    const Rational before = welfare();
    std::vector<Bundle> moved(cycle.size());
    // c_{t+1} envies c_t and takes its bundle.
    for (std::size_t t = 0; t < cycle.size(); ++t)
      moved[(t + 1) % cycle.size()] = bundles_[cycle[t]];
    for (std::size_t t = 0; t < cycle.size(); ++t) {
      bundles_[cycle[t]] = std::move(moved[t]);
      refresh_column(cycle[t]);
    }
    ensure(welfare() > before, "envy-cycles: rotation did not increase welfare");
  }

  Allocation allocation() const { return Allocation(bundles_); }

 private:
  const Rational& at(Agent i, Agent j) const { return values_[i * n_ + j]; }

  void refresh_column(Agent j) {
    for (Agent i = 0; i < n_; ++i) values_[i * n_ + j] = inst_.value(i, bundles_[j]);
  }

  Rational welfare() const {
    Rational w;
    for (Agent i = 0; i < n_; ++i) w += at(i, i);
    return w;
  }

  const Instance& inst_;
  std::size_t n_;
  std::vector<Bundle> bundles_;
  std::vector<Rational> values_;
};

}  // namespace

Allocation envy_cycles(const Instance& inst) {
  if (inst.instance_class() != InstanceClass::Monotone)
    fail(ErrorKind::Precondition, "envy-cycles requires a monotone instance");
  EnvyState state(inst);
  for (Item e = 0; e < inst.items(); ++e) {
    for (;;) {
      if (auto j = state.lowest_unenvied()) {
        state.give(*j, e);
        break;
      }
      state.rotate(state.find_cycle());
    }
  }
  return state.allocation();
}

// ---------------------------------------------------------------------------

Allocation double_round_robin(const Instance& inst) {
  if (!inst.is_additive())
    fail(ErrorKind::Precondition, "double round-robin requires additive valuations");
  const std::size_t n = inst.agents();
  const std::size_t m = inst.items();

  std::vector<Item> chores;
  std::vector<Item> rest;
  for (Item e = 0; e < m; ++e) {
    bool all_negative = true;
    for (Agent i = 0; i < n && all_negative; ++i) all_negative = inst.item_value(i, e).sign() < 0;
    (all_negative ? chores : rest).push_back(e);
  }

  std::vector<Bundle> bundles(n);
  const Rational zero;

  // Phase 1. Dummies are encoded as indices >= m and are worth 0 to everyone.
  const std::size_t padded = (chores.size() + n - 1) / n * n;
  std::vector<Item> pool = chores;
  for (std::size_t d = chores.size(); d < padded; ++d) pool.push_back(m + d);
  for (std::size_t turn = 0; !pool.empty(); ++turn) {
    const Agent i = turn % n;
    auto best = pool.begin();
    Rational best_value = *best >= m ? zero : inst.item_value(i, *best);
    for (auto it = std::next(pool.begin()); it != pool.end(); ++it) {
      Rational v = *it >= m ? zero : inst.item_value(i, *it);
      if (v > best_value) {
        best = it;
        best_value = std::move(v);
      }
    }
    if (*best < m) bundles[i].push_back(*best);
    pool.erase(best);
  }

  // Phase 2, reverse order.
  pool = rest;
  std::size_t idle_turns = 0;
  for (std::size_t turn = 0; !pool.empty(); ++turn) {
    const Agent i = n - 1 - turn % n;
    auto best = pool.end();
    Rational best_value;
    for (auto it = pool.begin(); it != pool.end(); ++it) {
      Rational v = inst.item_value(i, *it);
      if (v.sign() < 0) continue;
      if (best == pool.end() || v > best_value) {
        best = it;
        best_value = std::move(v);
      }
    }
    if (best == pool.end()) {
      ensure(++idle_turns <= n, "double round-robin: no agent accepts a remaining item");
      continue;
    }
    idle_turns = 0;
    bundles[i].push_back(*best);
    pool.erase(best);
  }
  return Allocation(std::move(bundles));
}

// ---------------------------------------------------------------------------

std::optional<Allocation> exhaustive_ef1(const Instance& inst, std::uint64_t cap) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.items();
  const std::uint64_t count = allocation_count(n, m);
  if (count > cap)
    fail(ErrorKind::Resource, "exhaustive EF1 search needs " + std::to_string(n) + "^" +
                                  std::to_string(m) + " allocations, cap is " +
                                  std::to_string(cap));
  std::vector<Agent> owner(m, 0);
  for (;;) {
    Allocation a = Allocation::from_assignment(n, owner);
    if (is_ef1(inst, a)) return a;
    // Advance the least significant item (the last one).
    std::size_t e = m;
    while (e > 0 && owner[e - 1] + 1 == n) owner[--e] = 0;
    if (e == 0) return std::nullopt;
    ++owner[e - 1];
  }
}

// ---------------------------------------------------------------------------

Ef1Result find_ef1(const Instance& inst, Ef1Method method, std::uint64_t cap) {
  if (method == Ef1Method::Auto) {
    const InstanceClass cls = inst.instance_class();
    if (cls == InstanceClass::Monotone)
      method = Ef1Method::EnvyCycles;
    else if (cls == InstanceClass::DoublyMonotone && inst.is_additive())
      method = Ef1Method::DoubleRoundRobin;
    else
      method = Ef1Method::Exhaustive;
  }

  Allocation alloc;
  switch (method) {
    case Ef1Method::EnvyCycles:
      alloc = envy_cycles(inst);
      break;
    case Ef1Method::DoubleRoundRobin:
      alloc = double_round_robin(inst);
      break;
    case Ef1Method::Exhaustive: {
      std::optional<Allocation> found;
      try {
        found = exhaustive_ef1(inst, cap);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::Resource) throw;
        fail(ErrorKind::Unsupported,
             std::string("no polynomial EF1 method applies to this ") +
                 to_string(inst.instance_class()) + " instance and " + err.what() +
                 "; supply an EF1 allocation directly or raise the budget");
      }
      if (!found)
        fail(ErrorKind::Unsupported, "the instance admits no EF1 allocation");
      alloc = std::move(*found);
      break;
    }
    case Ef1Method::Auto:
      break;
  }
  ensure(is_ef1(inst, alloc), std::string(to_string(method)) + " returned a non-EF1 allocation");
  return {std::move(alloc), method};
}

}  // namespace fairsub
