#ifndef FAIRSUB_EF1_HPP
#define FAIRSUB_EF1_HPP

#include <cstdint>
#include <optional>

#include "fairsub/core.hpp"

namespace fairsub {

enum class Ef1Method { EnvyCycles, DoubleRoundRobin, Exhaustive, Auto };

const char* to_string(Ef1Method m) noexcept;
// Accepts "envy-cycles", "double-round-robin", "exhaustive", "auto".
Ef1Method parse_ef1_method(const char* name);

inline constexpr std::uint64_t kDefaultExhaustiveCap = 1'000'000;

// Envy-cycle elimination for monotone instances. Items are handed out in
// index order to the lowest-index unenvied agent; envy cycles are rotated
// until one exists. Throws Precondition on a non-monotone instance.
Allocation envy_cycles(const Instance& inst);

// Double round-robin for additive instances (every additive instance is
// doubly monotone). Items every agent strictly dislikes are padded with
// zero-valued dummies to a multiple of n and picked in order 0..n-1; the
// rest are picked in order n-1..0, an agent passing when nothing left is
// worth >= 0 to it.
Allocation double_round_robin(const Instance& inst);

// First EF1 allocation in lexicographic assignment order (item 0 most
// significant, owner 0 first), or nullopt when none exists. Throws Resource
// when n^m exceeds the cap.
std::optional<Allocation> exhaustive_ef1(const Instance& inst,
                                         std::uint64_t cap = kDefaultExhaustiveCap);

struct Ef1Result {
  Allocation allocation;
  Ef1Method method = Ef1Method::Auto;  // the method that actually ran
};

// Auto: EnvyCycles for monotone, DoubleRoundRobin for additive doubly
// monotone, Exhaustive otherwise. The result is re-checked with is_ef1.
Ef1Result find_ef1(const Instance& inst, Ef1Method method = Ef1Method::Auto,
                   std::uint64_t cap = kDefaultExhaustiveCap);

// n^m, saturating at UINT64_MAX.
std::uint64_t allocation_count(std::size_t agents, std::size_t items);

}  // namespace fairsub

#endif
