#ifndef FAIRSUB_IO_HPP
#define FAIRSUB_IO_HPP

// Instance and allocation documents (JSON), and instance generators.
//
// Instance document:
//   {"schema_version": "1", "n": 2, "m": 3, "valuation_kind": "additive",
//    "values": [["1/2", "0", "1"], ["1", "1/3", "-1/4"]]}
// For "table" valuations each agent's entry is an object mapping the sorted,
// comma-joined item subset ("" for the empty set) to its value, covering all
// 2^m subsets. Rationals are "p/q" strings or JSON integers; decimal numbers
// are rejected.
//
// Allocation document:
//   {"allocation": [[0, 2], [1]], "subsidy": ["0", "1/2"]}   (subsidy optional)

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fairsub/core.hpp"
#include "json.hpp"

namespace fairsub::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& r);

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& doc);

struct AllocationFile {
  Allocation allocation;
  std::optional<SubsidyVector> subsidy;
};

Json allocation_to_json(const Allocation& alloc, const SubsidyVector* subsidy = nullptr);
AllocationFile allocation_from_json(const Json& doc);

// Parses text as JSON, mapping syntax errors to ErrorKind::Input.
Json parse(std::string_view text);
// Two-space indented dump with a trailing newline.
std::string dump(const Json& doc);

// Item (i, j) of the tight family, 0-based: index i*(n+1) + j.
Instance example1(std::size_t n);
// A_i = {e_{i,0}, ..., e_{i,n}}.
Allocation example1_allocation(std::size_t n);
// One item worth 1 to each of n agents.
Instance single_item(std::size_t n);
// Values drawn from {0, 1/10, ..., 1}.
Instance random_additive_goods(std::size_t n, std::size_t m, std::uint64_t seed);
// As above with a random sign per value.
Instance random_mixed(std::size_t n, std::size_t m, std::uint64_t seed);
// v_i(X) = min(B_i, max_k sum_{e in X} a_ik(e)) with a_ik(e) in {0, 1/10, ..., 1};
// monotone with marginals in [0, 1].
Instance random_monotone_table(std::size_t n, std::size_t m, std::uint64_t seed);
// Non-monotone table: additive part in [-1/2, 1/2] plus a parity term in
// [-1/2, 1/2], so marginals stay within [-1, 1] and items can be mixed.
Instance random_general_table(std::size_t n, std::size_t m, std::uint64_t seed);

struct Generated {
  Instance instance;
  std::optional<Allocation> canonical;  // example1 only
};

// family: "example1", "single-item", "random-additive-goods", "random-mixed",
// "random-table". m and seed are ignored by the first two.
Generated generate(std::string_view family, std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace fairsub::io

#endif
