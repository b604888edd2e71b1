#ifndef FAIRSUB_TESTS_SUPPORT_HPP
#define FAIRSUB_TESTS_SUPPORT_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairsub/core.hpp"
#include "fairsub/error.hpp"
#include "fairsub/subsidy.hpp"

namespace fairsub::test {

// Kind of the Error thrown by f; fails the test when nothing is thrown.
template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Internal;
}

inline Rational q(const char* text) { return Rational::parse(text); }

inline std::vector<Rational> qs(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(q(t));
  return out;
}

inline WeightMatrix matrix(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
  return WeightMatrix::from_rows(r);
}

inline std::vector<Rational> ints(std::initializer_list<long> values) {
  return {values.begin(), values.end()};
}

inline Rational total(const std::vector<Rational>& p) { return sum(p); }

inline std::vector<Rational> sorted(std::vector<Rational> p) {
  std::sort(p.begin(), p.end());
  return p;
}

inline Allocation random_allocation(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::vector<Agent> owner(m);
  for (auto& o : owner) o = rng() % n;
  return Allocation::from_assignment(n, owner);
}

// Entries k/denom with k uniform in [-range, range].
inline WeightMatrix random_matrix(std::size_t n, long denom, long range, std::mt19937_64& rng) {
  WeightMatrix w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      w(i, j) = Rational(static_cast<long>(rng() % (2 * range + 1)) - range, denom);
  return w;
}

// Same instance as a full value table; used to cross-check the additive paths.
inline Instance as_table(const Instance& inst) {
  const std::size_t m = inst.items();
  std::vector<std::vector<Rational>> tables(inst.agents(),
                                            std::vector<Rational>(std::size_t{1} << m));
  for (std::size_t i = 0; i < inst.agents(); ++i)
    for (std::size_t mask = 0; mask < tables[i].size(); ++mask) {
      Bundle b;
      for (std::size_t e = 0; e < m; ++e)
        if (mask >> e & 1) b.push_back(e);
      tables[i][mask] = inst.value(i, b);
    }
  return Instance::table(m, std::move(tables));
}

}  // namespace fairsub::test

#endif
