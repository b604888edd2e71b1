#include "fairsub/subsidy.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fairsub/error.hpp"

namespace fairsub {

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  WeightMatrix w(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) fail(ErrorKind::Input, "weight matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) w(i, j) = rows[i][j];
  }
  return w;
}

Permutation identity_permutation(std::size_t n) {
  Permutation id(n);
  std::iota(id.begin(), id.end(), std::size_t{0});
  return id;
}

bool is_permutation_of(std::span<const std::size_t> sigma, std::size_t n) {
  if (sigma.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (std::size_t j : sigma) {
    if (j >= n || seen[j]) return false;
    seen[j] = 1;
  }
  return true;
}

Rational permutation_weight(const WeightMatrix& w, std::span<const std::size_t> sigma) {
  Rational total;
  for (std::size_t i = 0; i < sigma.size(); ++i) total += w(i, sigma[i]);
  return total;
}

WeightMatrix weight_matrix(const Instance& inst, const Allocation& alloc) {
  alloc.validate(inst);
  const std::size_t n = inst.agents();
  WeightMatrix w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = inst.value(i, alloc[j]);
  return w;
}

// ---------------------------------------------------------------------------
// Assignment

namespace {

struct Potentials {
  std::vector<Rational> row;  // u
  std::vector<Rational> col;  // v
};

// Hungarian method (shortest augmenting path form) minimising
// sum cost(i, match[i]). Maintains row[i] + col[j] <= cost(i, j) for every
// row already inserted, with equality on matched pairs.
Potentials hungarian_min(const WeightMatrix& cost) {
  const std::size_t n = cost.size();
  // 1-based internally; column 0 is the virtual root of the augmenting tree.
  std::vector<Rational> u(n + 1), v(n + 1), minv(n + 1);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<char> used(n + 1, 0), has_minv(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      std::size_t j1 = 0;
      Rational delta;
      bool has_delta = false;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        Rational cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (!has_minv[j] || cur < minv[j]) {
          minv[j] = std::move(cur);
          has_minv[j] = 1;
          way[j] = j0;
        }
        if (!has_delta || minv[j] < delta) {
          delta = minv[j];
          has_delta = true;
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Potentials pot;
  pot.row.assign(u.begin() + 1, u.end());
  pot.col.assign(v.begin() + 1, v.end());
  return pot;
}

// Kuhn's augmenting path search restricted to allowed edges.
bool augment(std::size_t row, const std::vector<std::vector<char>>& allowed,
             std::vector<char>& visited, std::vector<long>& col_owner) {
  for (std::size_t j = 0; j < allowed[row].size(); ++j) {
    if (!allowed[row][j] || visited[j]) continue;
    visited[j] = 1;
    if (col_owner[j] < 0 ||
        augment(static_cast<std::size_t>(col_owner[j]), allowed, visited, col_owner)) {
      col_owner[j] = static_cast<long>(row);
      return true;
    }
  }
  return false;
}

bool has_perfect_matching(const std::vector<std::vector<char>>& allowed,
                          const std::vector<std::size_t>& rows) {
  const std::size_t n = allowed.size();
  std::vector<long> col_owner(n, -1);
  for (std::size_t r : rows) {
    std::vector<char> visited(n, 0);
    if (!augment(r, allowed, visited, col_owner)) return false;
  }
  return true;
}

}  // namespace

Permutation max_weight_permutation(const WeightMatrix& w) {
  const std::size_t n = w.size();
  if (n == 0) return {};
  WeightMatrix cost(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost(i, j) = -w(i, j);
  const Potentials pot = hungarian_min(cost);

  // Every optimal assignment uses only tight edges of any optimal dual.
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational slack = cost(i, j) - pot.row[i] - pot.col[j];
      ensure(slack.sign() >= 0, "assignment: dual potentials infeasible");
      tight[i][j] = slack.is_zero();
    }

  // Lexicographically first perfect matching on the tight edges.
  Permutation sigma(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rest;
    for (std::size_t r = i + 1; r < n; ++r) rest.push_back(r);
    bool placed = false;
    for (std::size_t j = 0; j < n && !placed; ++j) {
      if (!tight[i][j]) continue;
      auto trial = tight;
      for (std::size_t c = 0; c < n; ++c) trial[i][c] = c == j;
      for (std::size_t r = 0; r < n; ++r)
        if (r != i) trial[r][j] = 0;
      std::vector<std::size_t> rows = rest;
      for (std::size_t r = 0; r <= i; ++r) rows.push_back(r);
      if (has_perfect_matching(trial, rows)) {
        sigma[i] = j;
        tight = std::move(trial);
        placed = true;
      }
    }
    ensure(placed, "assignment: tight subgraph lost its perfect matching");
  }

  Rational dual;
  for (std::size_t i = 0; i < n; ++i) dual += pot.row[i] + pot.col[i];
  ensure(-permutation_weight(w, sigma) == dual, "assignment: primal and dual values differ");
  return sigma;
}

bool is_envy_freeable(const WeightMatrix& w) {
  return permutation_weight(w, identity_permutation(w.size())) ==
         permutation_weight(w, max_weight_permutation(w));
}

// ---------------------------------------------------------------------------
// Envy graphs

EnvyGraph envy_graph(const WeightMatrix& w, std::span<const std::size_t> sigma) {
  const std::size_t n = w.size();
  if (!is_permutation_of(sigma, n)) fail(ErrorKind::Input, "sigma is not a permutation");
  EnvyGraph g{n, WeightMatrix(n), false};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) g.gamma(i, j) = w(i, sigma[j]) - w(i, sigma[i]);
  g.has_positive_cycle = longest_paths(g.gamma).has_positive_cycle;
  return g;
}

namespace {

// Floyd-Warshall; reports a negative cycle when some dist(i, i) < 0.
bool all_pairs_shortest(WeightMatrix& dist) {
  const std::size_t n = dist.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational via = dist(i, k) + dist(k, j);
        if (via < dist(i, j)) dist(i, j) = std::move(via);
      }
  for (std::size_t i = 0; i < n; ++i)
    if (dist(i, i).sign() < 0) return true;
  return false;
}

}  // namespace

LongestPaths longest_paths(const WeightMatrix& gamma) {
  const std::size_t n = gamma.size();
  WeightMatrix neg(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) neg(i, j) = -gamma(i, j);
  LongestPaths out;
  out.has_positive_cycle = all_pairs_shortest(neg);
  out.dist = WeightMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.dist(i, j) = -neg(i, j);
  return out;
}

SubsidyVector min_subsidy(const WeightMatrix& w, std::span<const std::size_t> sigma) {
  const std::size_t n = w.size();
  const EnvyGraph g = envy_graph(w, sigma);
  const LongestPaths lp = longest_paths(g.gamma);
  if (lp.has_positive_cycle)
    fail(ErrorKind::NotEnvyFreeable,
         "envy graph has a positive-weight cycle; sigma is not a maximum weight permutation");
  SubsidyVector p(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational best;  // empty path
    for (std::size_t j = 0; j < n; ++j) best = max(best, lp.dist(i, j));
    p[sigma[i]] = best;
  }
  if (n > 0)
    ensure(std::min_element(p.begin(), p.end())->is_zero(), "minimum subsidy has no zero entry");
  return p;
}

SubsidizedAllocation solve_given_allocation(const Instance& inst, const Allocation& alloc) {
  const WeightMatrix w = weight_matrix(inst, alloc);
  Permutation sigma = max_weight_permutation(w);
  const SubsidyVector by_bundle = min_subsidy(w, sigma);
  SubsidizedAllocation out{alloc.permuted(sigma), SubsidyVector(sigma.size()), sigma};
  for (std::size_t i = 0; i < sigma.size(); ++i) out.subsidy[i] = by_bundle[sigma[i]];
  ensure(is_envy_free_with_subsidy(inst, out.allocation, out.subsidy),
         "solve_given_allocation produced an allocation that is not envy-free");
  return out;
}

// ---------------------------------------------------------------------------
// Certificates

BetaBounds beta_bounds(const WeightMatrix& w) {
  const std::size_t n = w.size();
  BetaBounds out;
  out.beta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational best;  // j = i contributes 0, which is also the clamp
    for (std::size_t j = 0; j < n; ++j) best = max(best, w(i, j) - w(i, i));
    out.beta[i] = best;
  }
  std::sort(out.beta.begin(), out.beta.end(),
            [](const Rational& a, const Rational& b) { return b < a; });
  out.bounds.resize(n);
  for (std::size_t r = 1; r <= n; ++r) {
    Rational total;
    for (std::size_t l = 0; l < n - r; ++l) total += out.beta[l];
    out.bounds[r - 1] = total;
  }
  return out;
}

bool efk_bound_check(const Instance& inst, const Allocation& alloc, std::size_t k) {
  if (!is_efk(inst, alloc, k))
    fail(ErrorKind::Precondition, "allocation is not EF" + std::to_string(k));
  const SubsidizedAllocation sol = solve_given_allocation(inst, alloc);
  const long n = static_cast<long>(inst.agents());
  const Rational kk(static_cast<long>(k));
  const Rational max_bound = kk * Rational(n - 1);
  const Rational total_bound = kk * Rational(n * (n - 1), 2);
  Rational total;
  for (const auto& p : sol.subsidy) {
    if (p > max_bound) return false;
    total += p;
  }
  return total <= total_bound;
}

DiagnosticView diagnostic_view(const WeightMatrix& w, std::span<const Rational> p) {
  const std::size_t n = w.size();
  if (p.size() != n) fail(ErrorKind::Input, "subsidy vector length does not match the matrix");
  DiagnosticView d;
  d.q.resize(n);
  d.r.resize(n);
  d.hat_w = w;
  for (std::size_t i = 0; i < n; ++i) {
    Rational best = w(i, 0) + p[0];
    for (std::size_t j = 1; j < n; ++j) best = max(best, w(i, j) + p[j]);
    d.q[i] = best;
    d.r[i] = best - w(i, i) - p[i];
    ensure(d.r[i].sign() >= 0, "diagnostic: negative r");
    d.hat_w(i, i) += d.r[i];
  }
  d.beta = beta_bounds(w).beta;

  const Permutation id = identity_permutation(n);
  ensure(permutation_weight(d.hat_w, id) ==
             permutation_weight(d.hat_w, max_weight_permutation(d.hat_w)),
         "diagnostic: identity is not a maximum weight permutation for hat_w");
  const SubsidyVector hat_p = min_subsidy(d.hat_w, id);
  ensure(std::equal(hat_p.begin(), hat_p.end(), p.begin(), p.end()),
         "diagnostic: minimum subsidy of hat_w differs from p");
  const Permutation sigma = max_weight_permutation(w);
  for (std::size_t i = 0; i < n; ++i)
    ensure((w(i, sigma[i]) + p[sigma[i]] - d.q[i]).is_zero(),
           "diagnostic: complementary slackness fails on row " + std::to_string(i));
  return d;
}

}  // namespace fairsub
