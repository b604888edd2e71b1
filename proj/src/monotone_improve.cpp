#include "fairsub/monotone_improve.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "fairsub/ef1.hpp"
#include "fairsub/error.hpp"

namespace fairsub {

namespace {

// min over Y of v_i(X \ Y) with |Y| <= 1.
Rational min_after_one_removal(const Instance& inst, Agent i, const Bundle& x) {
  Rational best = inst.value(i, x);
  for (Item e : x) best = min(best, inst.value_without(i, x, e));
  return best;
}

}  // namespace

Allocation welfare_max_ef1_rearrange(const Instance& inst, const Allocation& x) {
  if (inst.instance_class() != InstanceClass::Monotone)
    fail(ErrorKind::Precondition, "welfare-max EF1 rearrangement requires a monotone instance");
  if (!is_ef1(inst, x)) fail(ErrorKind::Precondition, "starting allocation is not EF1");
  const std::size_t n = inst.agents();
  const WeightMatrix w = weight_matrix(inst, x);

  std::vector<Rational> floor(n * n);  // floor[i*n+k] = min_Y v_i(X_k \ Y)
  for (Agent i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) floor[i * n + k] = min_after_one_removal(inst, i, x[k]);

  std::vector<char> allowed(n * n, 0);
  Rational lo = w(0, 0);
  Rational hi = w(0, 0);
  for (Agent i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k) ok = w(i, j) >= floor[i * n + k];
      allowed[i * n + j] = ok;
      lo = min(lo, w(i, j));
      hi = max(hi, w(i, j));
    }

  // Any permutation through a forbidden edge weighs less than the identity,
  // which is allowed because X is EF1.
  const Rational penalty = lo - (Rational(static_cast<long>(n)) * (hi - lo) + Rational(1));
  WeightMatrix restricted = w;
  for (Agent i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!allowed[i * n + j]) restricted(i, j) = penalty;

  const Permutation sigma = max_weight_permutation(restricted);
  for (Agent i = 0; i < n; ++i)
    ensure(allowed[i * n + sigma[i]], "welfare-max matching used a forbidden edge");
  Allocation a = x.permuted(sigma);
  ensure(is_ef1(inst, a), "welfare-max rearrangement is not EF1");
  return a;
}

std::optional<RelabeledView> relabel_along_longest_path(const Instance& inst,
                                                        const Allocation& a,
                                                        std::span<const Rational> p_star) {
  const std::size_t n = inst.agents();
  if (p_star.size() != n) fail(ErrorKind::Input, "p* has the wrong length");
  const Rational threshold = Rational(static_cast<long>(n)) - Rational(3, 2);
  const auto top = std::max_element(p_star.begin(), p_star.end());
  if (top == p_star.end() || *top <= threshold) return std::nullopt;

  const WeightMatrix w = weight_matrix(inst, a);
  const DiagnosticView diag = diagnostic_view(w, p_star);
  const EnvyGraph g = envy_graph(diag.hat_w, identity_permutation(n));
  const LongestPaths lp = longest_paths(g.gamma);
  ensure(!lp.has_positive_cycle, "relabel: G^{hat_w,id} has a positive cycle");
  std::vector<Rational> reach(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) reach[i] = max(reach[i], lp.dist(i, j));
    ensure(reach[i] == p_star[i], "relabel: longest path lengths differ from p*");
  }

  // Depth-first search over tight edges, smallest vertex first.
  const std::size_t start = static_cast<std::size_t>(top - p_star.begin());
  std::vector<Agent> path{start};
  std::vector<char> visited(n, 0);
  visited[start] = 1;
  std::function<bool(std::size_t)> extend = [&](std::size_t u) {
    if (reach[u].is_zero()) return true;
    for (std::size_t v = 0; v < n; ++v) {
      if (visited[v] || g.gamma(u, v) + reach[v] != reach[u]) continue;
      visited[v] = 1;
      path.push_back(v);
      if (extend(v)) return true;
      path.pop_back();
      visited[v] = 0;
    }
    return false;
  };
  ensure(extend(start), "relabel: no simple longest path from the max-subsidy vertex");
  ensure(path.size() == n, "relabel: longest path does not span all agents");

  RelabeledView view;
  view.path = path;
  view.order.resize(n);
  for (std::size_t k = 0; k < n; ++k) view.order[k] = path[n - 1 - k];
  view.allocation = a.permuted(view.order);
  view.p.resize(n);
  view.r.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    view.p[k] = p_star[view.order[k]];
    view.r[k] = diag.r[view.order[k]];
  }
  const auto& b = view.allocation;
  for (std::size_t k = 1; k < n; ++k) {
    const Agent agent = view.order[k];
    view.s.push_back(Rational(1) + view.r[k] + inst.value(agent, b[k]) -
                     inst.value(agent, b[k - 1]));
  }
  return view;
}

std::optional<Item> select_estar(const Instance& inst, const Allocation& relabeled,
                                 std::span<const Agent> order) {
  if (relabeled.size() < 2 || order.size() != relabeled.size())
    fail(ErrorKind::Precondition, "select_estar needs at least two relabeled agents");
  const Bundle& first = relabeled[0];
  if (first.empty()) return std::nullopt;
  const Agent second = order[1];
  const Rational own = inst.value(second, relabeled[1]);
  for (Item e : first)
    if (own >= inst.value_without(second, first, e)) return e;
  fail(ErrorKind::Internal, "select_estar: no item of A_1 removes the EF1 envy of agent 2");
}

Allocation build_a_double_prime(const Allocation& a_prime) {
  const std::size_t n = a_prime.size();
  if (n == 0) return a_prime;
  Permutation rot(n);
  rot[0] = n - 1;
  for (std::size_t k = 1; k < n; ++k) rot[k] = k - 1;
  return a_prime.permuted(rot);
}

// ---------------------------------------------------------------------------

namespace {

// Runtime checks of the inequalities the n - 3/2 analysis rests on. All
// indices are relabeled and 0-based; s(k) is defined for k = 1..n-1.
class ProofChecks {
 public:
  ProofChecks(const Instance& inst, const RelabeledView& view)
      : inst_(inst), v_(view), n_(inst.agents()) {}

  std::size_t count() const { return count_; }

  void structure() {
    const Rational half(1, 2);
    Rational s_total;
    for (std::size_t k = 1; k < n_; ++k) {
      check(v_.r[k].sign() >= 0 && v_.r[k] <= s(k) && s(k) <= Rational(1),
            "0 <= r_i <= s_i <= 1 fails at label " + std::to_string(k));
      s_total += s(k);
    }
    check(s_total < half, "sum of s_i is not below 1/2");
    Rational prefix;
    check(v_.p[0].is_zero(), "p* of label 0 is not 0");
    for (std::size_t k = 1; k < n_; ++k) {
      prefix += Rational(1) - s(k);
      check(v_.p[k] == prefix, "p*_i differs from sum (1 - s_j) at label " + std::to_string(k));
    }
  }

  // v_i(A_j) - v_i(A_i) - r_i <= -sum_{k=i+1}^{j} (1 - s_k) for i < j.
  void chain_bounds() {
    for (std::size_t i = 0; i < n_; ++i) {
      Rational chain;
      for (std::size_t j = i + 1; j < n_; ++j) {
        chain += Rational(1) - s(j);
        check(val(i, j) - val(i, i) - v_.r[i] <= -chain,
              "chain bound fails for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  // v_0(A_j) <= max{v_0(A_0) - (1 - s_1), min_e v_0(A_0 \ {e})} for j >= 1.
  void first_agent_bound() {
    const Bundle& first = v_.allocation[0];
    if (first.empty()) return;  // the minimum over an empty bundle is unbounded
    Rational least = drop_bound(first, first.front());
    for (Item e : first) least = min(least, drop_bound(first, e));
    const Rational bound = max(val(0, 0) - (Rational(1) - s(1)), least);
    for (std::size_t j = 1; j < n_; ++j)
      check(val(0, j) <= bound, "agent-1 bound fails for bundle " + std::to_string(j));
  }

  // Edge weights of G^{w',id}.
  void a_prime_edges(const Allocation& a1) {
    const Rational half(1, 2);
    const WeightMatrix w = relabeled_weights(a1);
    const Rational first_cap = max(half, w(0, n_ - 1) - w(0, 0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) continue;
        const Rational edge = w(i, j) - w(i, i);
        const Rational cap = i == 0 ? first_cap : (i == 1 ? half : Rational(1));
        check(edge <= cap, "G^{w',id} edge (" + std::to_string(i) + "," + std::to_string(j) +
                               ") exceeds " + cap.str());
      }
  }

  // Edge weights of G^{w'',id}; a1 is A', a2 = A''.
  void a_double_prime_edges(const Allocation& a1, const Allocation& a2) {
    const Rational half(1, 2);
    const WeightMatrix w = relabeled_weights(a2);
    const Agent first = v_.order[0];
    const Rational gap =
        max(Rational(0), inst_.value(first, a1[0]) - inst_.value(first, a1[n_ - 1]));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) continue;
        const Rational edge = w(i, j) - w(i, i);
        Rational cap;
        if (i == 0)
          cap = half + gap;
        else if (i == 1)
          cap = s(1) + s(2);
        else
          cap = s(i);
        check(edge <= cap, "G^{w'',id} edge (" + std::to_string(i) + "," + std::to_string(j) +
                               ") exceeds " + cap.str());
      }
  }

 private:
  const Rational& s(std::size_t k) const { return v_.s[k - 1]; }

  Rational val(std::size_t i, std::size_t j) const {
    return inst_.value(v_.order[i], v_.allocation[j]);
  }

  Rational drop_bound(const Bundle& first, Item e) const {
    return inst_.value_without(v_.order[0], first, e);
  }

  WeightMatrix relabeled_weights(const Allocation& a) const {
    WeightMatrix w(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) w(i, j) = inst_.value(v_.order[i], a[j]);
    return w;
  }

  void check(bool cond, const std::string& what) {
    ++count_;
    ensure(cond, "monotone improvement: " + what);
  }

  const Instance& inst_;
  const RelabeledView& v_;
  std::size_t n_;
  std::size_t count_ = 0;
};

}  // namespace

ImprovedResult improved_solve(const Instance& inst, const ImproveOptions& options) {
  const std::size_t n = inst.agents();
  if (n < 3)
    fail(ErrorKind::Precondition,
         "the improved procedure needs n >= 3; use solve_given_allocation for n <= 2");
  if (inst.instance_class() != InstanceClass::Monotone)
    fail(ErrorKind::Precondition, "the improved procedure requires a monotone instance");

  ImprovedResult out;
  ImprovementTrace& trace = out.trace;
  if (options.start) {
    options.start->validate(inst);
    trace.start_allocation = *options.start;
  } else {
    trace.start_allocation = envy_cycles(inst);
  }
  trace.base_allocation = welfare_max_ef1_rearrange(inst, trace.start_allocation);
  const Allocation& a = trace.base_allocation;
  const WeightMatrix w = weight_matrix(inst, a);
  trace.base_subsidy = min_subsidy(w, max_weight_permutation(w));

  auto view = relabel_along_longest_path(inst, a, trace.base_subsidy);
  if (!view) {
    out.solution = solve_given_allocation(inst, a);
    trace.chosen = "p*";
  } else {
    trace.triggered = true;
    ProofChecks checks(inst, *view);
    checks.structure();
    checks.chain_bounds();
    checks.first_agent_bound();

    trace.e_star = select_estar(inst, view->allocation, view->order);
    std::vector<Bundle> bundles = view->allocation.bundles();
    if (trace.e_star) {
      auto& first = bundles.front();
      first.erase(std::find(first.begin(), first.end(), *trace.e_star));
      auto& last = bundles.back();
      last.insert(std::upper_bound(last.begin(), last.end(), *trace.e_star), *trace.e_star);
    }
    trace.a_prime = Allocation(std::move(bundles));
    trace.a_double_prime = build_a_double_prime(*trace.a_prime);
    checks.a_prime_edges(*trace.a_prime);
    checks.a_double_prime_edges(*trace.a_prime, *trace.a_double_prime);
    trace.assertions_checked = checks.count();

    // Weights of A' for the relabeled agents.
    WeightMatrix w1(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w1(i, j) = inst.value(view->order[i], (*trace.a_prime)[j]);
    const Agent first_agent = view->order[0];
    trace.chosen = inst.value(first_agent, (*trace.a_prime)[n - 1]) <=
                           inst.value(first_agent, (*trace.a_prime)[0])
                       ? "p'"
                       : "p''";
    trace.tau = max_weight_permutation(w1);
    const SubsidyVector p1 = min_subsidy(w1, *trace.tau);

    std::vector<Bundle> final_bundles(n);
    SubsidizedAllocation& sol = out.solution;
    sol.subsidy.assign(n, Rational());
    sol.sigma.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bundle = (*trace.tau)[k];
      final_bundles[view->order[k]] = (*trace.a_prime)[bundle];
      sol.subsidy[view->order[k]] = p1[bundle];
      sol.sigma[view->order[k]] = bundle;
    }
    sol.allocation = Allocation(std::move(final_bundles));
    trace.relabeled = std::move(view);
  }

  const SubsidizedAllocation& sol = out.solution;
  ensure(is_envy_free_with_subsidy(inst, sol.allocation, sol.subsidy),
         "improved solution is not envy-free");
  Rational total;
  const Rational max_cap = Rational(static_cast<long>(n)) - Rational(3, 2);
  for (const auto& p : sol.subsidy) {
    ensure(p <= max_cap, "improved solution exceeds the per-agent ceiling n - 3/2");
    total += p;
  }
  const long nn = static_cast<long>(n);
  ensure(total <= Rational(nn * nn - nn - 1, 2),
         "improved solution exceeds the total ceiling (n^2 - n - 1)/2");
  return out;
}

}  // namespace fairsub
