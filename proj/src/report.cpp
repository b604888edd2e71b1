#include "fairsub/report.hpp"

#include <algorithm>
#include <sstream>

#include "fairsub/error.hpp"
#include "fairsub/monotone_improve.hpp"
#include "fairsub/subsidy.hpp"

namespace fairsub {

const char* to_string(SolveMode m) noexcept {
  switch (m) {
    case SolveMode::Auto: return "auto";
    case SolveMode::Basic: return "basic";
    case SolveMode::Improved: return "improved";
  }
  return "?";
}

SolveMode parse_solve_mode(const std::string& name) {
  for (SolveMode m : {SolveMode::Auto, SolveMode::Basic, SolveMode::Improved})
    if (name == to_string(m)) return m;
  fail(ErrorKind::Input, "unknown mode \"" + name + "\" (expected basic, improved or auto)");
}

namespace {

using io::Json;

Json rationals(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(v.str());
  return arr;
}

Json bundles(const Allocation& a) {
  Json arr = Json::array();
  for (const auto& b : a.bundles()) arr.push_back(b);
  return arr;
}

std::string join(const std::vector<Rational>& values) {
  std::string s = "(";
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + values[i].str();
  return s + ")";
}

std::string join(const std::vector<std::size_t>& values) {
  std::string s = "(";
  for (std::size_t i = 0; i < values.size(); ++i)
    s += (i ? ", " : "") + std::to_string(values[i]);
  return s + ")";
}

std::string render_allocation(const Allocation& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += "  agent " + std::to_string(i) + ": {";
    for (std::size_t k = 0; k < a[i].size(); ++k) s += (k ? "," : "") + std::to_string(a[i][k]);
    s += "}\n";
  }
  return s;
}

struct BoundLine {
  std::string name;
  Rational value;
  Rational bound;
  bool applicable = true;
  bool pass() const { return value <= bound; }
};

Json bound_block(const BoundLine& max_line, const BoundLine& total_line) {
  Json b;
  b["max_bound"] = max_line.bound.str();
  b["total_bound"] = total_line.bound.str();
  b["max_pass"] = max_line.pass();
  b["total_pass"] = total_line.pass();
  b["applicable"] = max_line.applicable;
  return b;
}

std::string render_bound(const BoundLine& line) {
  std::string s = line.name + " " + line.value.str() + " <= " + line.bound.str() + " " +
                  (line.pass() ? "PASS" : "FAIL");
  if (!line.applicable) s += " (not applicable: input allocation is not EF1)";
  return s + "\n";
}

}  // namespace

Report solve_report(const Instance& inst, const SolveOptions& options) {
  const std::size_t n = inst.agents();
  const long nl = static_cast<long>(n);
  const InstanceClass cls = inst.instance_class();
  const bool improvable = cls == InstanceClass::Monotone && n >= 3;

  SolveMode mode = options.mode;
  if (mode == SolveMode::Auto) mode = improvable ? SolveMode::Improved : SolveMode::Basic;
  if (mode == SolveMode::Improved && !improvable)
    fail(ErrorKind::Precondition,
         std::string("improved mode needs a monotone instance with n >= 3 (this one is ") +
             to_string(cls) + " with n = " + std::to_string(n) + "); use --mode basic");

  Allocation input;
  std::string ef1_source;
  if (options.start) {
    options.start->validate(inst);
    input = *options.start;
    ef1_source = "given";
  } else {
    Ef1Result found = find_ef1(inst, options.ef1_method, options.exhaustive_cap);
    input = std::move(found.allocation);
    ef1_source = to_string(found.method);
  }
  const bool input_ef1 = is_ef1(inst, input);

  SubsidizedAllocation sol;
  WeightMatrix certified_w;  // weights of the arrangement whose minimum subsidy was paid
  std::optional<ImprovementTrace> trace;
  if (mode == SolveMode::Basic) {
    sol = solve_given_allocation(inst, input);
    certified_w = weight_matrix(inst, input);
  } else {
    ImprovedResult res = improved_solve(inst, ImproveOptions{input});
    sol = std::move(res.solution);
    trace = std::move(res.trace);
    if (trace->triggered) {
      std::vector<Bundle> b(n);
      for (std::size_t k = 0; k < n; ++k)
        b[trace->relabeled->order[k]] = (*trace->a_prime)[k];
      certified_w = weight_matrix(inst, Allocation(std::move(b)));
    } else {
      certified_w = weight_matrix(inst, trace->base_allocation);
    }
  }

  const EnvyFreeCheck ef = check_envy_free_with_subsidy(inst, sol.allocation, sol.subsidy);
  Rational total;
  Rational largest;
  for (const auto& p : sol.subsidy) {
    total += p;
    largest = max(largest, p);
  }
  const bool ef1_bound_applicable = mode == SolveMode::Improved || input_ef1;
  const BoundLine t1_max{"ef1_bound max", largest, Rational(nl - 1), ef1_bound_applicable};
  const BoundLine t1_total{"ef1_bound total", total, Rational(nl * (nl - 1), 2),
                           ef1_bound_applicable};
  const BetaBounds beta = beta_bounds(certified_w);
  std::vector<Rational> sorted = sol.subsidy;
  std::sort(sorted.begin(), sorted.end(), [](const Rational& a, const Rational& b) { return b < a; });
  bool rank_bound_pass = true;
  for (std::size_t r = 0; r < n; ++r) rank_bound_pass &= sorted[r] <= beta.bounds[r];

  bool verified = ef.ok && rank_bound_pass;
  if (ef1_bound_applicable) verified &= t1_max.pass() && t1_total.pass();

  Json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "solve";
  doc["mode"] = to_string(mode);
  doc["ef1_method"] = ef1_source;
  doc["n"] = n;
  doc["m"] = inst.items();
  doc["instance_class"] = to_string(cls);
  doc["allocation"] = bundles(sol.allocation);
  doc["subsidy"] = rationals(sol.subsidy);
  doc["total_subsidy"] = total.str();
  doc["max_subsidy"] = largest.str();
  doc["permutation"] = sol.sigma;

  Json bounds;
  bounds["ef1_bound"] = bound_block(t1_max, t1_total);
  std::optional<BoundLine> t2_max, t2_total;
  if (mode == SolveMode::Improved) {
    t2_max = BoundLine{"improved_bound max", largest, Rational(2 * nl - 3, 2)};
    t2_total = BoundLine{"improved_bound total", total, Rational(nl * nl - nl - 1, 2)};
    bounds["improved_bound"] = bound_block(*t2_max, *t2_total);
    verified &= t2_max->pass() && t2_total->pass();
  }
  Json rank_bound;
  rank_bound["rank_bounds"] = rationals(beta.bounds);
  rank_bound["sorted_subsidy"] = rationals(sorted);
  rank_bound["pass"] = rank_bound_pass;
  bounds["rank_bound"] = std::move(rank_bound);
  doc["bounds"] = std::move(bounds);

  Json cert;
  cert["envy_free"] = ef.ok;
  cert["max_violation"] = ef.max_violation.str();
  cert["input_ef1"] = input_ef1;
  cert["output_ef1"] = is_ef1(inst, sol.allocation);
  cert["beta"] = rationals(beta.beta);
  doc["certificates"] = std::move(cert);

  if (trace) {
    Json t;
    t["start_allocation"] = bundles(trace->start_allocation);
    t["base_allocation"] = bundles(trace->base_allocation);
    t["base_subsidy"] = rationals(trace->base_subsidy);
    t["triggered"] = trace->triggered;
    t["chosen"] = trace->chosen;
    if (trace->triggered) {
      const RelabeledView& view = *trace->relabeled;
      t["longest_path"] = view.path;
      t["relabeling"] = view.order;
      t["r"] = rationals(view.r);
      t["s"] = rationals(view.s);
      t["e_star"] = trace->e_star ? Json(*trace->e_star) : Json(nullptr);
      t["a_prime"] = bundles(*trace->a_prime);
      t["a_double_prime"] = bundles(*trace->a_double_prime);
      t["tau"] = *trace->tau;
      t["assertions_checked"] = trace->assertions_checked;
    }
    doc["trace"] = std::move(t);
  }

  std::ostringstream text;
  text << "mode: " << to_string(mode) << " (EF1 allocation: " << ef1_source << ")\n";
  text << "instance: n=" << n << " m=" << inst.items() << " class=" << to_string(cls) << "\n";
  text << "allocation:\n" << render_allocation(sol.allocation);
  text << "subsidy: " << join(sol.subsidy) << "\n";
  text << "total " << total << ", max " << largest << "\n";
  text << "permutation: " << join(sol.sigma) << "\n";
  text << render_bound(t1_max) << render_bound(t1_total);
  if (t2_max) text << render_bound(*t2_max) << render_bound(*t2_total);
  text << "rank_bound ranks " << join(sorted) << " <= " << join(beta.bounds) << " "
       << (rank_bound_pass ? "PASS" : "FAIL") << "\n";
  text << "envy-free: " << (ef.ok ? "yes" : "NO") << "\n";
  text << "input EF1: " << (input_ef1 ? "yes" : "no") << "\n";
  text << "beta: " << join(beta.beta) << "\n";
  if (trace) {
    text << "modification: " << (trace->triggered ? "applied" : "not needed")
         << " (certified by " << trace->chosen << ")\n";
    if (trace->triggered) {
      text << "longest path: " << join(trace->relabeled->path) << "\n";
      text << "e*: " << (trace->e_star ? std::to_string(*trace->e_star) : "none") << "\n";
      text << "s: " << join(trace->relabeled->s) << "\n";
    }
  }

  return {std::move(doc), text.str(), verified ? Verdict::Ok : Verdict::VerificationFailed};
}

Report check_report(const Instance& inst, const io::AllocationFile& file) {
  if (!file.subsidy) fail(ErrorKind::Input, "allocation document has no \"subsidy\" array");
  const EnvyFreeCheck ef = check_envy_free_with_subsidy(inst, file.allocation, *file.subsidy);

  Json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "check";
  doc["envy_free"] = ef.ok;
  doc["max_violation"] = ef.max_violation.str();
  Json list = Json::array();
  std::ostringstream text;
  text << "envy-free: " << (ef.ok ? "yes" : "NO") << "\n";
  for (const auto& v : ef.violations) {
    Json item;
    item["agent"] = v.pair.envious;
    item["envied"] = v.pair.envied;
    item["amount"] = v.amount.str();
    list.push_back(std::move(item));
    text << "violation: agent " << v.pair.envious << " envies agent " << v.pair.envied << " by "
         << v.amount << "\n";
  }
  doc["violations"] = std::move(list);
  if (!ef.ok)
    text << "max violation " << ef.max_violation << " at (" << ef.worst->envious << ","
         << ef.worst->envied << ")\n";
  return {std::move(doc), text.str(), ef.ok ? Verdict::Ok : Verdict::VerificationFailed};
}

Report oracle_report(const Instance& inst, const OracleOptions& options) {
  const std::size_t n = inst.agents();
  Verdict verdict = Verdict::Ok;
  Json doc;
  doc["schema_version"] = io::kSchemaVersion;
  doc["command"] = "oracle";
  doc["n"] = n;
  doc["m"] = inst.items();
  std::ostringstream text;

  auto skipped = [&](const Error& err) {
    if (err.kind() != ErrorKind::Resource) throw;
    verdict = Verdict::ResourceExceeded;
    Json s;
    s["skipped"] = err.what();
    return s;
  };

  Allocation input;
  if (options.start) {
    options.start->validate(inst);
    input = *options.start;
  } else {
    input = find_ef1(inst, options.ef1_method).allocation;
  }

  const SubsidizedAllocation basic = solve_given_allocation(inst, input);
  Rational basic_total;
  for (const auto& p : basic.subsidy) basic_total += p;
  {
    Json s;
    s["allocation"] = bundles(basic.allocation);
    s["subsidy"] = rationals(basic.subsidy);
    s["total_subsidy"] = basic_total.str();
    doc["solver_basic"] = std::move(s);
    text << "solver basic total " << basic_total << " subsidy " << join(basic.subsidy) << "\n";
  }

  try {
    const WeightMatrix w = weight_matrix(inst, input);
    const oracle::PermutationResult brute = oracle::brute_max_weight_perm(w, options.budget);
    const Permutation sigma = max_weight_permutation(w);
    const SubsidyVector solver_p = min_subsidy(w, sigma);
    const SubsidyVector oracle_p = oracle::brute_min_subsidy(w, brute.sigma, options.budget);
    const bool perm_equal = permutation_weight(w, sigma) == brute.total;
    const bool subsidy_equal = solver_p == oracle_p;
    Json s;
    s["max_weight_equal"] = perm_equal;
    s["subsidy_vectors_equal"] = subsidy_equal;
    s["solver_subsidy_by_bundle"] = rationals(solver_p);
    s["oracle_subsidy_by_bundle"] = rationals(oracle_p);
    doc["cross_check"] = std::move(s);
    text << "cross-check: max weight " << (perm_equal ? "equal" : "DIFFERENT")
         << ", subsidy vectors " << (subsidy_equal ? "equal" : "DIFFERENT") << "\n";
    if (!perm_equal || !subsidy_equal) verdict = Verdict::VerificationFailed;
  } catch (const Error& err) {
    doc["cross_check"] = skipped(err);
    text << "cross-check: skipped (" << err.what() << ")\n";
  }

  std::optional<Rational> improved_total;
  if (inst.instance_class() == InstanceClass::Monotone && n >= 3) {
    const ImprovedResult res = improved_solve(inst, ImproveOptions{input});
    Rational t;
    for (const auto& p : res.solution.subsidy) t += p;
    Json s;
    s["allocation"] = bundles(res.solution.allocation);
    s["subsidy"] = rationals(res.solution.subsidy);
    s["total_subsidy"] = t.str();
    doc["solver_improved"] = std::move(s);
    text << "solver improved total " << t << " subsidy " << join(res.solution.subsidy) << "\n";
    improved_total = std::move(t);
  }

  try {
    const oracle::GlobalOptimum best = oracle::brute_min_total_subsidy(inst, options.budget);
    Json s;
    s["allocation"] = bundles(best.allocation);
    s["subsidy"] = rationals(best.subsidy);
    s["total_subsidy"] = best.total.str();
    s["basic_gap"] = (basic_total - best.total).str();
    if (improved_total) s["improved_gap"] = (*improved_total - best.total).str();
    doc["global_minimum"] = std::move(s);
    text << "oracle global minimum total " << best.total << ", basic gap "
         << (basic_total - best.total);
    if (improved_total) text << ", improved gap " << (*improved_total - best.total);
    text << "\n";
  } catch (const Error& err) {
    doc["global_minimum"] = skipped(err);
    text << "global minimum: skipped (" << err.what() << ")\n";
  }
  return {std::move(doc), text.str(), verdict};
}

}  // namespace fairsub
