#include "fairsub/fairsub.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "fairsub/error.hpp"
#include "fairsub/io.hpp"
#include "fairsub/report.hpp"

struct fairsub_instance {
  fairsub::Instance value;
};

struct fairsub_allocation {
  fairsub::io::AllocationFile value;
};

struct fairsub_report {
  fairsub_status status;
  std::string json;
  std::string text;
  std::string solution;
};

namespace {

thread_local std::string last_error;

fairsub_status status_of(fairsub::ErrorKind kind) {
  using fairsub::ErrorKind;
  switch (kind) {
    case ErrorKind::Input: return FAIRSUB_INPUT_ERROR;
    case ErrorKind::Precondition: return FAIRSUB_PRECONDITION_ERROR;
    case ErrorKind::Resource: return FAIRSUB_RESOURCE_ERROR;
    case ErrorKind::NotEnvyFreeable: return FAIRSUB_NOT_ENVY_FREEABLE;
    case ErrorKind::Unsupported: return FAIRSUB_UNSUPPORTED;
    case ErrorKind::Internal: return FAIRSUB_INTERNAL_ERROR;
  }
  return FAIRSUB_INTERNAL_ERROR;
}

fairsub_status status_of(fairsub::Verdict v) {
  switch (v) {
    case fairsub::Verdict::Ok: return FAIRSUB_OK;
    case fairsub::Verdict::VerificationFailed: return FAIRSUB_VERIFICATION_FAILED;
    case fairsub::Verdict::ResourceExceeded: return FAIRSUB_RESOURCE_ERROR;
  }
  return FAIRSUB_INTERNAL_ERROR;
}

// Runs body, translating exceptions into a status and the last-error message.
template <class F>
fairsub_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const fairsub::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FAIRSUB_RESOURCE_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FAIRSUB_INTERNAL_ERROR;
  }
}

fairsub_status null_argument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return FAIRSUB_INPUT_ERROR;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fairsub_report* make_report(fairsub::Report&& r, bool with_solution) {
  auto* out = new fairsub_report{status_of(r.verdict), fairsub::io::dump(r.doc),
                                 std::move(r.text), {}};
  if (with_solution) {
    fairsub::io::Json sol;
    sol["allocation"] = r.doc["allocation"];
    sol["subsidy"] = r.doc["subsidy"];
    out->solution = fairsub::io::dump(sol);
  }
  return out;
}

fairsub::Ef1Method method_or_auto(const char* name) {
  return name ? fairsub::parse_ef1_method(name) : fairsub::Ef1Method::Auto;
}

}  // namespace

extern "C" {

const char* fairsub_last_error(void) { return last_error.c_str(); }

const char* fairsub_status_name(fairsub_status status) {
  switch (status) {
    case FAIRSUB_OK: return "ok";
    case FAIRSUB_VERIFICATION_FAILED: return "verification failed";
    case FAIRSUB_INPUT_ERROR: return "input error";
    case FAIRSUB_RESOURCE_ERROR: return "resource limit exceeded";
    case FAIRSUB_PRECONDITION_ERROR: return "precondition violated";
    case FAIRSUB_NOT_ENVY_FREEABLE: return "not envy-freeable";
    case FAIRSUB_UNSUPPORTED: return "unsupported instance";
    case FAIRSUB_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

fairsub_status fairsub_instance_from_json(const char* text, fairsub_instance** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new fairsub_instance{fairsub::io::instance_from_json(fairsub::io::parse(text))};
    return FAIRSUB_OK;
  });
}

fairsub_status fairsub_generate(const char* family, size_t n, size_t m, uint64_t seed,
                                fairsub_instance** out, fairsub_allocation** canonical) {
  if (!family) return null_argument("family");
  if (!out) return null_argument("out");
  *out = nullptr;
  if (canonical) *canonical = nullptr;
  return guarded([&] {
    fairsub::io::Generated g = fairsub::io::generate(family, n, m, seed);
    *out = new fairsub_instance{std::move(g.instance)};
    if (canonical && g.canonical)
      *canonical = new fairsub_allocation{{std::move(*g.canonical), std::nullopt}};
    return FAIRSUB_OK;
  });
}

size_t fairsub_instance_agents(const fairsub_instance* inst) {
  return inst ? inst->value.agents() : 0;
}

size_t fairsub_instance_items(const fairsub_instance* inst) {
  return inst ? inst->value.items() : 0;
}

char* fairsub_instance_to_json(const fairsub_instance* inst) {
  if (!inst) return nullptr;
  return copy_string(fairsub::io::dump(fairsub::io::instance_to_json(inst->value)));
}

void fairsub_instance_free(fairsub_instance* inst) { delete inst; }

fairsub_status fairsub_allocation_from_json(const char* text, fairsub_allocation** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new fairsub_allocation{fairsub::io::allocation_from_json(fairsub::io::parse(text))};
    return FAIRSUB_OK;
  });
}

char* fairsub_allocation_to_json(const fairsub_allocation* alloc) {
  if (!alloc) return nullptr;
  const auto& f = alloc->value;
  return copy_string(fairsub::io::dump(
      fairsub::io::allocation_to_json(f.allocation, f.subsidy ? &*f.subsidy : nullptr)));
}

void fairsub_allocation_free(fairsub_allocation* alloc) { delete alloc; }

void fairsub_string_free(char* s) { std::free(s); }

void fairsub_solve_options_init(fairsub_solve_options* options) {
  if (!options) return;
  options->mode = "auto";
  options->ef1_method = "auto";
  options->exhaustive_cap = fairsub::kDefaultExhaustiveCap;
  options->start = nullptr;
}

fairsub_status fairsub_solve(const fairsub_instance* inst, const fairsub_solve_options* options,
                             fairsub_report** out) {
  if (!inst) return null_argument("inst");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    fairsub::SolveOptions opts;
    if (options) {
      if (options->mode) opts.mode = fairsub::parse_solve_mode(options->mode);
      opts.ef1_method = method_or_auto(options->ef1_method);
      opts.exhaustive_cap = options->exhaustive_cap;
      if (options->start) opts.start = options->start->value.allocation;
    }
    *out = make_report(fairsub::solve_report(inst->value, opts), true);
    return (*out)->status;
  });
}

fairsub_status fairsub_check(const fairsub_instance* inst,
                             const fairsub_allocation* alloc_with_subsidy,
                             fairsub_report** out) {
  if (!inst) return null_argument("inst");
  if (!alloc_with_subsidy) return null_argument("alloc_with_subsidy");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = make_report(fairsub::check_report(inst->value, alloc_with_subsidy->value), false);
    return (*out)->status;
  });
}

void fairsub_oracle_options_init(fairsub_oracle_options* options) {
  if (!options) return;
  const fairsub::oracle::Budget defaults;
  options->max_allocations = defaults.max_allocations;
  options->max_permutations = defaults.max_permutations;
  options->max_simple_paths = defaults.max_simple_paths;
  options->ef1_method = "auto";
  options->start = nullptr;
}

fairsub_status fairsub_oracle_compare(const fairsub_instance* inst,
                                      const fairsub_oracle_options* options,
                                      fairsub_report** out) {
  if (!inst) return null_argument("inst");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    fairsub::OracleOptions opts;
    if (options) {
      if (options->max_allocations == 0 || options->max_permutations == 0 ||
          options->max_simple_paths == 0)
        fairsub::fail(fairsub::ErrorKind::Input, "oracle budgets must be positive");
      opts.budget = {options->max_allocations, options->max_permutations,
                     options->max_simple_paths};
      opts.ef1_method = method_or_auto(options->ef1_method);
      if (options->start) opts.start = options->start->value.allocation;
    }
    *out = make_report(fairsub::oracle_report(inst->value, opts), false);
    return (*out)->status;
  });
}

const char* fairsub_report_json(const fairsub_report* report) {
  return report ? report->json.c_str() : nullptr;
}

const char* fairsub_report_text(const fairsub_report* report) {
  return report ? report->text.c_str() : nullptr;
}

fairsub_status fairsub_report_status(const fairsub_report* report) {
  return report ? report->status : FAIRSUB_INPUT_ERROR;
}

const char* fairsub_report_solution_json(const fairsub_report* report) {
  if (!report || report->solution.empty()) return nullptr;
  return report->solution.c_str();
}

void fairsub_report_free(fairsub_report* report) { delete report; }

}  // extern "C"
