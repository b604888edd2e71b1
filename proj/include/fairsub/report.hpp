#ifndef FAIRSUB_REPORT_HPP
#define FAIRSUB_REPORT_HPP

// End-to-end solve / check / oracle comparison producing a structured
// report and an equivalent human-readable rendering.

#include <optional>
#include <string>

#include "fairsub/ef1.hpp"
#include "fairsub/io.hpp"
#include "fairsub/oracle.hpp"

namespace fairsub {

enum class SolveMode { Auto, Basic, Improved };

const char* to_string(SolveMode m) noexcept;
SolveMode parse_solve_mode(const std::string& name);

enum class Verdict { Ok, VerificationFailed, ResourceExceeded };

struct Report {
  io::Json doc;
  std::string text;
  Verdict verdict = Verdict::Ok;
};

struct SolveOptions {
  SolveMode mode = SolveMode::Auto;
  Ef1Method ef1_method = Ef1Method::Auto;
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
  // Used instead of the EF1 search when present.
  std::optional<Allocation> start;
};

// Fails with the usual ErrorKinds (Input, Precondition, Unsupported, ...).
// The verdict is VerificationFailed when the output is not envy-free or an
// applicable bound does not hold.
Report solve_report(const Instance& inst, const SolveOptions& options);

// Requires a subsidy in the allocation file. Lists every violated pair.
Report check_report(const Instance& inst, const io::AllocationFile& file);

struct OracleOptions {
  oracle::Budget budget;
  Ef1Method ef1_method = Ef1Method::Auto;
  std::optional<Allocation> start;
};

// Sections that exceed the budget are marked skipped and the verdict becomes
// ResourceExceeded.
Report oracle_report(const Instance& inst, const OracleOptions& options);

}  // namespace fairsub

#endif
