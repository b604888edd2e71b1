// fairsub command-line front end. Talks to the solver only through the C API.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fairsub/fairsub.h"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 verified, 1 verification failure, 2 input error, 3 budget
// exceeded, 4 internal error.
int exit_code(fairsub_status s) {
  switch (s) {
    case FAIRSUB_OK: return 0;
    case FAIRSUB_VERIFICATION_FAILED: return 1;
    case FAIRSUB_RESOURCE_ERROR: return 3;
    case FAIRSUB_INTERNAL_ERROR: return 4;
    default: return 2;
  }
}

struct CliError {
  fairsub_status status;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{FAIRSUB_INPUT_ERROR, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes via a temporary sibling and rename so readers never see partial files.
void write_file(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError{FAIRSUB_INPUT_ERROR, "cannot write " + path.string()};
    out << content;
    if (!out.flush()) throw CliError{FAIRSUB_INPUT_ERROR, "cannot write " + path.string()};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CliError{FAIRSUB_INPUT_ERROR, "cannot write " + path.string() + ": " + ec.message()};
}

void check(fairsub_status s, const std::string& context) {
  if (s != FAIRSUB_OK) throw CliError{s, context + ": " + fairsub_last_error()};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};

using InstanceHandle = Handle<fairsub_instance, fairsub_instance_free>;
using AllocationHandle = Handle<fairsub_allocation, fairsub_allocation_free>;
using ReportHandle = Handle<fairsub_report, fairsub_report_free>;

void load_instance(const std::string& path, InstanceHandle& h) {
  check(fairsub_instance_from_json(read_file(path).c_str(), &h.ptr), path);
}

void load_allocation(const std::string& path, AllocationHandle& h) {
  check(fairsub_allocation_from_json(read_file(path).c_str(), &h.ptr), path);
}

struct OutputOptions {
  std::string out;
  std::string format = "text";
};

// Text or JSON on stdout; --out always receives the JSON document.
int emit(const fairsub_report* report, fairsub_status status, const OutputOptions& o) {
  if (o.format == "json")
    std::cout << fairsub_report_json(report);
  else
    std::cout << fairsub_report_text(report);
  if (!o.out.empty()) write_file(o.out, fairsub_report_json(report));
  return exit_code(status);
}

// Non-success statuses that still produced a report are passed through;
// anything else becomes a CliError.
fairsub_status tolerate(fairsub_status s, const fairsub_report* report, const std::string& ctx) {
  if (report) return s;
  throw CliError{s, ctx + ": " + fairsub_last_error()};
}

struct GenArgs {
  std::string family;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string allocation_out;
};

int run_gen(const GenArgs& a) {
  InstanceHandle inst;
  AllocationHandle canonical;
  check(fairsub_generate(a.family.c_str(), a.n, a.m, a.seed, &inst.ptr,
                         a.allocation_out.empty() ? nullptr : &canonical.ptr),
        "gen");
  char* text = fairsub_instance_to_json(inst.ptr);
  std::string doc = text;
  fairsub_string_free(text);
  if (a.out.empty())
    std::cout << doc;
  else
    write_file(a.out, doc);
  if (!a.allocation_out.empty()) {
    if (!canonical.ptr)
      throw CliError{FAIRSUB_INPUT_ERROR,
                     "--allocation-out: family " + a.family + " has no canonical allocation"};
    char* alloc = fairsub_allocation_to_json(canonical.ptr);
    std::string adoc = alloc;
    fairsub_string_free(alloc);
    write_file(a.allocation_out, adoc);
  }
  return 0;
}

struct SolveArgs {
  std::string file;
  std::string mode = "auto";
  std::string ef1_method = "auto";
  std::string allocation;
  std::string solution_out;
  std::string batch;
  unsigned jobs = 0;
  OutputOptions output;
};

struct SolveOutcome {
  fairsub_status status;
  std::string json;
  std::string text;
  std::string solution;
};

SolveOutcome solve_one(const std::string& path, const SolveArgs& a) {
  InstanceHandle inst;
  load_instance(path, inst);
  AllocationHandle start;
  if (!a.allocation.empty()) load_allocation(a.allocation, start);
  fairsub_solve_options opts;
  fairsub_solve_options_init(&opts);
  opts.mode = a.mode.c_str();
  opts.ef1_method = a.ef1_method.c_str();
  opts.start = start.ptr;
  ReportHandle report;
  const fairsub_status raw = fairsub_solve(inst.ptr, &opts, &report.ptr);
  const fairsub_status s = tolerate(raw, report.ptr, path);
  const char* sol = fairsub_report_solution_json(report.ptr);
  return {s, fairsub_report_json(report.ptr), fairsub_report_text(report.ptr), sol ? sol : ""};
}

int run_batch(const SolveArgs& a) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.batch)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        name.find(".report.") == std::string::npos && name.find(".solution.") == std::string::npos)
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  const fs::path out_dir = a.output.out.empty() ? fs::path(a.batch) : fs::path(a.output.out);
  fs::create_directories(out_dir);

  std::vector<int> codes(files.size(), 0);
  std::vector<std::string> lines(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < files.size();) {
      const fs::path& f = files[k];
      try {
        SolveOutcome r = solve_one(f.string(), a);
        write_file(out_dir / (f.stem().string() + ".report.json"), r.json);
        codes[k] = exit_code(r.status);
        lines[k] = f.filename().string() + ": " + fairsub_status_name(r.status);
      } catch (const CliError& e) {
        codes[k] = exit_code(e.status);
        lines[k] = f.filename().string() + ": " + e.message;
      } catch (const std::exception& e) {
        codes[k] = 2;
        lines[k] = f.filename().string() + ": " + e.what();
      }
    }
  };
  unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, files.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  pool.clear();

  int worst = 0;
  for (std::size_t k = 0; k < files.size(); ++k) {
    std::cout << lines[k] << "\n";
    worst = std::max(worst, codes[k]);
  }
  return worst;
}

int run_solve(const SolveArgs& a) {
  if (!a.batch.empty()) {
    if (!a.file.empty()) throw CliError{FAIRSUB_INPUT_ERROR, "give either FILE or --batch, not both"};
    return run_batch(a);
  }
  if (a.file.empty()) throw CliError{FAIRSUB_INPUT_ERROR, "missing instance FILE"};
  SolveOutcome r = solve_one(a.file, a);
  std::cout << (a.output.format == "json" ? r.json : r.text);
  if (!a.output.out.empty()) write_file(a.output.out, r.json);
  if (!a.solution_out.empty()) write_file(a.solution_out, r.solution);
  return exit_code(r.status);
}

struct CheckArgs {
  std::string instance;
  std::string allocation;
  OutputOptions output;
};

int run_check(const CheckArgs& a) {
  InstanceHandle inst;
  load_instance(a.instance, inst);
  AllocationHandle alloc;
  load_allocation(a.allocation, alloc);
  ReportHandle report;
  const fairsub_status raw = fairsub_check(inst.ptr, alloc.ptr, &report.ptr);
  const fairsub_status s = tolerate(raw, report.ptr, "check");
  return emit(report.ptr, s, a.output);
}

struct OracleArgs {
  std::string file;
  std::uint64_t budget = 0;
  std::string ef1_method = "auto";
  std::string allocation;
  OutputOptions output;
};

int run_oracle(const OracleArgs& a) {
  InstanceHandle inst;
  load_instance(a.file, inst);
  AllocationHandle start;
  if (!a.allocation.empty()) load_allocation(a.allocation, start);
  fairsub_oracle_options opts;
  fairsub_oracle_options_init(&opts);
  if (a.budget) opts.max_allocations = a.budget;
  opts.ef1_method = a.ef1_method.c_str();
  opts.start = start.ptr;
  ReportHandle report;
  const fairsub_status raw = fairsub_oracle_compare(inst.ptr, &opts, &report.ptr);
  const fairsub_status s = tolerate(raw, report.ptr, "oracle");
  return emit(report.ptr, s, a.output);
}

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--out", o.out, "Write the JSON report to this file");
  cmd->add_option("--format", o.format, "Format printed on stdout")
      ->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Envy-free allocations of indivisible items with bounded subsidies"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("family", gen.family,
                      "example1 | single-item | random-additive-goods | random-mixed | random-table")
      ->required();
  gen_cmd->add_option("-n", gen.n, "Number of agents")->required();
  gen_cmd->add_option("-m", gen.m, "Number of items (random families)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output file (default: stdout)");
  gen_cmd->add_option("--allocation-out", gen.allocation_out,
                      "Also write the family's canonical allocation (example1)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute an envy-free allocation with subsidy");
  solve_cmd->add_option("file", solve.file, "Instance file");
  solve_cmd->add_option("--mode", solve.mode, "basic | improved | auto")
      ->check(CLI::IsMember({"basic", "improved", "auto"}));
  solve_cmd->add_option("--ef1-method", solve.ef1_method,
                        "envy-cycles | double-round-robin | exhaustive | auto");
  solve_cmd->add_option("--allocation", solve.allocation,
                        "Start from this EF1 allocation instead of searching for one");
  solve_cmd->add_option("--solution-out", solve.solution_out,
                        "Write allocation and subsidy in the check input format");
  solve_cmd->add_option("--batch", solve.batch,
                        "Solve every *.json instance in this directory (--out: report directory)");
  solve_cmd->add_option("--jobs", solve.jobs, "Concurrent files in batch mode");
  add_output_flags(solve_cmd, solve.output);

  CheckArgs chk;
  auto* check_cmd = app.add_subcommand("check", "Verify envy-freeness of an allocation with subsidy");
  check_cmd->add_option("instance", chk.instance, "Instance file")->required();
  check_cmd->add_option("allocation", chk.allocation, "Allocation file with subsidy")->required();
  add_output_flags(check_cmd, chk.output);

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compare the solver with brute-force oracles");
  oracle_cmd->add_option("file", orc.file, "Instance file")->required();
  oracle_cmd->add_option("--budget", orc.budget, "Maximum allocations enumerated");
  oracle_cmd->add_option("--ef1-method", orc.ef1_method,
                         "envy-cycles | double-round-robin | exhaustive | auto");
  oracle_cmd->add_option("--allocation", orc.allocation, "EF1 allocation used by the solver");
  add_output_flags(oracle_cmd, orc.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve);
    if (*check_cmd) return run_check(chk);
    if (*oracle_cmd) return run_oracle(orc);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
