#ifndef FAIRSUB_H
#define FAIRSUB_H

/* C interface to the fairsub solver. All handles are opaque and owned by the
 * caller; release them with the matching *_free function. Functions returning
 * fairsub_status set a thread-local message readable through
 * fairsub_last_error() when they fail. Strings returned by accessors stay
 * valid until the owning handle is freed. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FAIRSUB_API __declspec(dllexport)
#else
#define FAIRSUB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fairsub_status {
  FAIRSUB_OK = 0,
  FAIRSUB_VERIFICATION_FAILED = 1,
  FAIRSUB_INPUT_ERROR = 2,
  FAIRSUB_RESOURCE_ERROR = 3,
  FAIRSUB_PRECONDITION_ERROR = 4,
  FAIRSUB_NOT_ENVY_FREEABLE = 5,
  FAIRSUB_UNSUPPORTED = 6,
  FAIRSUB_INTERNAL_ERROR = 7
} fairsub_status;

typedef struct fairsub_instance fairsub_instance;
typedef struct fairsub_allocation fairsub_allocation;
typedef struct fairsub_report fairsub_report;

FAIRSUB_API const char* fairsub_last_error(void);
FAIRSUB_API const char* fairsub_status_name(fairsub_status status);

/* Instances */
FAIRSUB_API fairsub_status fairsub_instance_from_json(const char* text, fairsub_instance** out);
/* family: example1, single-item, random-additive-goods, random-mixed,
 * random-table. canonical may be NULL; it receives the tight allocation for
 * example1 and NULL otherwise. */
FAIRSUB_API fairsub_status fairsub_generate(const char* family, size_t n, size_t m, uint64_t seed,
                                            fairsub_instance** out,
                                            fairsub_allocation** canonical);
FAIRSUB_API size_t fairsub_instance_agents(const fairsub_instance* inst);
FAIRSUB_API size_t fairsub_instance_items(const fairsub_instance* inst);
/* Returns a malloc'd string; release with fairsub_string_free. */
FAIRSUB_API char* fairsub_instance_to_json(const fairsub_instance* inst);
FAIRSUB_API void fairsub_instance_free(fairsub_instance* inst);

/* Allocations (optionally carrying a subsidy vector) */
FAIRSUB_API fairsub_status fairsub_allocation_from_json(const char* text,
                                                        fairsub_allocation** out);
FAIRSUB_API char* fairsub_allocation_to_json(const fairsub_allocation* alloc);
FAIRSUB_API void fairsub_allocation_free(fairsub_allocation* alloc);

FAIRSUB_API void fairsub_string_free(char* s);

/* Solving */
typedef struct fairsub_solve_options {
  const char* mode;       /* "basic", "improved" or "auto" (NULL = auto) */
  const char* ef1_method; /* "envy-cycles", "double-round-robin", "exhaustive", "auto" */
  uint64_t exhaustive_cap;
  /* Used instead of the EF1 search when non-NULL. */
  const fairsub_allocation* start;
} fairsub_solve_options;

FAIRSUB_API void fairsub_solve_options_init(fairsub_solve_options* options);

/* On success *out holds a report whose status is OK or
 * VERIFICATION_FAILED; the return value mirrors that status. */
FAIRSUB_API fairsub_status fairsub_solve(const fairsub_instance* inst,
                                         const fairsub_solve_options* options,
                                         fairsub_report** out);
FAIRSUB_API fairsub_status fairsub_check(const fairsub_instance* inst,
                                         const fairsub_allocation* alloc_with_subsidy,
                                         fairsub_report** out);

typedef struct fairsub_oracle_options {
  uint64_t max_allocations;
  uint64_t max_permutations;
  uint64_t max_simple_paths;
  const char* ef1_method;
  const fairsub_allocation* start;
} fairsub_oracle_options;

FAIRSUB_API void fairsub_oracle_options_init(fairsub_oracle_options* options);

/* Budget overruns still produce a report (sections marked skipped) and
 * return FAIRSUB_RESOURCE_ERROR. */
FAIRSUB_API fairsub_status fairsub_oracle_compare(const fairsub_instance* inst,
                                                  const fairsub_oracle_options* options,
                                                  fairsub_report** out);

FAIRSUB_API const char* fairsub_report_json(const fairsub_report* report);
FAIRSUB_API const char* fairsub_report_text(const fairsub_report* report);
FAIRSUB_API fairsub_status fairsub_report_status(const fairsub_report* report);
/* Allocation + subsidy from a solve report, in the allocation document
 * format; NULL for other reports. */
FAIRSUB_API const char* fairsub_report_solution_json(const fairsub_report* report);
FAIRSUB_API void fairsub_report_free(fairsub_report* report);

#ifdef __cplusplus
}
#endif

#endif
