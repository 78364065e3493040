#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neurovariety/io.hpp"
#include "neurovariety/store.hpp"

namespace nv {

// Spec file (JSON):
//   {
//     "architectures": [[3,2,2], [4,3,2]],                      optional
//     "grids": [{"equi_width": {"widths": [2,3], "depths": [2,3]}}],  optional
//     "degrees": [2,3]  or  {"from": 2, "to": 3},
//     "field": "fp", "prime": 2305843009213693951, "trials": 3, "seed": 0,
//     "jobs": 1, "out": "results.jsonl"
//   }
// An equi_width grid entry with width d and depth L expands to L+1 copies of d.
struct SweepSpec {
  std::vector<std::vector<int>> architectures;
  std::vector<int> degrees;
  ScalarField field = ScalarField::prime_field();
  int trials = 3;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
};

// Throws UsageError when malformed or when either set is empty.
SweepSpec parse_sweep_spec(const json& j);

enum class JobStatus { Computed, Cached, Skipped, Failed };

std::string to_string(JobStatus s);

struct SweepRecord {
  std::vector<int> widths;
  int degree = 0;
  std::string key;
  JobStatus status = JobStatus::Failed;
  std::optional<json> record;  // dimension report JSON
  std::string reason;          // Skipped / Failed
};

struct SweepOptions {
  bool force = false;
  bool timing = false;
};

// Runs every (architecture, degree) job on a pool of spec.jobs workers.
// Completed records are handed to this thread, which is the only writer of
// `store` (may be null). Results come back in job order regardless of
// scheduling; per-job seeds derive from the job key, so parallelism does not
// change them.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, ResultStore* store, const SweepOptions& opts);

}  // namespace nv
