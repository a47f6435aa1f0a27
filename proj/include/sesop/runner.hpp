#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sesop/config.hpp"
#include "sesop/problems.hpp"
#include "sesop/theory.hpp"
#include "sesop/trace.hpp"

namespace sesop {

struct RunResult {
  Trace trace;
  BoundParams params;  // L, R, gamma from the problem; delta1 from the config
  double grad_noise = 0.0;  // fp floor for gradient evaluations (see theory.hpp)
  std::vector<CheckReport> checks;
  bool all_mandatory_passed = true;
};

/// Builds the configured problem/oracle/solver, runs it, and evaluates the
/// checkers applicable to the run kind (sesop+exact: lemma 1, theorem 1
/// bound, orthogonality; sesop+iterative: lemma 5, theorem 2 bound with
/// measured deltas, delta linkage). A pre-built problem may be supplied to
/// share the instance between runs.
RunResult execute_run(const RunConfig& config, const Objective* prebuilt = nullptr);

/// Writes trace CSV and report JSON as configured (empty paths skipped).
void write_run_outputs(const RunResult& result, const RunConfig& config);

std::string run_report_json(const RunResult& result, const RunConfig& config);

/// Runs fn(i) for i in [0, count) under OpenMP; rethrows the first exception.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Verification driver: the omega/appendix suites plus a matrix of solver
/// runs with every applicable checker. `sabotage` scales recorded f_gap by
/// 10 before checking (fault injection for falsifiability).
struct VerifyOptions {
  std::size_t t_max = 1000;
  std::vector<std::size_t> dims{20, 100};
  std::vector<double> delta1s{0.0, 1e-3, 1e-1};
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::size_t iterations = 2000;
  bool sabotage = false;
};

struct VerifyResult {
  std::vector<CheckReport> reports;
  bool ok = true;
  std::string json;
};

VerifyResult run_verification(const VerifyOptions& options);

/// Trace consistency against the problem it references: f_gap(0) and
/// dist_to_opt(0) must match a fresh reconstruction from (type, n, seed).
CheckReport check_trace_consistency(const Trace& trace, const RunConfig& config);

}  // namespace sesop
