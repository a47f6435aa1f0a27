#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sesop {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One solver run, as described by a JSON config:
/// {
///   "problem": {"type": "quadratic"|"quasar", "n": int, "seed": int},
///   "oracle":  {"delta1": num, "seed": int},
///   "solver":  {"type": "sesop"|"stm", "iterations": int,
///               "subsolver": "exact"|"iterative", "delta4": num,
///               "max_inner_iters": int},
///   "output":  {"trace_path": str, "report_path": str}
/// }
struct RunConfig {
  std::string problem_type = "quadratic";
  std::size_t n = 100;
  std::uint64_t problem_seed = 0;

  double delta1 = 0.0;
  std::uint64_t oracle_seed = 0;

  std::string solver = "sesop";
  std::size_t iterations = 1000;
  std::string subsolver = "exact";
  double delta4 = 0.0;
  int max_inner_iters = 10000000;

  std::string trace_path;
  std::string report_path;

  void validate() const;
};

RunConfig run_config_from_json(const std::string& json_text);
RunConfig run_config_from_file(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

/// A sweep of runs sharing a base config: one axis varied, crossed with seeds.
struct SweepConfig {
  RunConfig base;
  std::string sweep_axis = "delta1";  // "delta1" | "delta4"
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  int parallelism = 0;  // 0: leave it to the OpenMP runtime

  void validate() const;
  std::vector<RunConfig> expand() const;
};

}  // namespace sesop
