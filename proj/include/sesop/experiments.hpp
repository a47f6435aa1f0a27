#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sesop {

/// Problem size / horizon / seed set for the benchmark experiments.
struct ExperimentScale {
  std::string name = "desk";
  std::size_t n = 100;
  std::size_t iterations = 10000;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
};

ExperimentScale desk_scale();
ExperimentScale paper_scale();

struct ExperimentOutcome {
  bool ok = true;
  std::string message;
  std::vector<std::string> files;
};

/// Experiment 1: gradient-noise sweep with the exact subspace solve.
/// Experiment 2: subproblem-accuracy sweep at fixed delta1 = 1e-3.
/// Experiment 3: comparison against the similar-triangles baseline.
/// Emits per-run trace CSVs, a summary CSV, a checker report JSON and the
/// SVG figures into out_dir. Figures are withheld (unless force) when a
/// mandatory bound check fails.
ExperimentOutcome run_experiment(int id, const ExperimentScale& scale,
                                 const std::string& out_dir, bool force = false);

}  // namespace sesop
