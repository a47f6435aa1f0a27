#include "sesop/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>

#include <json.hpp>

#include "sesop/rng.hpp"
#include "sesop/runner.hpp"
#include "sesop/svg.hpp"

namespace sesop {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentScale desk_scale() { return {"desk", 100, 10000, {0, 1, 2, 3, 4}}; }
ExperimentScale paper_scale() { return {"paper", 500, 100000, {0, 1, 2, 3, 4}}; }

namespace {

constexpr double kExp2Delta1 = 1e-3;

const std::vector<double> kExp1Delta1s{1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
const std::vector<double> kExp2Delta4s{1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
const std::vector<double> kExp3Delta1s{1e-5, 1e-3, 1e-1};
const std::vector<double> kExp3Delta4s{1e-6, 1e-4, 1e-2};

struct SweepRun {
  RunConfig config;
  double axis_value = 0.0;
  std::vector<double> f_gap;
  double final_gap = 0.0;
  double min_gap = 0.0;
  BoundParams params;
  std::vector<CheckReport> checks;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Pointwise median curve over runs with equal-length f_gap series.
std::vector<std::pair<double, double>> median_curve(const std::vector<const SweepRun*>& runs) {
  std::vector<std::pair<double, double>> out;
  if (runs.empty()) return out;
  const std::size_t len = runs[0]->f_gap.size();
  std::vector<double> vals;
  for (std::size_t k = 1; k < len; ++k) {
    vals.clear();
    for (const auto* r : runs) vals.push_back(r->f_gap[k]);
    out.emplace_back(static_cast<double>(k), median(std::move(vals)));
  }
  return out;
}

/// Problems shared across runs of a sweep, built once up front.
std::map<std::uint64_t, std::unique_ptr<Objective>> build_problems(
    const std::string& type, std::size_t n, const std::vector<std::uint64_t>& seeds) {
  std::map<std::uint64_t, std::unique_ptr<Objective>> problems;
  for (std::uint64_t s : seeds) problems.emplace(s, make_problem(type, n, s));
  return problems;
}

void execute_sweep(std::vector<SweepRun>& runs,
                   const std::map<std::uint64_t, std::unique_ptr<Objective>>& problems,
                   const fs::path& out_dir, const std::string& prefix,
                   std::vector<std::string>& files) {
  for (auto& run : runs) {
    fs::path trace = out_dir / (prefix + "_" + run.config.solver +
                                (run.config.solver == "sesop"
                                     ? "_" + run.config.subsolver
                                     : "") +
                                "_v" + format_double(run.axis_value) + "_seed" +
                                std::to_string(run.config.problem_seed) + ".csv");
    run.config.trace_path = trace.string();
    files.push_back(trace.string());
  }
  parallel_for_index(runs.size(), [&](std::size_t i) {
    SweepRun& run = runs[i];
    RunResult res = execute_run(run.config, problems.at(run.config.problem_seed).get());
    write_trace_csv(res.trace, run.config.trace_path);
    run.params = res.params;
    run.checks = std::move(res.checks);
    run.f_gap.resize(res.trace.records.size(),
                     std::numeric_limits<double>::quiet_NaN());
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < res.trace.records.size(); ++k)
      if (res.trace.records[k].f_gap) {
        run.f_gap[k] = *res.trace.records[k].f_gap;
        mn = std::min(mn, run.f_gap[k]);
      }
    run.final_gap = run.f_gap.back();
    run.min_gap = mn;
  });
}

bool collect_checks(const std::vector<SweepRun>& runs, const fs::path& path,
                    std::vector<std::string>& files, std::string& message) {
  json j;
  j["checks"] = json::array();
  bool ok = true;
  for (const auto& run : runs)
    for (const auto& c : run.checks) {
      json cj = json::parse(check_report_to_json(c));
      cj["run"] = {{"solver", run.config.solver},
                   {"axis_value", run.axis_value},
                   {"seed", run.config.problem_seed}};
      j["checks"].push_back(cj);
      if (c.gating && !c.passed) {
        ok = false;
        message += "check '" + c.name + "' failed (axis=" + format_double(run.axis_value) +
                   ", seed=" + std::to_string(run.config.problem_seed) + "); ";
      }
    }
  j["ok"] = ok;
  std::ofstream f(path);
  f << j.dump(2) << "\n";
  files.push_back(path.string());
  return ok;
}

void write_text(const fs::path& path, const std::string& text,
                std::vector<std::string>& files) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  files.push_back(path.string());
}

std::string delta_label(const char* symbol, double v) {
  return std::string(symbol) + "=" + format_double(v);
}

/// Convergence figure: one median curve per axis value, plus the L R^2 / k^2
/// reference line.
void write_convergence_figure(const std::vector<SweepRun>& runs,
                              const std::vector<double>& axis_values,
                              const char* axis_symbol, const std::string& title,
                              const fs::path& path, std::vector<std::string>& files) {
  std::vector<Series> series;
  for (double v : axis_values) {
    std::vector<const SweepRun*> group;
    for (const auto& r : runs)
      if (r.axis_value == v && r.config.solver == "sesop") group.push_back(&r);
    if (group.empty()) continue;
    Series s;
    s.label = delta_label(axis_symbol, v);
    s.points = median_curve(group);
    series.push_back(std::move(s));
  }
  // reference line L R^2 / k^2 with the median L (R = 1 by construction)
  std::vector<double> ls, rs;
  for (const auto& r : runs) {
    ls.push_back(r.params.L);
    rs.push_back(r.params.R);
  }
  const double l_med = median(ls), r_med = median(rs);
  const std::size_t t = runs.empty() ? 1 : runs[0].f_gap.size() - 1;
  Series ref;
  ref.label = "L R^2 / k^2";
  ref.color = "#000000";
  ref.dashed = true;
  for (std::size_t k = 1; k <= t; k = std::max<std::size_t>(k + 1, k + k / 64))
    ref.points.emplace_back(static_cast<double>(k),
                            l_med * r_med * r_med / (static_cast<double>(k) * k));
  series.push_back(std::move(ref));

  ChartSpec spec;
  spec.title = title;
  spec.log_y = true;
  write_text(path, render_line_chart(spec, series), files);
}

void write_min_value_figure(const std::vector<SweepRun>& runs,
                            const std::vector<double>& axis_values, const char* axis_symbol,
                            const std::string& title, const fs::path& path,
                            std::vector<std::string>& files) {
  Series s;
  s.label = std::string("median min f_gap vs ") + axis_symbol;
  for (double v : axis_values) {
    std::vector<double> mins;
    for (const auto& r : runs)
      if (r.axis_value == v && r.config.solver == "sesop") mins.push_back(r.min_gap);
    if (!mins.empty()) s.points.emplace_back(v, median(std::move(mins)));
  }
  ChartSpec spec;
  spec.title = title;
  spec.x_label = axis_symbol;
  spec.y_label = "min_k f(x_k) - f*";
  spec.log_x = true;
  spec.log_y = true;
  write_text(path, render_line_chart(spec, {s}), files);
}

void write_summary_csv(const std::vector<SweepRun>& runs, const char* axis_name,
                       const fs::path& path, std::vector<std::string>& files) {
  std::string csv = std::string(axis_name) +
                    ",seed,solver,subsolver,L,R,final_f_gap,min_f_gap\n";
  for (const auto& r : runs) {
    csv += format_double(r.axis_value) + "," + std::to_string(r.config.problem_seed) + "," +
           r.config.solver + "," +
           (r.config.solver == "sesop" ? r.config.subsolver : "") + "," +
           format_double(r.params.L) + "," + format_double(r.params.R) + "," +
           format_double(r.final_gap) + "," + format_double(r.min_gap) + "\n";
  }
  write_text(path, csv, files);
}

std::vector<SweepRun> make_sweep(const ExperimentScale& scale, const std::string& solver,
                                 const std::string& subsolver, const char* axis,
                                 const std::vector<double>& values, double fixed_delta1) {
  std::vector<SweepRun> runs;
  for (std::size_t vi = 0; vi < values.size(); ++vi)
    for (std::uint64_t seed : scale.seeds) {
      SweepRun r;
      r.axis_value = values[vi];
      r.config.problem_type = "quadratic";
      r.config.n = scale.n;
      r.config.problem_seed = seed;
      r.config.oracle_seed = Rng::derive(seed, 1000 + vi);
      r.config.solver = solver;
      r.config.subsolver = subsolver;
      r.config.iterations = scale.iterations;
      if (std::string(axis) == "delta1") {
        r.config.delta1 = values[vi];
      } else {
        r.config.delta1 = fixed_delta1;
        r.config.delta4 = values[vi];
      }
      runs.push_back(std::move(r));
    }
  return runs;
}

ExperimentOutcome experiment1(const ExperimentScale& scale, const fs::path& out, bool force) {
  ExperimentOutcome outcome;
  auto problems = build_problems("quadratic", scale.n, scale.seeds);
  std::vector<SweepRun> runs =
      make_sweep(scale, "sesop", "exact", "delta1", kExp1Delta1s, 0.0);
  execute_sweep(runs, problems, out, "exp1", outcome.files);
  const bool ok =
      collect_checks(runs, out / "exp1_checks.json", outcome.files, outcome.message);
  write_summary_csv(runs, "delta1", out / "exp1_summary.csv", outcome.files);
  if (ok || force) {
    write_convergence_figure(runs, kExp1Delta1s, "delta1",
                             "Convergence under gradient noise (exact subsolve)",
                             out / "exp1_convergence.svg", outcome.files);
    write_min_value_figure(runs, kExp1Delta1s, "delta1",
                           "Best value found vs gradient noise",
                           out / "exp1_min_vs_delta1.svg", outcome.files);
  }
  outcome.ok = ok;
  return outcome;
}

ExperimentOutcome experiment2(const ExperimentScale& scale, const fs::path& out, bool force) {
  ExperimentOutcome outcome;
  auto problems = build_problems("quadratic", scale.n, scale.seeds);
  std::vector<SweepRun> runs =
      make_sweep(scale, "sesop", "iterative", "delta4", kExp2Delta4s, kExp2Delta1);
  execute_sweep(runs, problems, out, "exp2", outcome.files);
  const bool ok =
      collect_checks(runs, out / "exp2_checks.json", outcome.files, outcome.message);
  write_summary_csv(runs, "delta4", out / "exp2_summary.csv", outcome.files);
  if (ok || force) {
    write_convergence_figure(runs, kExp2Delta4s, "delta4",
                             "Convergence under inexact subspace solves (delta1=1e-3)",
                             out / "exp2_convergence.svg", outcome.files);
    write_min_value_figure(runs, kExp2Delta4s, "delta4",
                           "Best value found vs subproblem accuracy",
                           out / "exp2_min_vs_delta4.svg", outcome.files);
  }
  outcome.ok = ok;
  return outcome;
}

void write_comparison_figure(const std::vector<SweepRun>& sesop_runs,
                             const std::vector<SweepRun>& stm_runs, double axis_value,
                             const std::string& title, const fs::path& path,
                             std::vector<std::string>& files) {
  std::vector<const SweepRun*> s_group, t_group;
  for (const auto& r : sesop_runs)
    if (r.axis_value == axis_value) s_group.push_back(&r);
  for (const auto& r : stm_runs)
    if (r.axis_value == axis_value) t_group.push_back(&r);
  std::vector<Series> series;
  Series a;
  a.label = "SESOP";
  a.points = median_curve(s_group);
  series.push_back(std::move(a));
  Series b;
  b.label = "STM";
  b.points = median_curve(t_group);
  series.push_back(std::move(b));
  ChartSpec spec;
  spec.title = title;
  spec.log_y = true;
  write_text(path, render_line_chart(spec, series), files);
}

/// Comparison table: final gaps plus where (if anywhere) STM overtakes.
/// match_axis pairs runs by sweep value as well as seed; the subsolver panel
/// compares every SESOP delta4 against the one STM reference per seed.
std::string comparison_table(const std::vector<SweepRun>& sesop_runs,
                             const std::vector<SweepRun>& stm_runs, const char* axis_name,
                             bool match_axis = true) {
  std::string csv = std::string(axis_name) +
                    ",seed,sesop_final,stm_final,sesop_better,first_k_stm_better,"
                    "frac_k_stm_better\n";
  for (const auto& s : sesop_runs) {
    const SweepRun* t = nullptr;
    for (const auto& cand : stm_runs)
      if ((!match_axis || cand.axis_value == s.axis_value) &&
          cand.config.problem_seed == s.config.problem_seed)
        t = &cand;
    if (!t) continue;
    std::size_t first_k = 0;
    std::size_t count = 0, total = 0;
    for (std::size_t k = 1; k < std::min(s.f_gap.size(), t->f_gap.size()); ++k) {
      ++total;
      if (t->f_gap[k] < s.f_gap[k]) {
        ++count;
        if (first_k == 0) first_k = k;
      }
    }
    csv += format_double(s.axis_value) + "," + std::to_string(s.config.problem_seed) + "," +
           format_double(s.final_gap) + "," + format_double(t->final_gap) + "," +
           (s.final_gap <= t->final_gap ? "1" : "0") + "," +
           (first_k == 0 ? std::string() : std::to_string(first_k)) + "," +
           format_double(total == 0 ? 0.0
                                    : static_cast<double>(count) / static_cast<double>(total)) +
           "\n";
  }
  return csv;
}

ExperimentOutcome experiment3(const ExperimentScale& scale, const fs::path& out, bool force) {
  ExperimentOutcome outcome;
  auto problems = build_problems("quadratic", scale.n, scale.seeds);

  // panel A: exact subspace solves, delta1 sweep, SESOP vs STM
  std::vector<SweepRun> sesop_runs =
      make_sweep(scale, "sesop", "exact", "delta1", kExp3Delta1s, 0.0);
  std::vector<SweepRun> stm_runs =
      make_sweep(scale, "stm", "exact", "delta1", kExp3Delta1s, 0.0);
  execute_sweep(sesop_runs, problems, out, "exp3", outcome.files);
  execute_sweep(stm_runs, problems, out, "exp3", outcome.files);

  // panel B: delta1 = 1e-3 fixed, SESOP with inexact subspace solves vs STM
  std::vector<SweepRun> sesop_iter =
      make_sweep(scale, "sesop", "iterative", "delta4", kExp3Delta4s, kExp2Delta1);
  std::vector<SweepRun> stm_fixed =
      make_sweep(scale, "stm", "exact", "delta1", {kExp2Delta1}, 0.0);
  execute_sweep(sesop_iter, problems, out, "exp3b", outcome.files);
  execute_sweep(stm_fixed, problems, out, "exp3b", outcome.files);

  std::vector<SweepRun> all_checked;
  for (auto* group : {&sesop_runs, &sesop_iter})
    for (const auto& r : *group) all_checked.push_back(r);
  const bool ok = collect_checks(all_checked, out / "exp3_checks.json", outcome.files,
                                 outcome.message);

  write_text(out / "exp3_comparison.csv",
             comparison_table(sesop_runs, stm_runs, "delta1"), outcome.files);
  write_text(out / "exp3_subsolver_comparison.csv",
             comparison_table(sesop_iter, stm_fixed, "delta4", false), outcome.files);

  if (ok || force) {
    for (double d1 : kExp3Delta1s)
      write_comparison_figure(sesop_runs, stm_runs, d1,
                              "SESOP vs STM, " + delta_label("delta1", d1),
                              out / ("exp3_" + delta_label("delta1", d1) + ".svg"),
                              outcome.files);
    // subsolver panel: SESOP at each delta4 next to the STM reference
    std::vector<Series> series;
    for (double d4 : kExp3Delta4s) {
      std::vector<const SweepRun*> group;
      for (const auto& r : sesop_iter)
        if (r.axis_value == d4) group.push_back(&r);
      Series s;
      s.label = "SESOP " + delta_label("delta4", d4);
      s.points = median_curve(group);
      series.push_back(std::move(s));
    }
    std::vector<const SweepRun*> stm_group;
    for (const auto& r : stm_fixed) stm_group.push_back(&r);
    Series s;
    s.label = "STM";
    s.color = "#000000";
    s.points = median_curve(stm_group);
    series.push_back(std::move(s));
    ChartSpec spec;
    spec.title = "SESOP with inexact subspace solves vs STM (delta1=1e-3)";
    spec.log_y = true;
    write_text(out / "exp3_subsolver.svg", render_line_chart(spec, series), outcome.files);
  }
  outcome.ok = ok;
  return outcome;
}

}  // namespace

ExperimentOutcome run_experiment(int id, const ExperimentScale& scale,
                                 const std::string& out_dir, bool force) {
  fs::path out(out_dir);
  fs::create_directories(out);
  switch (id) {
    case 1: return experiment1(scale, out, force);
    case 2: return experiment2(scale, out, force);
    case 3: return experiment3(scale, out, force);
    default: throw ConfigError("unknown experiment id: " + std::to_string(id));
  }
}

}  // namespace sesop
