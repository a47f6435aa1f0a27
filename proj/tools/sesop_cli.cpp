#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sesop/config.hpp"
#include "sesop/experiments.hpp"
#include "sesop/problems.hpp"
#include "sesop/runner.hpp"
#include "sesop/solvers.hpp"
#include "sesop/svg.hpp"
#include "sesop/theory.hpp"
#include "sesop/trace.hpp"

namespace {

// exit codes: 0 ok, 1 verification failure, 2 usage/config error, 3 divergence
constexpr int kOk = 0;
constexpr int kVerifyFailure = 1;
constexpr int kUsageError = 2;
constexpr int kDivergence = 3;

int cmd_generate(const std::string& type, std::size_t n, std::uint64_t seed,
                 const std::string& out_path) {
  auto problem = sesop::make_problem(type, n, seed);
  nlohmann::json j;
  j["problem"] = {{"type", type}, {"n", n}, {"seed", seed}};
  j["L"] = problem->smoothness();
  j["gamma"] = problem->quasar_gamma();
  if (const auto* opt = problem->optimum()) {
    j["f_star"] = opt->f_star;
    double r = 0.0;
    const sesop::Vector x0 = problem->start_point();
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double d = x0[i] - opt->x_star[i];
      r += d * d;
    }
    j["R"] = std::sqrt(r);
  }
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "cannot open for writing: " << out_path << "\n";
      return kUsageError;
    }
    f << text;
  }
  return kOk;
}

int cmd_run(const std::string& config_path) {
  sesop::RunConfig config;
  try {
    config = sesop::run_config_from_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    sesop::RunResult result = sesop::execute_run(config);
    sesop::write_run_outputs(result, config);
    if (config.report_path.empty())
      std::cout << sesop::run_report_json(result, config) << "\n";
    if (!result.all_mandatory_passed) {
      std::cerr << "run completed but a mandatory check failed\n";
      return kVerifyFailure;
    }
    return kOk;
  } catch (const sesop::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    if (!config.trace_path.empty()) sesop::write_trace_csv(e.partial, config.trace_path);
    return kDivergence;
  }
}

int cmd_experiment(int id, const std::string& scale_name, const std::string& out_dir,
                   bool force) {
  sesop::ExperimentScale scale;
  if (scale_name == "desk") {
    scale = sesop::desk_scale();
  } else if (scale_name == "paper") {
    scale = sesop::paper_scale();
  } else {
    std::cerr << "unknown scale: " << scale_name << "\n";
    return kUsageError;
  }
  const sesop::ExperimentOutcome outcome = sesop::run_experiment(id, scale, out_dir, force);
  for (const auto& f : outcome.files) std::cout << f << "\n";
  if (!outcome.ok) {
    std::cerr << "experiment checks failed: " << outcome.message << "\n";
    return kVerifyFailure;
  }
  return kOk;
}

int cmd_verify(std::size_t t_max, std::size_t iterations, bool sabotage,
               const std::string& out_path) {
  sesop::VerifyOptions options;
  options.t_max = t_max;
  options.iterations = iterations;
  options.sabotage = sabotage;
  const sesop::VerifyResult result = sesop::run_verification(options);
  if (out_path.empty()) {
    std::cout << result.json << "\n";
  } else {
    std::ofstream f(out_path);
    f << result.json << "\n";
  }
  for (const auto& r : result.reports)
    if (!r.passed)
      std::cerr << "FAILED: " << r.name << " margin=" << r.margin << "\n";
  return result.ok ? kOk : kVerifyFailure;
}

int cmd_plot(const std::vector<std::string>& trace_paths, const std::string& out_svg,
             bool logy, const std::vector<double>& bound, const std::string& bound_kind,
             bool force) {
  if (trace_paths.empty()) {
    std::cerr << "no traces given\n";
    return kUsageError;
  }
  std::vector<sesop::Trace> traces;
  for (const auto& p : trace_paths) {
    try {
      traces.push_back(sesop::trace_from_csv_file(p));
    } catch (const std::exception& e) {
      std::cerr << "cannot load trace " << p << ": " << e.what() << "\n";
      return kUsageError;
    }
  }

  std::vector<sesop::Series> series;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    sesop::Series s;
    s.label = std::filesystem::path(trace_paths[i]).filename().string();
    for (const auto& rec : traces[i].records)
      if (rec.f_gap && rec.k >= 1)
        s.points.emplace_back(static_cast<double>(rec.k), *rec.f_gap);
    series.push_back(std::move(s));
  }

  if (!bound.empty()) {
    if (bound.size() < 4 || bound.size() > 7) {
      std::cerr << "--bound expects L,R,gamma,delta1[,delta2,delta3,delta4]\n";
      return kUsageError;
    }
    sesop::BoundParams p;
    p.L = bound[0];
    p.R = bound[1];
    p.gamma = bound[2];
    p.delta1 = bound[3];
    if (bound.size() > 4) p.delta2 = bound[4];
    if (bound.size() > 5) p.delta3 = bound[5];
    if (bound.size() > 6) p.delta4 = bound[6];
    const sesop::BoundKind kind = bound_kind == "theorem2" ? sesop::BoundKind::theorem2
                                                           : sesop::BoundKind::theorem1;
    bool all_ok = true;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const sesop::CheckReport rep = sesop::check_theorem_bound(traces[i], p, kind);
      if (!rep.passed) {
        all_ok = false;
        std::cerr << "trace " << trace_paths[i] << " violates the " << bound_kind
                  << " bound (margin " << rep.margin << ")\n";
      }
    }
    if (!all_ok && !force) {
      std::cerr << "refusing to plot (use --force to override)\n";
      return kVerifyFailure;
    }
    sesop::Series b;
    b.label = bound_kind + " bound";
    b.color = "#000000";
    b.dashed = true;
    std::size_t t = 0;
    for (const auto& tr : traces) t = std::max(t, tr.records.size());
    const std::size_t k0 = kind == sesop::BoundKind::theorem2 ? 8 : 1;
    for (std::size_t k = k0; k < std::max<std::size_t>(t, k0 + 1); k = std::max(k + 1, k + k / 128))
      b.points.emplace_back(static_cast<double>(k),
                            kind == sesop::BoundKind::theorem1
                                ? sesop::theorem1_bound(p, k)
                                : sesop::theorem2_bound(p, k));
    series.push_back(std::move(b));
  }

  sesop::ChartSpec spec;
  spec.title = "objective gap";
  spec.log_y = logy;
  try {
    sesop::write_svg(sesop::render_line_chart(spec, series), out_svg);
  } catch (const std::exception& e) {
    std::cerr << "plot error: " << e.what() << "\n";
    return kUsageError;
  }
  std::cout << out_svg << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modified-SESOP benchmark harness"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "generate a problem and print its facts");
  std::string g_type = "quadratic", g_out;
  std::size_t g_n = 100;
  std::uint64_t g_seed = 0;
  generate->add_option("--type", g_type, "quadratic|quasar");
  generate->add_option("--n", g_n, "dimension")->check(CLI::PositiveNumber);
  generate->add_option("--seed", g_seed, "generator seed");
  generate->add_option("--out", g_out, "output JSON path (stdout if omitted)");

  auto* run = app.add_subcommand("run", "execute one configured run");
  std::string run_config;
  run->add_option("--config", run_config, "JSON run config")->required();

  auto* experiment = app.add_subcommand("experiment", "reproduce a benchmark experiment");
  int e_id = 1;
  std::string e_scale = "desk", e_out = "out";
  bool e_force = false;
  experiment->add_option("--id", e_id, "experiment id (1|2|3)")->required();
  experiment->add_option("--scale", e_scale, "desk|paper");
  experiment->add_option("--out", e_out, "output directory");
  experiment->add_flag("--force", e_force, "emit figures even if a check fails");

  auto* verify = app.add_subcommand("verify", "run the full checker battery");
  std::size_t v_tmax = 1000, v_iters = 2000;
  bool v_sabotage = false;
  std::string v_out;
  verify->add_option("--tmax", v_tmax, "horizon for the omega-sum suite");
  verify->add_option("--iterations", v_iters, "iterations per verification run");
  verify->add_flag("--sabotage", v_sabotage, "inject a fault (f_gap x10) before checking");
  verify->add_option("--out", v_out, "report JSON path (stdout if omitted)");

  auto* plot = app.add_subcommand("plot", "render trace CSVs as an SVG chart");
  std::vector<std::string> p_traces;
  std::string p_out = "plot.svg", p_kind = "theorem1";
  bool p_logy = false, p_force = false;
  std::vector<double> p_bound;
  plot->add_option("traces", p_traces, "trace CSV paths");
  plot->add_option("--out", p_out, "output SVG path");
  plot->add_flag("--logy", p_logy, "log-scale y axis");
  plot->add_option("--bound", p_bound, "overlay bound: L,R,gamma,delta1[,d2,d3,d4]")
      ->delimiter(',');
  plot->add_option("--kind", p_kind, "theorem1|theorem2");
  plot->add_flag("--force", p_force, "plot even if a trace violates the bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (generate->parsed()) return cmd_generate(g_type, g_n, g_seed, g_out);
    if (run->parsed()) return cmd_run(run_config);
    if (experiment->parsed()) return cmd_experiment(e_id, e_scale, e_out, e_force);
    if (verify->parsed()) return cmd_verify(v_tmax, v_iters, v_sabotage, v_out);
    if (plot->parsed()) return cmd_plot(p_traces, p_out, p_logy, p_bound, p_kind, p_force);
  } catch (const sesop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const sesop::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailure;
  }
  return kUsageError;
}
