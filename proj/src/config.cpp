#include "sesop/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sesop/rng.hpp"

namespace sesop {

using nlohmann::json;

void RunConfig::validate() const {
  if (problem_type != "quadratic" && problem_type != "quasar")
    throw ConfigError("problem.type must be 'quadratic' or 'quasar'");
  if (n < 1) throw ConfigError("problem.n must be >= 1");
  if (delta1 < 0.0) throw ConfigError("oracle.delta1 must be >= 0");
  if (solver != "sesop" && solver != "stm")
    throw ConfigError("solver.type must be 'sesop' or 'stm'");
  if (iterations < 1) throw ConfigError("solver.iterations must be >= 1");
  if (subsolver != "exact" && subsolver != "iterative")
    throw ConfigError("solver.subsolver must be 'exact' or 'iterative'");
  if (delta4 < 0.0) throw ConfigError("solver.delta4 must be >= 0");
  if (max_inner_iters < 1) throw ConfigError("solver.max_inner_iters must be >= 1");
}

namespace {

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
  if (const json* v = find(j, key)) {
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
  }
}

}  // namespace

RunConfig run_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  RunConfig c;
  if (const json* p = find(j, "problem")) {
    read_into(*p, "type", c.problem_type);
    read_into(*p, "n", c.n);
    read_into(*p, "seed", c.problem_seed);
  }
  if (const json* o = find(j, "oracle")) {
    read_into(*o, "delta1", c.delta1);
    read_into(*o, "seed", c.oracle_seed);
  }
  if (const json* s = find(j, "solver")) {
    read_into(*s, "type", c.solver);
    read_into(*s, "iterations", c.iterations);
    read_into(*s, "subsolver", c.subsolver);
    read_into(*s, "delta4", c.delta4);
    read_into(*s, "max_inner_iters", c.max_inner_iters);
  }
  if (const json* out = find(j, "output")) {
    read_into(*out, "trace_path", c.trace_path);
    read_into(*out, "report_path", c.report_path);
  }
  c.validate();
  return c;
}

RunConfig run_config_from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return run_config_from_json(ss.str());
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["problem"] = {{"type", c.problem_type}, {"n", c.n}, {"seed", c.problem_seed}};
  j["oracle"] = {{"delta1", c.delta1}, {"seed", c.oracle_seed}};
  j["solver"] = {{"type", c.solver},
                 {"iterations", c.iterations},
                 {"subsolver", c.subsolver},
                 {"delta4", c.delta4},
                 {"max_inner_iters", c.max_inner_iters}};
  j["output"] = {{"trace_path", c.trace_path}, {"report_path", c.report_path}};
  return j.dump(2);
}

void SweepConfig::validate() const {
  base.validate();
  if (sweep_axis != "delta1" && sweep_axis != "delta4")
    throw ConfigError("sweep_axis must be 'delta1' or 'delta4'");
  if (values.empty()) throw ConfigError("sweep values must be non-empty");
  for (double v : values)
    if (v < 0.0) throw ConfigError("sweep values must be >= 0");
  if (seeds.empty()) throw ConfigError("sweep seeds must be non-empty");
}

std::vector<RunConfig> SweepConfig::expand() const {
  validate();
  std::vector<RunConfig> runs;
  runs.reserve(values.size() * seeds.size());
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::uint64_t seed : seeds) {
      RunConfig c = base;
      c.problem_seed = seed;
      // independent oracle stream per (seed, axis position)
      c.oracle_seed = Rng::derive(seed, 1000 + vi);
      if (sweep_axis == "delta1")
        c.delta1 = values[vi];
      else
        c.delta4 = values[vi];
      runs.push_back(std::move(c));
    }
  }
  return runs;
}

}  // namespace sesop
