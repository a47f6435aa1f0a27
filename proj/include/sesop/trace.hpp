#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sesop {

/// Per-iteration diagnostics. Optional fields are written as empty CSV
/// fields when absent. d1_norm and step_norm feed the checkers but are not
/// part of the CSV schema.
struct IterationRecord {
  std::size_t k = 0;
  std::optional<double> f_gap;        // f(x_k) - f*, when f* known
  double grad_norm = 0.0;             // ||grad f(x_k)||
  std::optional<double> g_norm;       // ||g(x_k)||
  std::optional<double> w_k;          // omega_k
  std::optional<double> W_k;          // ||sum_{i<=k} omega_i g(x_i)||
  std::optional<double> ip_d2;        // <grad f(x_k), d2_{k-1}>, k >= 1
  std::optional<double> ip_d1;        // <grad f(x_k), x_k - x0>
  std::optional<double> sub_gap;      // f(x_k) - min_tau f(x_{k-1} + D_{k-1} tau)
  std::optional<double> dist_to_opt;  // ||x_k - x*||, when x* known

  double d1_norm = 0.0;               // ||x_k - x0||
  std::optional<double> step_norm;    // ||x_k - x_{k-1}||, k >= 1
};

/// Echo of the configuration that produced a trace.
struct RunMeta {
  std::string problem_type = "quadratic";
  std::size_t n = 0;
  std::uint64_t problem_seed = 0;
  double delta1 = 0.0;
  std::uint64_t oracle_seed = 0;
  std::string solver = "sesop";       // "sesop" | "stm"
  std::string subsolver = "exact";    // "exact" | "iterative"
  double delta4 = 0.0;
  std::size_t iterations = 0;
};

struct Trace {
  std::vector<IterationRecord> records;
  RunMeta meta;

  double max_W() const;
  double max_d1_norm() const;
  double max_step_norm() const;
};

inline constexpr const char* kTraceCsvHeader =
    "k,f_gap,grad_norm,g_norm,w_k,W_k,ip_d2,ip_d1,sub_gap,dist_to_opt";

/// Shortest round-trip decimal rendering (deterministic, locale-free).
std::string format_double(double v);

std::string trace_to_csv(const Trace& trace);
void write_trace_csv(const Trace& trace, const std::string& path);

/// Parses a CSV produced by trace_to_csv. Throws std::runtime_error on a
/// schema mismatch (wrong header or malformed row).
Trace trace_from_csv_string(const std::string& text);
Trace trace_from_csv_file(const std::string& path);

}  // namespace sesop
