#include "sesop/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace sesop {

double Trace::max_W() const {
  double m = 0.0;
  for (const auto& r : records)
    if (r.W_k) m = std::max(m, *r.W_k);
  return m;
}

double Trace::max_d1_norm() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.d1_norm);
  return m;
}

double Trace::max_step_norm() const {
  double m = 0.0;
  for (const auto& r : records)
    if (r.step_norm) m = std::max(m, *r.step_norm);
  return m;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void append_field(std::string& out, const std::optional<double>& v) {
  out.push_back(',');
  if (v) out += format_double(*v);
}

std::optional<double> parse_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("trace CSV: malformed numeric field '" + s + "'");
  return v;
}

}  // namespace

std::string trace_to_csv(const Trace& trace) {
  std::string out = kTraceCsvHeader;
  out.push_back('\n');
  for (const auto& r : trace.records) {
    out += std::to_string(r.k);
    append_field(out, r.f_gap);
    out.push_back(',');
    out += format_double(r.grad_norm);
    append_field(out, r.g_norm);
    append_field(out, r.w_k);
    append_field(out, r.W_k);
    append_field(out, r.ip_d2);
    append_field(out, r.ip_d1);
    append_field(out, r.sub_gap);
    append_field(out, r.dist_to_opt);
    out.push_back('\n');
  }
  return out;
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << trace_to_csv(trace);
}

Trace trace_from_csv_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceCsvHeader)
    throw std::runtime_error("trace CSV: unexpected header '" + line + "'");

  Trace trace;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (fields.size() != 10)
      throw std::runtime_error("trace CSV: expected 10 fields, got " +
                               std::to_string(fields.size()));
    IterationRecord r;
    r.k = static_cast<std::size_t>(std::stoull(fields[0]));
    r.f_gap = parse_field(fields[1]);
    auto gn = parse_field(fields[2]);
    if (!gn) throw std::runtime_error("trace CSV: missing grad_norm");
    r.grad_norm = *gn;
    r.g_norm = parse_field(fields[3]);
    r.w_k = parse_field(fields[4]);
    r.W_k = parse_field(fields[5]);
    r.ip_d2 = parse_field(fields[6]);
    r.ip_d1 = parse_field(fields[7]);
    r.sub_gap = parse_field(fields[8]);
    r.dist_to_opt = parse_field(fields[9]);
    trace.records.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < trace.records.size(); ++i)
    if (trace.records[i].k != i)
      throw std::runtime_error("trace CSV: records not contiguous from k=0");
  return trace;
}

Trace trace_from_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open trace CSV: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return trace_from_csv_string(ss.str());
}

}  // namespace sesop
