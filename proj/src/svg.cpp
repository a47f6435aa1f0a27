#include "sesop/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sesop {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#e377c2",
                          "#7f7f7f", "#bcbd22"};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) return fmt("%.0e", v);
  return fmt("%g", v);
}

/// Nice tick positions for a linear axis (1/2/5 progression, ~6 ticks).
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 1e-9 * span; t += step) ticks.push_back(t);
  return ticks;
}

/// Decade ticks for a log axis over [lo, hi] given in log10 units.
std::vector<double> decade_ticks(double llo, double lhi) {
  std::vector<double> ticks;
  const int e0 = static_cast<int>(std::ceil(llo - 1e-9));
  const int e1 = static_cast<int>(std::floor(lhi + 1e-9));
  int stride = 1;
  while ((e1 - e0) / stride > 12) ++stride;
  for (int e = e0; e <= e1; e += stride) ticks.push_back(std::pow(10.0, e));
  if (ticks.empty()) ticks.push_back(std::pow(10.0, 0.5 * (llo + lhi)));
  return ticks;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec, const std::vector<Series>& series) {
  if (series.empty()) throw std::invalid_argument("render_line_chart: no series");

  struct Clean {
    const Series* src;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Clean> clean;
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  bool any = false;
  for (const auto& s : series) {
    Clean c{&s, {}};
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (spec.log_x && !(x > 0.0)) continue;
      if (spec.log_y && !(y > 0.0)) continue;
      c.pts.emplace_back(x, y);
    }
    if (c.pts.size() > 1600) {
      const std::size_t stride = (c.pts.size() + 1599) / 1600;
      std::vector<std::pair<double, double>> ds;
      for (std::size_t i = 0; i < c.pts.size(); i += stride) ds.push_back(c.pts[i]);
      if (ds.back() != c.pts.back()) ds.push_back(c.pts.back());
      c.pts = std::move(ds);
    }
    for (auto [x, y] : c.pts) {
      const double tx = spec.log_x ? std::log10(x) : x;
      const double ty = spec.log_y ? std::log10(y) : y;
      if (!any) {
        x_lo = x_hi = tx;
        y_lo = y_hi = ty;
        any = true;
      } else {
        x_lo = std::min(x_lo, tx);
        x_hi = std::max(x_hi, tx);
        y_lo = std::min(y_lo, ty);
        y_hi = std::max(y_hi, ty);
      }
    }
    clean.push_back(std::move(c));
  }
  if (!any) throw std::invalid_argument("render_line_chart: no plottable points");
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double y_pad = 0.04 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double ml = 78, mr = 22, mt = 46, mb = 56;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto px = [&](double x) {
    const double t = spec.log_x ? std::log10(x) : x;
    return ml + pw * (t - x_lo) / (x_hi - x_lo);
  };
  auto py = [&](double y) {
    const double t = spec.log_y ? std::log10(y) : y;
    return mt + ph * (1.0 - (t - y_lo) / (y_hi - y_lo));
  };

  std::string out;
  out += "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string(spec.width) +
         "' height='" + std::to_string(spec.height) + "' viewBox='0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "'>\n";
  out += "<rect width='100%' height='100%' fill='white'/>\n";
  out += "<text x='" + fmt("%.1f", ml + pw / 2) +
         "' y='24' font-family='sans-serif' font-size='16' text-anchor='middle'>" +
         xml_escape(spec.title) + "</text>\n";

  // axes
  out += "<g stroke='black' stroke-width='1' fill='none'>\n";
  out += "<path d='M" + fmt("%.1f", ml) + " " + fmt("%.1f", mt) + " L" + fmt("%.1f", ml) +
         " " + fmt("%.1f", mt + ph) + " L" + fmt("%.1f", ml + pw) + " " +
         fmt("%.1f", mt + ph) + "'/>\n";
  out += "</g>\n";

  const std::vector<double> xticks =
      spec.log_x ? decade_ticks(x_lo, x_hi) : linear_ticks(x_lo, x_hi);
  const std::vector<double> yticks =
      spec.log_y ? decade_ticks(y_lo, y_hi) : linear_ticks(y_lo, y_hi);

  out += "<g font-family='sans-serif' font-size='11' fill='black'>\n";
  for (double t : xticks) {
    const double x = px(t);
    if (x < ml - 0.5 || x > ml + pw + 0.5) continue;
    out += "<line x1='" + fmt("%.1f", x) + "' y1='" + fmt("%.1f", mt + ph) + "' x2='" +
           fmt("%.1f", x) + "' y2='" + fmt("%.1f", mt + ph + 5) + "' stroke='black'/>\n";
    out += "<line x1='" + fmt("%.1f", x) + "' y1='" + fmt("%.1f", mt) + "' x2='" +
           fmt("%.1f", x) + "' y2='" + fmt("%.1f", mt + ph) +
           "' stroke='#dddddd' stroke-width='0.5'/>\n";
    out += "<text x='" + fmt("%.1f", x) + "' y='" + fmt("%.1f", mt + ph + 18) +
           "' text-anchor='middle'>" + tick_label(t) + "</text>\n";
  }
  for (double t : yticks) {
    const double y = py(t);
    if (y < mt - 0.5 || y > mt + ph + 0.5) continue;
    out += "<line x1='" + fmt("%.1f", ml - 5) + "' y1='" + fmt("%.1f", y) + "' x2='" +
           fmt("%.1f", ml) + "' y2='" + fmt("%.1f", y) + "' stroke='black'/>\n";
    out += "<line x1='" + fmt("%.1f", ml) + "' y1='" + fmt("%.1f", y) + "' x2='" +
           fmt("%.1f", ml + pw) + "' y2='" + fmt("%.1f", y) +
           "' stroke='#dddddd' stroke-width='0.5'/>\n";
    out += "<text x='" + fmt("%.1f", ml - 8) + "' y='" + fmt("%.1f", y + 4) +
           "' text-anchor='end'>" + tick_label(t) + "</text>\n";
  }
  out += "<text x='" + fmt("%.1f", ml + pw / 2) + "' y='" +
         fmt("%.1f", mt + ph + 40.0) + "' text-anchor='middle' font-size='13'>" +
         xml_escape(spec.x_label) + "</text>\n";
  out += "<text x='16' y='" + fmt("%.1f", mt + ph / 2) +
         "' text-anchor='middle' font-size='13' transform='rotate(-90 16 " +
         fmt("%.1f", mt + ph / 2) + ")'>" + xml_escape(spec.y_label) + "</text>\n";
  out += "</g>\n";

  // series
  for (std::size_t si = 0; si < clean.size(); ++si) {
    const auto& c = clean[si];
    if (c.pts.empty()) continue;
    const std::string color =
        c.src->color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))]
                             : c.src->color;
    out += "<polyline fill='none' stroke='" + color + "' stroke-width='1.5'";
    if (c.src->dashed) out += " stroke-dasharray='6 4'";
    out += " points='";
    for (auto [x, y] : c.pts) out += fmt("%.2f", px(x)) + "," + fmt("%.2f", py(y)) + " ";
    out += "'/>\n";
  }

  // legend
  double ly = mt + 14;
  const double lx = ml + pw - 240;
  out += "<g font-family='sans-serif' font-size='12'>\n";
  for (std::size_t si = 0; si < clean.size(); ++si) {
    const auto& c = clean[si];
    const std::string color =
        c.src->color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))]
                             : c.src->color;
    out += "<line x1='" + fmt("%.1f", lx) + "' y1='" + fmt("%.1f", ly - 4) + "' x2='" +
           fmt("%.1f", lx + 26) + "' y2='" + fmt("%.1f", ly - 4) + "' stroke='" + color +
           "' stroke-width='2'" + (c.src->dashed ? " stroke-dasharray='6 4'" : "") + "/>\n";
    out += "<text x='" + fmt("%.1f", lx + 32) + "' y='" + fmt("%.1f", ly) + "'>" +
           xml_escape(c.src->label) + "</text>\n";
    ly += 16;
  }
  out += "</g>\n</svg>\n";
  return out;
}

void write_svg(const std::string& svg, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << svg;
}

}  // namespace sesop
