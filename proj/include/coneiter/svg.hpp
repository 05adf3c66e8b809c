#pragma once

// Minimal self-contained SVG line chart (no external references, deterministic output).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace coneiter::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // y at x = 0, 1, 2, ...
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const std::string& title,
                              const std::string& x_label = "n", const std::string& y_label = "|x_n|") {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr double width = 640, height = 400, left = 60, right = 150, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;

  std::size_t n_max = 1;
  double y_max = 0.0;
  for (const auto& s : series) {
    n_max = std::max(n_max, s.values.size() > 0 ? s.values.size() - 1 : 1);
    for (double v : s.values)
      if (std::isfinite(v)) y_max = std::max(y_max, v);
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;
  auto px = [&](double n) { return left + pw * n / static_cast<double>(n_max); };
  auto py = [&](double y) { return top + ph * (1.0 - y / y_max); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::num(width) + "\" height=\"" +
         detail::num(height) + "\" viewBox=\"0 0 " + detail::num(width) + " " + detail::num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + detail::escape(title) + "</text>\n";
  // Axes and horizontal grid.
  for (int i = 0; i <= 5; ++i) {
    const double y = y_max * i / 5.0;
    out += "<line x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(py(y)) + "\" x2=\"" + detail::num(left + pw) +
           "\" y2=\"" + detail::num(py(y)) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + detail::num(left - 6) + "\" y=\"" + detail::num(py(y) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + detail::num(y) + "</text>\n";
  }
  const std::size_t x_ticks = std::min<std::size_t>(n_max, 10);
  for (std::size_t i = 0; i <= x_ticks; ++i) {
    const double n = std::round(static_cast<double>(n_max) * static_cast<double>(i) / static_cast<double>(x_ticks));
    out += "<text x=\"" + detail::num(px(n)) + "\" y=\"" + detail::num(top + ph + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
           std::to_string(static_cast<long long>(n)) + "</text>\n";
  }
  out += "<line x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(top + ph) + "\" x2=\"" + detail::num(left + pw) +
         "\" y2=\"" + detail::num(top + ph) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(top) + "\" x2=\"" + detail::num(left) +
         "\" y2=\"" + detail::num(top + ph) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"" + detail::num(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(x_label) +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + detail::num(top + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " + detail::num(top + ph / 2) + ")\">" +
         detail::escape(y_label) + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % (sizeof palette / sizeof *palette)];
    std::string pts;
    for (std::size_t i = 0; i < series[s].values.size(); ++i) {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) continue;
      if (!pts.empty()) pts += ' ';
      pts += detail::num(px(static_cast<double>(i))) + "," + detail::num(py(v));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts +
           "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(s);
    out += "<line x1=\"" + detail::num(left + pw + 10) + "\" y1=\"" + detail::num(ly) + "\" x2=\"" +
           detail::num(left + pw + 30) + "\" y2=\"" + detail::num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + detail::num(left + pw + 34) + "\" y=\"" + detail::num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::escape(series[s].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace coneiter::svg
