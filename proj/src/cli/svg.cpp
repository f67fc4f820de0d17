// Copyright 2026 The strongtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "strongtherm/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string_view>

namespace strongtherm::cli {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 600;
constexpr double kLeft = 90;
constexpr double kRight = 170;
constexpr double kTop = 50;
constexpr double kBottom = 70;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};

std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Roughly five round-numbered ticks covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
    out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return out;
}

}  // namespace

std::string render_svg(const Chart& chart) {
  auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (chart.log_x && !(s.x[i] > 0.0)) continue;
      if (!std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymin -= 0.5 * std::max(1e-12, std::abs(ymin));
    ymax += 0.5 * std::max(1e-12, std::abs(ymax));
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  o += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
       escape(chart.title) + "</text>\n";
  o += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(xmin, xmax)) {
    const double x = px(t);
    o += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" + num(kTop + ph + 6) +
         "\" stroke=\"black\"/>\n";
    const std::string label = chart.log_x ? "1e" + tick_label(t) : tick_label(t);
    o += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 22) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
  }
  for (double t : nice_ticks(ymin, ymax)) {
    const double y = py(t);
    o += "<line x1=\"" + num(kLeft - 6) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(y) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + num(kLeft - 10) + "\" y=\"" + num(y + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + tick_label(t) + "</text>\n";
  }
  if (ymin < 0 && ymax > 0)
    o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
         num(py(0)) + "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";

  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 20) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + escape(chart.x_label) + "</text>\n";
  o += "<text x=\"22\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 22 " +
       num(kTop + ph / 2) + ")\">" + escape(chart.y_label) + "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const Series& s = chart.series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (chart.log_x && !(s.x[i] > 0.0)) continue;
      if (!std::isfinite(s.y[i])) continue;
      pts += num(px(tx(s.x[i]))) + "," + num(py(s.y[i])) + " ";
    }
    o += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = kTop + 20 + 22 * static_cast<double>(k);
    o += "<line x1=\"" + num(kLeft + pw + 15) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(kLeft + pw + 40) + "\" y2=\"" +
         num(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + num(kLeft + pw + 46) + "\" y=\"" + num(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace strongtherm::cli
