// Copyright 2026 The staleness-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "staleness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "staleness/format.hpp"

namespace staleness::plot {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = kWidth - 180.0;
constexpr double kTop = 50.0;
constexpr double kBottom = kHeight - 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s == "-0.00" || s == "-0") s.erase(0, 1);
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

bool try_number(std::string_view cell, double& value) {
  try {
    value = parse_double(cell);
  } catch (const std::exception&) {
    return false;
  }
  return std::isfinite(value);
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.2;
  int decimals = 1;
};

Axis make_axis(double lo, double hi) {
  if (hi - lo <= 0.0) {
    const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / 5.0;
  const double e = std::floor(std::log10(raw));
  const double f = raw / std::pow(10.0, e);
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  Axis axis;
  axis.step = nice * std::pow(10.0, e);
  axis.lo = std::floor(lo / axis.step) * axis.step;
  axis.hi = std::ceil(hi / axis.step) * axis.step;
  axis.decimals = std::max(0, -static_cast<int>(std::floor(std::log10(axis.step) + 1e-9)));
  return axis;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    for (auto& f : fields) f = std::string(trim(f));
    if (table.header.empty()) {
      for (const auto& name : fields) {
        if (name.empty()) throw CsvError("empty column name in header", line_no);
      }
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw CsvError("expected " + std::to_string(table.header.size()) + " fields, found " +
                         std::to_string(fields.size()),
                     line_no);
    }
    table.rows.push_back(std::move(fields));
    table.row_lines.push_back(line_no);
  }
  if (table.header.empty()) throw CsvError("no header", line_no == 0 ? 1 : line_no);
  return table;
}

Figure figure_from_csv(const CsvTable& table, const std::string& x,
                       const std::vector<std::string>& y) {
  auto column = [&](const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw CsvError("no column named '" + name + "'", 1);
    return static_cast<std::size_t>(it - table.header.begin());
  };
  if (table.rows.empty()) throw CsvError("no data rows", 2);
  if (table.header.size() < 2) throw CsvError("need an x column and at least one y column", 1);

  const std::size_t xc = x.empty() ? 0 : column(x);
  std::vector<std::size_t> ycs;
  if (y.empty()) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == xc) continue;
      bool numeric = true;
      for (const auto& row : table.rows) {
        double v;
        if (!row[c].empty() && !try_number(row[c], v)) {
          numeric = false;
          break;
        }
      }
      if (numeric) ycs.push_back(c);
    }
    if (ycs.empty()) throw CsvError("no numeric y columns", 1);
  } else {
    for (const auto& name : y) ycs.push_back(column(name));
  }

  Figure fig;
  fig.x_label = table.header[xc];
  fig.y_label = ycs.size() == 1 ? table.header[ycs.front()] : "value";
  for (auto c : ycs) fig.series.push_back({table.header[c], {}});
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r < table.row_lines.size() ? table.row_lines[r] : r + 2;
    double xv;
    if (row[xc].empty()) continue;
    if (!try_number(row[xc], xv)) {
      throw CsvError("non-numeric value '" + row[xc] + "' in column " + table.header[xc], line);
    }
    for (std::size_t s = 0; s < ycs.size(); ++s) {
      const auto& cell = row[ycs[s]];
      if (cell.empty()) continue;
      double yv;
      if (!try_number(cell, yv)) {
        throw CsvError("non-numeric value '" + cell + "' in column " + table.header[ycs[s]], line);
      }
      fig.series[s].points.emplace_back(xv, yv);
    }
  }
  bool any = false;
  for (const auto& s : fig.series) any = any || !s.points.empty();
  if (!any) throw CsvError("no numeric data points", 2);
  return fig;
}

std::string render_svg(const Figure& figure) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : figure.series) {
    for (const auto& [xv, yv] : s.points) {
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (!(xmin <= xmax)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  const Axis ax = make_axis(xmin, xmax);
  const Axis ay = make_axis(ymin, ymax);
  auto px = [&](double v) { return kLeft + (v - ax.lo) / (ax.hi - ax.lo) * (kRight - kLeft); };
  auto py = [&](double v) { return kBottom - (v - ay.lo) / (ay.hi - ay.lo) * (kBottom - kTop); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0) << "\" height=\""
      << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' ' << fixed(kHeight, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!figure.title.empty()) {
    out << "<text x=\"" << fixed((kLeft + kRight) / 2) << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-size=\"15\">" << escape(figure.title) << "</text>\n";
  }

  out << "<g id=\"grid\" stroke=\"#e0e0e0\" stroke-width=\"1\">\n";
  const long xticks = std::lround((ax.hi - ax.lo) / ax.step);
  const long yticks = std::lround((ay.hi - ay.lo) / ay.step);
  for (long k = 0; k <= xticks; ++k) {
    const double p = px(ax.lo + k * ax.step);
    out << "<line x1=\"" << fixed(p) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(p)
        << "\" y2=\"" << fixed(kBottom) << "\"/>\n";
  }
  for (long k = 0; k <= yticks; ++k) {
    const double p = py(ay.lo + k * ay.step);
    out << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(p) << "\" x2=\"" << fixed(kRight)
        << "\" y2=\"" << fixed(p) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kBottom) << "\" x2=\"" << fixed(kRight)
      << "\" y2=\"" << fixed(kBottom) << "\"/>\n";
  out << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
      << "\" y2=\"" << fixed(kBottom) << "\"/>\n";
  out << "</g>\n";

  out << "<g id=\"ticks\">\n";
  for (long k = 0; k <= xticks; ++k) {
    const double v = ax.lo + k * ax.step;
    out << "<text x=\"" << fixed(px(v)) << "\" y=\"" << fixed(kBottom + 18)
        << "\" text-anchor=\"middle\">" << fixed(v, ax.decimals) << "</text>\n";
  }
  for (long k = 0; k <= yticks; ++k) {
    const double v = ay.lo + k * ay.step;
    out << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(py(v) + 4)
        << "\" text-anchor=\"end\">" << fixed(v, ay.decimals) << "</text>\n";
  }
  out << "</g>\n";

  out << "<text x=\"" << fixed((kLeft + kRight) / 2) << "\" y=\"" << fixed(kHeight - 18)
      << "\" text-anchor=\"middle\">" << escape(figure.x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << fixed((kTop + kBottom) / 2) << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 20 " << fixed((kTop + kBottom) / 2) << ")\">"
      << escape(figure.y_label) << "</text>\n";

  out << "<g id=\"series\">\n";
  for (std::size_t i = 0; i < figure.series.size(); ++i) {
    const auto& s = figure.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      if (j) out << ' ';
      out << fixed(px(s.points[j].first)) << ',' << fixed(py(s.points[j].second));
    }
    out << "\"/>\n";
    out << "<g fill=\"" << color << "\">\n";
    for (const auto& [xv, yv] : s.points) {
      out << "<circle cx=\"" << fixed(px(xv)) << "\" cy=\"" << fixed(py(yv)) << "\" r=\"2.5\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</g>\n";

  out << "<g id=\"legend\">\n";
  for (std::size_t i = 0; i < figure.series.size(); ++i) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(i);
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<line x1=\"" << fixed(kRight + 20) << "\" y1=\"" << fixed(y) << "\" x2=\""
        << fixed(kRight + 44) << "\" y2=\"" << fixed(y) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fixed(kRight + 50) << "\" y=\"" << fixed(y + 4) << "\">"
        << escape(figure.series[i].name) << "</text>\n";
  }
  out << "</g>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace staleness::plot
