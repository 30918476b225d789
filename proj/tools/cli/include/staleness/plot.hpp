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

#ifndef STALENESS_PLOT_HPP
#define STALENESS_PLOT_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace staleness::plot {

/// Malformed CSV input. line() is 1-based and counts the header.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Source line of each row.
  std::vector<std::size_t> row_lines;
};

/// Plain comma-separated text without quoting. Every row must have as many
/// fields as the header; blank lines are skipped; CRLF is accepted.
CsvTable parse_csv(std::string_view text);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// One series per y column against column `x`. An empty `x` means the first
/// column; empty `y` means every other column whose cells are numeric. Empty
/// cells are gaps. Throws CsvError for non-numeric cells in a plotted column
/// and when there is nothing to plot.
Figure figure_from_csv(const CsvTable& table, const std::string& x = {},
                       const std::vector<std::string>& y = {});

/// Standalone SVG line chart with axes, ticks, axis labels and a legend.
std::string render_svg(const Figure& figure);

}  // namespace staleness::plot

#endif  // STALENESS_PLOT_HPP
