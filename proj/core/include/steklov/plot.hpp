#pragma once

#include <optional>
#include <string>
#include <vector>

namespace steklov {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Reference curve y = coefficient x^power drawn dashed across the plot.
struct PlotReference {
  std::string label;
  double coefficient = 1.0;
  double power = 1.0;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotReference> references;
  // Least-squares line per series over x >= median x, annotated with its slope.
  bool fit_lines = true;
};

// Log-log scatter as SVG text. Output depends only on the spec (fixed-precision coordinates).
// Throws kInvalidArgument when no series holds a positive point.
std::string render_loglog_svg(const PlotSpec& spec);

// Reads scaling CSVs (columns lambda, zeros, max_exponent, included) and writes nodal.svg and
// doubling.svg into out_dir, one series per file labelled by the file stem. Every input is
// parsed before anything is written; a malformed or empty CSV raises kParse naming the file
// and row, and no file is written.
std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths, const std::string& out_dir);

}  // namespace steklov
