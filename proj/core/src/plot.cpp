#include "steklov/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "steklov/csv.hpp"
#include "steklov/error.hpp"
#include "steklov/lab.hpp"

namespace steklov {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
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

struct Axes {
  double x0, x1, y0, y1;  // log10 range

  double px(double x) const { return kLeft + (std::log10(x) - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (std::log10(y) - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string line(double xa, double ya, double xb, double yb, const std::string& style) {
  return "<line x1=\"" + fixed(xa) + "\" y1=\"" + fixed(ya) + "\" x2=\"" + fixed(xb) + "\" y2=\"" + fixed(yb) +
         "\" " + style + "/>\n";
}

std::string text(double x, double y, const std::string& s, const std::string& extra = "") {
  return "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\"" + (extra.empty() ? "" : " " + extra) + ">" +
         xml_escape(s) + "</text>\n";
}

}  // namespace

std::string render_loglog_svg(const PlotSpec& spec) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const PlotSeries& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin <= xmax)) raise(ErrorCode::kInvalidArgument, "plot '" + spec.title + "' has no positive points");
  Axes ax{std::floor(std::log10(xmin)), std::ceil(std::log10(xmax)), std::floor(std::log10(ymin)),
          std::ceil(std::log10(ymax))};
  if (ax.x1 <= ax.x0) ax.x1 = ax.x0 + 1;
  if (ax.y1 <= ax.y0) ax.y1 = ax.y0 + 1;
  const double left = kLeft;
  const double right = kWidth - kRight;
  const double top = kTop;
  const double bottom = kHeight - kBottom;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" + fixed(kHeight, 0) +
         "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<defs><clipPath id=\"box\"><rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" +
         fixed(right - left) + "\" height=\"" + fixed(bottom - top) + "\"/></clipPath></defs>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth, 0) + "\" height=\"" + fixed(kHeight, 0) + "\" fill=\"white\"/>\n";
  out += text(0.5 * (left + right), 24, spec.title, "text-anchor=\"middle\" font-size=\"15\"");

  // Decade grid and labels.
  for (int e = static_cast<int>(ax.x0); e <= static_cast<int>(ax.x1); ++e) {
    const double x = ax.px(std::pow(10.0, e));
    out += line(x, top, x, bottom, "stroke=\"#dddddd\"");
    out += text(x, bottom + 18, "1e" + std::to_string(e), "text-anchor=\"middle\"");
  }
  for (int e = static_cast<int>(ax.y0); e <= static_cast<int>(ax.y1); ++e) {
    const double y = ax.py(std::pow(10.0, e));
    out += line(left, y, right, y, "stroke=\"#dddddd\"");
    out += text(left - 6, y + 4, "1e" + std::to_string(e), "text-anchor=\"end\"");
  }
  out += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(right - left) + "\" height=\"" +
         fixed(bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += text(0.5 * (left + right), kHeight - 18, spec.x_label, "text-anchor=\"middle\"");
  out += text(18, 0.5 * (top + bottom), spec.y_label,
              "text-anchor=\"middle\" transform=\"rotate(-90 18 " + fixed(0.5 * (top + bottom)) + ")\"");

  std::string legend;
  double ly = top + 10;
  auto legend_entry = [&](const std::string& swatch, const std::string& label) {
    legend += swatch;
    legend += text(right + 34, ly + 4, label);
    ly += 18;
  };

  out += "<g clip-path=\"url(#box)\">\n";
  const double lx0 = std::pow(10.0, ax.x0);
  const double lx1 = std::pow(10.0, ax.x1);
  for (const PlotReference& r : spec.references) {
    // A power law is straight on log axes, so its endpoints suffice; the clip path trims it.
    const double ya = r.coefficient * std::pow(lx0, r.power);
    const double yb = r.coefficient * std::pow(lx1, r.power);
    out += line(ax.px(lx0), ax.py(ya), ax.px(lx1), ax.py(yb), "stroke=\"#555555\" stroke-dasharray=\"6 4\"");
    legend_entry(line(right + 10, ly, right + 28, ly, "stroke=\"#555555\" stroke-dasharray=\"6 4\""), r.label);
  }
  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const PlotSeries& s = spec.series[si];
    const std::string color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      out += "<circle cx=\"" + fixed(ax.px(s.x[i])) + "\" cy=\"" + fixed(ax.py(s.y[i])) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
      fx.push_back(s.x[i]);
      fy.push_back(s.y[i]);
    }
    std::string label = s.label;
    if (spec.fit_lines && fx.size() >= 2) {
      try {
        const ScalingFit f = fit_loglog(s.label, fx, fy);
        const double xa = f.lambda_cut;
        const double xb = *std::max_element(fx.begin(), fx.end());
        auto model = [&](double x) { return std::exp(f.intercept) * std::pow(x, f.slope); };
        out += line(ax.px(xa), ax.py(model(xa)), ax.px(xb), ax.py(model(xb)),
                    "stroke=\"" + color + "\" stroke-width=\"2\"");
        label += " (slope " + fixed(f.slope, 3) + ")";
      } catch (const Error&) {
        // Too few distinct points above the cut; scatter only.
      }
    }
    legend_entry("<circle cx=\"" + fixed(right + 19) + "\" cy=\"" + fixed(ly) + "\" r=\"3\" fill=\"" + color + "\"/>\n",
                 label);
  }
  out += "</g>\n";
  out += legend;
  out += "</svg>\n";
  return out;
}

std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths, const std::string& out_dir) {
  if (csv_paths.empty()) raise(ErrorCode::kInvalidArgument, "no CSV inputs");
  PlotSpec nodal{"Boundary nodal count", "lambda", "zeros", {}, {{"2 lambda^6", 2.0, 6.0}}, true};
  PlotSpec doubling{"Max boundary doubling exponent", "lambda", "max log2 ratio", {}, {{"lambda^5", 1.0, 5.0}}, true};
  for (const std::string& path : csv_paths) {
    CsvTable t;
    try {
      t = parse_csv(read_text_file(path));
    } catch (const Error& e) {
      raise(e.code(), path + ": " + e.what());
    }
    if (t.rows.empty()) raise(ErrorCode::kParse, path + ": empty CSV, no data rows");
    const std::string stem = std::filesystem::path(path).stem().string();
    PlotSeries zs{stem, {}, {}};
    PlotSeries es{stem, {}, {}};
    try {
      const int cl = t.column("lambda");
      const int cz = t.column("zeros");
      const int ce = t.column("max_exponent");
      const int ci = t.column("included");
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.rows[r][ci] != "1") continue;
        const double lam = t.number(r, cl);
        zs.x.push_back(lam);
        zs.y.push_back(t.number(r, cz));
        es.x.push_back(lam);
        es.y.push_back(t.number(r, ce));
      }
    } catch (const Error& e) {
      raise(e.code(), path + ": " + e.what());
    }
    if (zs.x.empty()) raise(ErrorCode::kParse, path + ": no included rows");
    nodal.series.push_back(std::move(zs));
    doubling.series.push_back(std::move(es));
  }
  const std::string nodal_svg = render_loglog_svg(nodal);
  const std::string doubling_svg = render_loglog_svg(doubling);
  std::filesystem::create_directories(out_dir);
  const std::string a = (std::filesystem::path(out_dir) / "nodal.svg").string();
  const std::string b = (std::filesystem::path(out_dir) / "doubling.svg").string();
  write_text_file(a, nodal_svg);
  write_text_file(b, doubling_svg);
  return {a, b};
}

}  // namespace steklov
