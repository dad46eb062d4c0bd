#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mtkit/experiments.hpp"

namespace mtk {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Range {
  double lo, hi;
  double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

Range padded(double lo, double hi) {
  if (hi <= lo) {
    const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_plot(const CsvTable& table, const PlotSpec& spec) {
  if (table.empty()) throw InvalidArgument("cannot plot an empty CSV");
  if (spec.y_columns.empty()) throw InvalidArgument("plot needs at least one y column");

  CsvTable rows(table.header());
  if (spec.filter_column.empty()) {
    rows = table;
  } else {
    const int fc = table.column(spec.filter_column);
    for (const auto& r : table.rows())
      if (r[fc] == spec.filter_value) rows.add_row(r);
    if (rows.empty()) throw InvalidArgument("no rows match " + spec.filter_column + "=" + spec.filter_value);
  }
  const auto xs = rows.numeric_column(spec.x_column);
  std::vector<std::vector<double>> ys;
  for (const auto& c : spec.y_columns) ys.push_back(rows.numeric_column(c));

  double ylo = ys[0][0], yhi = ys[0][0];
  for (const auto& y : ys)
    for (double v : y) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
  const Range xr = padded(*std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end()));
  const Range yr = padded(ylo, yhi);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << coord(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n";
  os << "<path d=\"M" << coord(x0) << ',' << coord(y1) << " V" << coord(y0) << " H" << coord(x1)
     << "\" stroke=\"black\" fill=\"none\"/>\n";

  // Five ticks per axis.
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0, yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    const double px = xr.map(xv, x0, x1), py = yr.map(yv, y0, y1);
    os << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(y0) << "\" x2=\"" << coord(px) << "\" y2=\""
       << coord(y0 + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << coord(px) << "\" y=\"" << coord(y0 + 18) << "\" text-anchor=\"middle\">" << num(xv)
       << "</text>\n";
    os << "<line x1=\"" << coord(x0 - 5) << "\" y1=\"" << coord(py) << "\" x2=\"" << coord(x0) << "\" y2=\""
       << coord(py) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << coord(x0 - 8) << "\" y=\"" << coord(py + 4) << "\" text-anchor=\"end\">" << num(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(kHeight - 10) << "\" text-anchor=\"middle\">"
     << escape(spec.x_column) << "</text>\n";

  for (size_t s = 0; s < ys.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    if (!spec.scatter) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (size_t i = 0; i < xs.size(); ++i)
        os << (i ? " " : "") << coord(xr.map(xs[i], x0, x1)) << ',' << coord(yr.map(ys[s][i], y0, y1));
      os << "\"/>\n";
    }
    for (size_t i = 0; i < xs.size(); ++i)
      os << "<circle cx=\"" << coord(xr.map(xs[i], x0, x1)) << "\" cy=\"" << coord(yr.map(ys[s][i], y0, y1))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = kTop + 16.0 * s;
    os << "<rect x=\"" << coord(x1 - 150) << "\" y=\"" << coord(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
       << color << "\"/>\n";
    os << "<text x=\"" << coord(x1 - 135) << "\" y=\"" << coord(ly) << "\">" << escape(spec.y_columns[s])
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& svg_path) {
  write_text_file(svg_path, render_plot(CsvTable::load(csv_path), spec));
}

}  // namespace mtk
