#include "latsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace latsim {

namespace {

struct Axes {
  std::string x_label, y_label;
  std::string x_col, y_col;
  std::string group_col;  // empty = single curve
};

Axes axes_for(PlotStyle style) {
  switch (style) {
    case PlotStyle::Rates:
      return {"well depth s", "d(sigma)/dt [mm/s]", "s", "rate_mm_s", ""};
    case PlotStyle::Series:
      return {"t [ms]", "sigma [um]", "t_ms", "sigma_um", ""};
    case PlotStyle::Profiles:
      return {"z [um]", "density [atoms/um]", "z_um", "density_per_um", "t_ms"};
    case PlotStyle::Regimes:
      return {"well depth s", "rate, c [mm/s]", "s", "rate_mm_s", ""};
  }
  throw std::invalid_argument("unknown plot style");
}

const char* kColors[] = {"#1f5fa8", "#c44e52", "#55a868",
                         "#8172b2", "#ccb974", "#64b5cd"};

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

void emit_plot(const CsvTable& table, const PlotSpec& spec,
               const std::string& path) {
  const Axes ax = axes_for(spec.style);
  if (table.rows.empty())
    throw std::invalid_argument("emit_plot: empty dataset, nothing to plot");
  const std::size_t xi = table.column(ax.x_col);   // throws on schema mismatch
  const std::size_t yi = table.column(ax.y_col);

  // Group rows into curves.
  std::map<double, std::vector<std::pair<double, double>>> curves;
  if (ax.group_col.empty()) {
    auto& c = curves[0.0];
    for (const auto& r : table.rows) c.emplace_back(r[xi], r[yi]);
  } else {
    const std::size_t gi = table.column(ax.group_col);
    for (const auto& r : table.rows) curves[r[gi]].emplace_back(r[xi], r[yi]);
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [key, pts] : curves)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  ymin = std::min(ymin, 0.0);

  const double W = 720, H = 480, L = 80, R = 24, T = 40, Bm = 60;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - Bm - (y - ymin) / (ymax - ymin) * (H - T - Bm); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << spec.title
      << "</text>\n";

  // Axes and ticks.
  svg << "<line x1=\"" << L << "\" y1=\"" << H - Bm << "\" x2=\"" << W - R
      << "\" y2=\"" << H - Bm << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
      << H - Bm << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << H - Bm << "\" x2=\""
        << px(xv) << "\" y2=\"" << H - Bm + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(xv) << "\" y=\"" << H - Bm + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << tick_label(xv) << "</text>\n";
    svg << "<line x1=\"" << L - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << L
        << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << L - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(yv) << "</text>\n";
  }
  svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << ax.x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (T + H - Bm) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << (T + H - Bm) / 2 << ")\">"
      << ax.y_label << "</text>\n";

  int ci = 0;
  for (const auto& [key, pts] : curves) {
    svg << "<polyline fill=\"none\" stroke=\"" << kColors[ci % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    if (!ax.group_col.empty()) {
      svg << "<text x=\"" << W - R - 6 << "\" y=\"" << T + 16 + 16 * ci
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"12\" fill=\""
          << kColors[ci % 6] << "\">" << ax.group_col << " = "
          << format_double(key) << "</text>\n";
    }
    ++ci;
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << svg.str();
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace latsim
