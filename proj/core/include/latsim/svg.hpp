#pragma once

#include <string>

#include "latsim/csv.hpp"

namespace latsim {

// Self-contained SVG line plots of the CSV datasets.  The plotted numbers
// are exactly the CSV values; rendering is optional and flag-gated so the
// core pipeline stays headless.

enum class PlotStyle { Rates, Series, Profiles, Regimes };

struct PlotSpec {
  PlotStyle style = PlotStyle::Rates;
  std::string title;
};

/// Renders `table` to `path`.  Throws on a schema mismatch between the
/// table header and the style, or on an empty dataset (no file written).
void emit_plot(const CsvTable& table, const PlotSpec& spec,
               const std::string& path);

}  // namespace latsim
