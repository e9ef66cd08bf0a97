#pragma once

#include <optional>

#include "meissner/table.hpp"

namespace meissner {

// Declarative SVG line plot: polyline series, axis ticks, optional log axes,
// an optional log-log reference-slope guide line and an optional vertical
// marker.  Output is byte-deterministic for identical inputs.
struct PlotSpec {
    std::string x_column;
    std::vector<std::string> y_columns;
    bool log_x = false;
    bool log_y = false;
    std::optional<double> guide_slope;  // drawn through the data midpoint (log-log)
    std::optional<double> marker_x;     // vertical dashed marker
    std::string title;
};

std::string emit_plot(const ResultsTable& table, const PlotSpec& spec);

}  // namespace meissner
