#pragma once

#include "hybridcast/date.hpp"

#include <string>
#include <vector>

namespace hybridcast::experiment {

struct PlotLine {
    std::string label;
    std::vector<Date> dates;
    std::vector<double> values;
};

/// Self-contained SVG line chart. With `log_scale` the y axis is
/// logarithmic (non-positive values are dropped).
std::string render_line_chart(const std::string& title, const std::vector<PlotLine>& lines, bool log_scale);

}  // namespace hybridcast::experiment
