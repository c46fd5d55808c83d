#pragma once

#include <string>
#include <vector>

namespace persim {

// Minimal static line chart; enough to render curve and density plots
// without a plotting dependency.
struct SvgSeries {
    std::string label;
    std::string color;  // e.g. "#1f77b4"
    std::vector<double> x;
    std::vector<double> y;
};

std::string render_line_chart(const std::string& title, const std::vector<SvgSeries>& series,
                              int width = 720, int height = 420);

}  // namespace persim
