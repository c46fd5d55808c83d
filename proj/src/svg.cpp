#include "persim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace persim {

std::string render_line_chart(const std::string& title, const std::vector<SvgSeries>& series,
                              int width, int height) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ml = 56, mr = 16, mt = 36, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
    // axes
    o << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"#444\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        double xv = xmin + (xmax - xmin) * t / 4.0;
        double yv = ymin + (ymax - ymin) * t / 4.0;
        o << "<text x=\"" << sx(xv) << "\" y=\"" << mt + ph + 16
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << xv
          << "</text>\n";
        o << "<text x=\"" << ml - 6 << "\" y=\"" << sy(yv) + 3
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << yv
          << "</text>\n";
    }
    int li = 0;
    for (const auto& s : series) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isnan(s.y[i])) continue;
            o << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
        }
        o << "\"/>\n";
        o << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 14 + 14 * li
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
          << s.color << "\">" << s.label << "</text>\n";
        ++li;
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace persim
