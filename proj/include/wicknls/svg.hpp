#pragma once
#include <string>
#include <vector>

// Minimal standalone SVG line plots for the convergence reports.  One fixed
// canvas, linear axes with round-number ticks, one polyline + circle
// markers per series, legend in the top-right.  validate_svg is the
// acceptance check: well-formed tags, quoted attributes, finite
// coordinates, xmlns and viewBox present.

namespace wicknls {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPlot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<SvgSeries> series;
};

std::string render_svg(const SvgPlot& plot);

// Returns the empty string when the document passes, else a short
// description of the first problem found.
std::string validate_svg(const std::string& doc);

}  // namespace wicknls
