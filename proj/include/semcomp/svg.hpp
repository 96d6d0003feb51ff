#pragma once

#include <string>
#include <utility>
#include <vector>

namespace semcomp::svg {

enum class Marker { circle, square, triangle, star };

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
  bool draw_line = true;
  Marker marker = Marker::circle;
  std::string color;  // empty: taken from the palette by series index
};

struct XYChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<Series> series;
  std::string description;  // emitted as <desc>, e.g. axis scaling notes
};

struct BarGroup {
  std::string label;
  std::vector<double> values;  // one per bar series; NaN leaves a gap
};

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> series_names;
  std::vector<BarGroup> groups;
  std::string description;
};

/// 800x600 viewBox, axes with tick labels, and a legend.
std::string render(const XYChart& chart);
std::string render(const BarChart& chart);

/// Round tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

}  // namespace semcomp::svg
