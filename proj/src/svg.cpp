#include "semcomp/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace semcomp::svg {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 190, kTop = 50, kBottom = 70;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string header(const std::string& title, const std::string& description) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" "
                  "height=\"600\" font-family=\"sans-serif\">\n";
  s += "<title>" + escape(title) + "</title>\n";
  if (!description.empty()) s += "<desc>" + escape(description) + "</desc>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kLeft + kPlotW / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" +
       escape(title) + "</text>\n";
  return s;
}

std::string marker_svg(Marker m, double x, double y, const std::string& color) {
  switch (m) {
    case Marker::circle:
      return "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"4\" fill=\"" + color + "\"/>\n";
    case Marker::square:
      return "<rect x=\"" + num(x - 4) + "\" y=\"" + num(y - 4) + "\" width=\"8\" height=\"8\" fill=\"" +
             color + "\"/>\n";
    case Marker::triangle:
      return "<polygon points=\"" + num(x) + "," + num(y - 5) + " " + num(x - 5) + "," + num(y + 4) +
             " " + num(x + 5) + "," + num(y + 4) + "\" fill=\"" + color + "\"/>\n";
    case Marker::star: {
      std::string pts;
      for (int k = 0; k < 10; ++k) {
        const double r = k % 2 == 0 ? 8.0 : 3.5;
        const double a = -M_PI / 2 + k * M_PI / 5;
        pts += num(x + r * std::cos(a)) + "," + num(y + r * std::sin(a)) + " ";
      }
      return "<polygon points=\"" + pts + "\" fill=\"" + color + "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
    }
  }
  return {};
}

std::string axes(const std::string& x_label, const std::string& y_label) {
  std::string s;
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + kPlotH) + "\" x2=\"" + num(kLeft + kPlotW) +
       "\" y2=\"" + num(kTop + kPlotH) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
       num(kTop + kPlotH) + "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(kLeft + kPlotW / 2) + "\" y=\"" + num(kHeight - 20) +
       "\" text-anchor=\"middle\" font-size=\"14\">" + escape(x_label) + "</text>\n";
  s += "<text x=\"20\" y=\"" + num(kTop + kPlotH / 2) +
       "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " + num(kTop + kPlotH / 2) +
       ")\">" + escape(y_label) + "</text>\n";
  return s;
}

std::string y_ticks(const std::vector<double>& ticks, double lo, double hi) {
  std::string s;
  for (double t : ticks) {
    const double y = kTop + kPlotH - (t - lo) / (hi - lo) * kPlotH;
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
         num(y) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + kPlotW) + "\" y2=\"" +
         num(y) + "\" stroke=\"#e0e0e0\"/>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) +
         "\" text-anchor=\"end\" font-size=\"12\">" + tick_label(t) + "</text>\n";
  }
  return s;
}

std::string legend_entry(std::size_t index, const std::string& name, const std::string& color,
                         Marker marker, bool line) {
  const double x = kLeft + kPlotW + 20;
  const double y = kTop + 10 + 22 * static_cast<double>(index);
  std::string s;
  if (line) {
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 24) + "\" y2=\"" + num(y) +
         "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
  }
  s += marker_svg(marker, x + 12, y, color);
  s += "<text x=\"" + num(x + 32) + "\" y=\"" + num(y + 4) + "\" font-size=\"12\">" + escape(name) +
       "</text>\n";
  return s;
}

std::pair<double, double> padded(double lo, double hi) {
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target_count) {
  std::tie(lo, hi) = padded(lo, hi);
  const double raw = (hi - lo) / std::max(1, target_count - 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  const double start = std::floor(lo / step) * step;
  for (double t = start; t <= hi + step * 0.5 + 1e-12; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    if (ticks.back() >= hi - 1e-12 * std::abs(hi)) break;
  }
  return ticks;
}

std::string render(const XYChart& chart) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
  for (const auto& s : chart.series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || (chart.log_x && x <= 0)) continue;
      xlo = std::min(xlo, tx(x));
      xhi = std::max(xhi, tx(x));
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  std::vector<double> xt;
  if (chart.log_x) {
    std::tie(xlo, xhi) = padded(std::floor(xlo), std::ceil(xhi));
    for (double e = xlo; e <= xhi + 1e-9; e += 1.0) xt.push_back(e);
  } else {
    xt = nice_ticks(xlo, xhi);
    xlo = xt.front();
    xhi = xt.back();
  }
  const auto yt = nice_ticks(ylo, yhi);
  ylo = yt.front();
  yhi = yt.back();

  auto px = [&](double x) { return kLeft + (tx(x) - xlo) / (xhi - xlo) * kPlotW; };
  auto py = [&](double y) { return kTop + kPlotH - (y - ylo) / (yhi - ylo) * kPlotH; };

  std::string s = header(chart.title, chart.description);
  s += y_ticks(yt, ylo, yhi);
  for (double t : xt) {
    const double x = kLeft + (t - xlo) / (xhi - xlo) * kPlotW;
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + kPlotH) + "\" x2=\"" + num(x) + "\" y2=\"" +
         num(kTop + kPlotH + 5) + "\" stroke=\"black\"/>\n";
    const std::string label = chart.log_x ? "1e" + tick_label(t) : tick_label(t);
    s += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + kPlotH + 20) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + label + "</text>\n";
  }
  s += axes(chart.x_label, chart.y_label);

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& ser = chart.series[i];
    const std::string color = ser.color.empty() ? kPalette[i % kPalette.size()] : ser.color;
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : ser.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || (chart.log_x && x <= 0)) continue;
      pts.emplace_back(px(x), py(y));
    }
    s += "<g class=\"series\" data-name=\"" + escape(ser.name) + "\">\n";
    if (ser.draw_line && pts.size() > 1) {
      std::string path;
      for (auto [x, y] : pts) path += num(x) + "," + num(y) + " ";
      s += "<polyline points=\"" + path + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    }
    for (auto [x, y] : pts) s += marker_svg(ser.marker, x, y, color);
    s += "</g>\n";
    s += legend_entry(i, ser.name, color, ser.marker, ser.draw_line);
  }
  s += "</svg>\n";
  return s;
}

std::string render(const BarChart& chart) {
  double lo = 0.0, hi = 0.0;
  for (const auto& g : chart.groups) {
    for (double v : g.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const auto yt = nice_ticks(lo, hi);
  lo = yt.front();
  hi = yt.back();
  auto py = [&](double y) { return kTop + kPlotH - (y - lo) / (hi - lo) * kPlotH; };

  std::string s = header(chart.title, chart.description);
  s += y_ticks(yt, lo, hi);
  s += axes("", chart.y_label);
  const double zero = py(0.0);
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(zero) + "\" x2=\"" + num(kLeft + kPlotW) +
       "\" y2=\"" + num(zero) + "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";

  const double group_w = kPlotW / static_cast<double>(std::max<std::size_t>(chart.groups.size(), 1));
  const double bar_w =
      group_w * 0.8 / static_cast<double>(std::max<std::size_t>(chart.series_names.size(), 1));
  for (std::size_t g = 0; g < chart.groups.size(); ++g) {
    const double gx = kLeft + group_w * static_cast<double>(g) + group_w * 0.1;
    const auto& group = chart.groups[g];
    for (std::size_t b = 0; b < group.values.size() && b < chart.series_names.size(); ++b) {
      const double v = group.values[b];
      if (!std::isfinite(v)) continue;
      const double top = std::min(py(v), zero);
      const double h = std::abs(py(v) - zero);
      s += "<rect x=\"" + num(gx + bar_w * static_cast<double>(b)) + "\" y=\"" + num(top) +
           "\" width=\"" + num(bar_w * 0.95) + "\" height=\"" + num(h) + "\" fill=\"" +
           kPalette[b % kPalette.size()] + "\"/>\n";
    }
    s += "<text x=\"" + num(gx + group_w * 0.4) + "\" y=\"" + num(kTop + kPlotH + 20) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + escape(group.label) + "</text>\n";
  }
  for (std::size_t b = 0; b < chart.series_names.size(); ++b) {
    s += legend_entry(b, chart.series_names[b], kPalette[b % kPalette.size()], Marker::square, false);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace semcomp::svg
