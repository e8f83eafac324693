#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lab {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  std::string label;
};

/// Minimal SVG chart: data-space primitives, decade or linear ticks, one
/// optional colour bar. Output depends only on the inputs.
class SvgPlot {
 public:
  SvgPlot(std::string title, Axis x, Axis y, int width = 640, int height = 440);

  void line(const std::vector<double>& x, const std::vector<double>& y, const std::string& color,
            const std::string& name);
  void markers(const std::vector<double>& x, const std::vector<double>& y, const std::string& color,
               const std::string& name);
  /// Points coloured by v on [vmin, vmax].
  void scatter(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& v,
               double vmin, double vmax);
  /// Filled polygon in data coordinates, coloured by v on [vmin, vmax].
  void polygon(const std::vector<std::pair<double, double>>& pts, double v, double vmin, double vmax);
  void colorbar(double vmin, double vmax, const std::string& label);
  void hline(double y, const std::string& color);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;
  bool visible(double x, double y) const;

  std::string title_;
  Axis x_, y_;
  int width_, height_;
  std::string body_;
  std::vector<std::pair<std::string, std::string>> legend_;
  std::string colorbar_;
};

/// Sequential colour map, t in [0, 1].
std::string color_map(double t);

}  // namespace lab
