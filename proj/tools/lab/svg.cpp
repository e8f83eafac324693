#include "lab/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace lab {

namespace {

constexpr double kLeft = 70.0, kRight = 110.0, kTop = 40.0, kBottom = 55.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string value_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string tick_label(double v, bool log) {
  char buf[32];
  if (log)
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(std::log10(v))));
  else
    std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;
  if (a.log) {
    const int lo = static_cast<int>(std::ceil(std::log10(a.lo) - 1e-9));
    const int hi = static_cast<int>(std::floor(std::log10(a.hi) + 1e-9));
    const int step = std::max(1, (hi - lo) / 8 + 1);
    for (int k = lo; k <= hi; k += step) out.push_back(std::pow(10.0, k));
    return out;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * span; v += step)
    out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return out;
}

}  // namespace

std::string color_map(double t) {
  static constexpr std::array<std::array<double, 3>, 5> anchors{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  if (!std::isfinite(t)) return "#888888";
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double w = t - i;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(anchors[i][c] * (1.0 - w) + anchors[i + 1][c] * w));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

SvgPlot::SvgPlot(std::string title, Axis x, Axis y, int width, int height)
    : title_(std::move(title)), x_(std::move(x)), y_(std::move(y)), width_(width), height_(height) {
  if (!(x_.hi > x_.lo)) x_.hi = x_.lo + 1.0;
  if (!(y_.hi > y_.lo)) y_.hi = y_.lo + 1.0;
}

double SvgPlot::px(double x) const {
  const double t = x_.log ? std::log(x / x_.lo) / std::log(x_.hi / x_.lo) : (x - x_.lo) / (x_.hi - x_.lo);
  return kLeft + t * (width_ - kLeft - kRight);
}

double SvgPlot::py(double y) const {
  const double t = y_.log ? std::log(y / y_.lo) / std::log(y_.hi / y_.lo) : (y - y_.lo) / (y_.hi - y_.lo);
  return height_ - kBottom - t * (height_ - kTop - kBottom);
}

bool SvgPlot::visible(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y)) return false;
  if ((x_.log && x <= 0.0) || (y_.log && y <= 0.0)) return false;
  return true;
}

void SvgPlot::line(const std::vector<double>& x, const std::vector<double>& y, const std::string& color,
                   const std::string& name) {
  std::string pts;
  auto flush = [&] {
    if (!pts.empty())
      body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    pts.clear();
  };
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!visible(x[i], y[i])) {
      flush();
      continue;
    }
    pts += num(px(x[i])) + "," + num(py(y[i])) + " ";
  }
  flush();
  if (!name.empty()) legend_.emplace_back(color, name);
}

void SvgPlot::markers(const std::vector<double>& x, const std::vector<double>& y, const std::string& color,
                      const std::string& name) {
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (visible(x[i], y[i]))
      body_ += "<circle cx=\"" + num(px(x[i])) + "\" cy=\"" + num(py(y[i])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
  if (!name.empty()) legend_.emplace_back(color, name);
}

void SvgPlot::scatter(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& v,
                      double vmin, double vmax) {
  for (std::size_t i = 0; i < std::min({x.size(), y.size(), v.size()}); ++i)
    if (visible(x[i], y[i]))
      body_ += "<rect x=\"" + num(px(x[i]) - 1.5) + "\" y=\"" + num(py(y[i]) - 1.5) +
               "\" width=\"3\" height=\"3\" fill=\"" + color_map((v[i] - vmin) / (vmax - vmin)) + "\"/>\n";
}

void SvgPlot::polygon(const std::vector<std::pair<double, double>>& pts, double v, double vmin, double vmax) {
  std::string s;
  for (const auto& [x, y] : pts) s += num(px(x)) + "," + num(py(y)) + " ";
  const std::string c = color_map((v - vmin) / (vmax - vmin));
  body_ += "<polygon points=\"" + s + "\" fill=\"" + c + "\" stroke=\"" + c + "\" stroke-width=\"0.3\"/>\n";
}

void SvgPlot::colorbar(double vmin, double vmax, const std::string& label) {
  const double x = width_ - kRight + 25.0, top = kTop, h = height_ - kTop - kBottom;
  colorbar_.clear();
  constexpr int n = 32;
  for (int i = 0; i < n; ++i) {
    colorbar_ += "<rect x=\"" + num(x) + "\" y=\"" + num(top + h * (n - 1 - i) / n) + "\" width=\"14\" height=\"" +
                 num(h / n + 0.5) + "\" fill=\"" + color_map((i + 0.5) / n) + "\"/>\n";
  }
  colorbar_ += "<text x=\"" + num(x + 18) + "\" y=\"" + num(top + 4) + "\" font-size=\"10\">" +
               escape(value_label(vmax)) + "</text>\n";
  colorbar_ += "<text x=\"" + num(x + 18) + "\" y=\"" + num(top + h) + "\" font-size=\"10\">" +
               escape(value_label(vmin)) + "</text>\n";
  colorbar_ += "<text x=\"" + num(x) + "\" y=\"" + num(top - 8) + "\" font-size=\"10\">" + escape(label) + "</text>\n";
}

void SvgPlot::hline(double y, const std::string& color) {
  if (!visible(x_.log ? x_.lo : 0.0, y) && y_.log) return;
  body_ += "<line x1=\"" + num(kLeft) + "\" x2=\"" + num(width_ - kRight) + "\" y1=\"" + num(py(y)) + "\" y2=\"" +
           num(py(y)) + "\" stroke=\"" + color + "\" stroke-dasharray=\"4 3\"/>\n";
}

std::string SvgPlot::str() const {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_) + "\" height=\"" +
                  std::to_string(height_) + "\" font-family=\"sans-serif\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(width_ / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title_) +
       "</text>\n";
  const double x0 = kLeft, x1 = width_ - kRight, y0 = height_ - kBottom, y1 = kTop;
  s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" + num(y0 - y1) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(x_)) {
    s += "<line x1=\"" + num(px(t)) + "\" x2=\"" + num(px(t)) + "\" y1=\"" + num(y0) + "\" y2=\"" + num(y0 + 5) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(px(t)) + "\" y=\"" + num(y0 + 18) + "\" text-anchor=\"middle\" font-size=\"10\">" +
         escape(tick_label(t, x_.log)) + "</text>\n";
  }
  for (double t : ticks(y_)) {
    s += "<line x1=\"" + num(x0 - 5) + "\" x2=\"" + num(x0) + "\" y1=\"" + num(py(t)) + "\" y2=\"" + num(py(t)) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py(t) + 3) + "\" text-anchor=\"end\" font-size=\"10\">" +
         escape(tick_label(t, y_.log)) + "</text>\n";
  }
  s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(height_ - 12.0) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + escape(x_.label) + "</text>\n";
  s += "<text transform=\"translate(16," + num((y0 + y1) / 2) +
       ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" + escape(y_.label) + "</text>\n";
  s += "<g clip-path=\"url(#plot)\">\n";
  s += "<clipPath id=\"plot\"><rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) +
       "\" height=\"" + num(y0 - y1) + "\"/></clipPath>\n";
  s += body_;
  s += "</g>\n";
  for (std::size_t i = 0; i < legend_.size(); ++i) {
    const double y = y1 + 14.0 + 16.0 * i;
    s += "<rect x=\"" + num(x1 + 8) + "\" y=\"" + num(y - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
         legend_[i].first + "\"/>\n";
    s += "<text x=\"" + num(x1 + 22) + "\" y=\"" + num(y + 1) + "\" font-size=\"10\">" + escape(legend_[i].second) +
         "</text>\n";
  }
  s += colorbar_;
  s += "</svg>\n";
  return s;
}

}  // namespace lab
