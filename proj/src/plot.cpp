#include "clotscan/plot.hpp"

#include <algorithm>
#include <cmath>

#include "clotscan/numfmt.hpp"
#include "clotscan/stats.hpp"

namespace clotscan {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 620.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 430.0;

// Largest 1/2/5 x 10^k step that yields at most ~6 ticks.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm <= 1.0) return mag;
  if (norm <= 2.0) return 2.0 * mag;
  if (norm <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  return format_double(v);
}

}  // namespace

std::string scatter_svg(const std::vector<ClotReport>& reports) {
  if (reports.empty()) raise(Errc::invalid_input, "nothing to plot");

  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(reports.size());
  ys.reserve(reports.size());
  for (const auto& r : reports) {
    if (!r.timestamp) raise(Errc::invalid_input, "reports must carry timestamps");
    xs.push_back(*r.timestamp);
    ys.push_back(static_cast<double>(r.cumulative_area));
  }

  double xmin = *std::min_element(xs.begin(), xs.end());
  double xmax = *std::max_element(xs.begin(), xs.end());
  double ymin = *std::min_element(ys.begin(), ys.end());
  double ymax = *std::max_element(ys.begin(), ys.end());
  const bool xs_vary = xmax > xmin;
  const bool ys_vary = ymax > ymin;

  // Pad so points sit clear of the frame; flat ranges get a unit of air.
  auto pad = [](double& lo, double& hi) {
    if (hi > lo) {
      const double margin = 0.05 * (hi - lo);
      lo -= margin;
      hi += margin;
    } else {
      lo -= 1.0;
      hi += 1.0;
    }
  };
  pad(xmin, xmax);
  pad(ymin, ymax);

  const auto sx = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  const auto sy = [&](double y) {
    return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";

  const bool with_line = reports.size() >= 2 && xs_vary && ys_vary;
  double slope = 0.0;
  double intercept = 0.0;
  if (with_line) {
    PairedSeries series{xs, ys};
    std::tie(slope, intercept) = linear_fit(series);
    svg += "<metadata>{\"slope\":" + num(slope) + ",\"intercept\":" + num(intercept) +
           "}</metadata>\n";
  }

  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
         num(kRight - kLeft) + "\" height=\"" + num(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"#444444\"/>\n";

  // Tick marks and grid labels. <line> is reserved for the fitted trend, so
  // ticks are drawn as <path>; consumers can probe for the trend by element
  // name.
  const double xstep = nice_step(xmax - xmin);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
    if (t == 0.0) t = 0.0;
    const double px = sx(t);
    svg += "<path d=\"M" + num(px) + " " + num(kBottom) + " L" + num(px) + " " +
           num(kBottom + 5.0) + "\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + num(px) + "\" y=\"" + num(kBottom + 18.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" + num(t) +
           "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
    if (t == 0.0) t = 0.0;
    const double py = sy(t);
    svg += "<path d=\"M" + num(kLeft - 5.0) + " " + num(py) + " L" + num(kLeft) + " " +
           num(py) + "\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + num(kLeft - 8.0) + "\" y=\"" + num(py + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + num(t) +
           "</text>\n";
  }

  svg += "<text x=\"" + num((kLeft + kRight) / 2.0) + "\" y=\"" + num(kBottom + 40.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
         "flow duration (min)</text>\n";
  svg += "<text x=\"18\" y=\"" + num((kTop + kBottom) / 2.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " +
         num((kTop + kBottom) / 2.0) + ")\">cumulative clot area (px)</text>\n";

  if (with_line) {
    const double x0 = *std::min_element(xs.begin(), xs.end());
    const double x1 = *std::max_element(xs.begin(), xs.end());
    svg += "<line x1=\"" + num(sx(x0)) + "\" y1=\"" + num(sy(slope * x0 + intercept)) +
           "\" x2=\"" + num(sx(x1)) + "\" y2=\"" + num(sy(slope * x1 + intercept)) +
           "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
  }

  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg += "<circle cx=\"" + num(sx(xs[i])) + "\" cy=\"" + num(sy(ys[i])) +
           "\" r=\"3.5\" fill=\"#2471a3\"/>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace clotscan
