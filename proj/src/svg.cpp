#include "cfi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cfi::svg {
namespace {

constexpr double kWidth = 840.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 90.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 62.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Coordinates get two decimals; enough for a 840-unit canvas.
std::string coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
};

// Pads a degenerate or empty range so the mapping below is well defined.
Range padded(Range r) {
  if (!r.valid()) {
    r.lo = 0.0;
    r.hi = 1.0;
  }
  if (r.lo == r.hi) {
    const double pad = (r.lo == 0.0) ? 1.0 : std::abs(r.lo) * 0.5;
    r.lo -= pad;
    r.hi += pad;
  }
  return r;
}

// Tick positions with a 1-2-5 step, covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  const double raw = span / std::max(target, 2);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step - 1e-9) * step;
  for (double v = first; v <= hi + 1e-9 * span; v += step) {
    // Snap values that should be zero; "-0" labels look broken.
    ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  }
  return ticks;
}

}  // namespace

void write_svg(const PlotSpec& spec, const std::string& path) {
  Range xr;
  Range yr;
  for (const Series& s : spec.series) {
    if (s.x.size() != s.y.size()) {
      throw std::runtime_error("write_svg: series '" + s.label +
                               "' has mismatched x/y sizes");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        xr.include(s.x[i]);
        yr.include(s.y[i]);
      }
    }
  }
  if (!xr.valid()) {
    throw std::runtime_error("write_svg: no finite data points to plot");
  }
  xr = padded(xr);
  yr = padded(yr);
  // Leave some air above and below the data.
  const double ypad = (yr.hi - yr.lo) * 0.06;
  yr.lo -= ypad;
  yr.hi += ypad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  const auto py = [&](double y) {
    return kMarginTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
      << kWidth << ' ' << kHeight << "\" font-family=\"Helvetica, Arial, "
      << "sans-serif\" font-size=\"14\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"#ffffff\"/>\n";

  // Grid lines and tick labels.
  const std::vector<double> xticks = nice_ticks(xr.lo, xr.hi);
  const std::vector<double> yticks = nice_ticks(yr.lo, yr.hi);
  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t : xticks) {
    out << "<line x1=\"" << coord(px(t)) << "\" y1=\"" << coord(kMarginTop)
        << "\" x2=\"" << coord(px(t)) << "\" y2=\""
        << coord(kMarginTop + plot_h) << "\"/>\n";
  }
  for (double t : yticks) {
    out << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(py(t))
        << "\" x2=\"" << coord(kMarginLeft + plot_w) << "\" y2=\""
        << coord(py(t)) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g fill=\"#333333\">\n";
  for (double t : xticks) {
    out << "<text x=\"" << coord(px(t)) << "\" y=\""
        << coord(kMarginTop + plot_h + 22.0)
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : yticks) {
    out << "<text x=\"" << coord(kMarginLeft - 10.0) << "\" y=\""
        << coord(py(t) + 5.0) << "\" text-anchor=\"end\">" << fmt(t)
        << "</text>\n";
  }
  out << "</g>\n";

  // Frame.
  out << "<rect x=\"" << coord(kMarginLeft) << "\" y=\"" << coord(kMarginTop)
      << "\" width=\"" << coord(plot_w) << "\" height=\"" << coord(plot_h)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1.2\"/>\n";

  // Series.
  std::size_t color_idx = 0;
  for (const Series& s : spec.series) {
    const std::string color =
        s.color.empty() ? kPalette[color_idx % kPaletteSize] : s.color;
    ++color_idx;
    if (s.line) {
      std::ostringstream pts;
      bool open = false;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          continue;
        }
        pts << (open ? " " : "") << coord(px(s.x[i])) << ','
            << coord(py(s.y[i]));
        open = true;
      }
      if (open) {
        out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" "
            << "stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
      }
    }
    if (s.markers) {
      out << "<g fill=\"" << color << "\">\n";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          continue;
        }
        out << "<circle cx=\"" << coord(px(s.x[i])) << "\" cy=\""
            << coord(py(s.y[i])) << "\" r=\"3.2\"/>\n";
      }
      out << "</g>\n";
    }
  }

  // Title and axis labels.
  out << "<g fill=\"#1a1a1a\">\n";
  if (!spec.title.empty()) {
    out << "<text x=\"" << coord(kWidth / 2.0)
        << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">"
        << escape_xml(spec.title) << "</text>\n";
  }
  if (!spec.x_label.empty()) {
    out << "<text x=\"" << coord(kMarginLeft + plot_w / 2.0) << "\" y=\""
        << coord(kHeight - 14.0) << "\" text-anchor=\"middle\">"
        << escape_xml(spec.x_label) << "</text>\n";
  }
  if (!spec.y_label.empty()) {
    out << "<text x=\"24\" y=\"" << coord(kMarginTop + plot_h / 2.0)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 24 "
        << coord(kMarginTop + plot_h / 2.0) << ")\">"
        << escape_xml(spec.y_label) << "</text>\n";
  }
  out << "</g>\n";

  // Legend, only when something is labelled.
  double legend_y = kMarginTop + 16.0;
  color_idx = 0;
  for (const Series& s : spec.series) {
    const std::string color =
        s.color.empty() ? kPalette[color_idx % kPaletteSize] : s.color;
    ++color_idx;
    if (s.label.empty()) {
      continue;
    }
    const double x0 = kMarginLeft + plot_w - 180.0;
    out << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(legend_y - 5.0)
        << "\" x2=\"" << coord(x0 + 26.0) << "\" y2=\""
        << coord(legend_y - 5.0) << "\" stroke=\"" << color
        << "\" stroke-width=\"2.5\"/>\n";
    out << "<text x=\"" << coord(x0 + 34.0) << "\" y=\"" << coord(legend_y)
        << "\" fill=\"#1a1a1a\">" << escape_xml(s.label) << "</text>\n";
    legend_y += 22.0;
  }

  out << "</svg>\n";

  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  file << out.str();
  if (!file) {
    throw std::runtime_error("error writing " + path);
  }
}

void write_fringe_svg(const sim::FringeScan& scan,
                      const analysis::FringeFit* fit,
                      const std::string& path) {
  PlotSpec spec;
  spec.title = "Coincidence fringe";
  spec.x_label = "phi_T (rad)";
  spec.y_label = "coincidences";

  Series data;
  data.label = "measured";
  data.line = false;
  data.markers = true;
  double integration_sum = 0.0;
  for (const sim::FringePoint& p : scan.points) {
    data.x.push_back(p.phi_t);
    data.y.push_back(static_cast<double>(p.coincidences));
    integration_sum += p.integration;
  }
  spec.series.push_back(std::move(data));

  if (fit != nullptr && !scan.points.empty()) {
    const double t_mean = integration_sum / scan.points.size();
    const auto [lo_it, hi_it] = std::minmax_element(
        scan.points.begin(), scan.points.end(),
        [](const sim::FringePoint& a, const sim::FringePoint& b) {
          return a.phi_t < b.phi_t;
        });
    Series curve;
    curve.label = "fit";
    constexpr int kCurvePoints = 256;
    for (int i = 0; i <= kCurvePoints; ++i) {
      const double phi = lo_it->phi_t +
                         (hi_it->phi_t - lo_it->phi_t) * i / kCurvePoints;
      curve.x.push_back(phi);
      curve.y.push_back(t_mean * fit->rate *
                        (1.0 + fit->visibility.v *
                                   std::cos(phi + fit->phase_offset)));
    }
    spec.series.push_back(std::move(curve));
  }

  write_svg(spec, path);
}

void write_histogram_svg(const analysis::CoincidenceHistogram& hist,
                         const std::string& path) {
  PlotSpec spec;
  spec.title = "Coincidence histogram";
  spec.x_label = "signal - idler delay (ns)";
  spec.y_label = "counts";

  // Step outline: each bin contributes its left and right edge.
  Series steps;
  steps.label = "";
  const std::size_t n = hist.counts.size();
  steps.x.reserve(2 * n);
  steps.y.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double left = (hist.center(k) - hist.bin_width / 2.0) * 1e9;
    const double right = (hist.center(k) + hist.bin_width / 2.0) * 1e9;
    const double y = static_cast<double>(hist.counts[k]);
    steps.x.push_back(left);
    steps.y.push_back(y);
    steps.x.push_back(right);
    steps.y.push_back(y);
  }
  spec.series.push_back(std::move(steps));

  write_svg(spec, path);
}

}  // namespace cfi::svg
