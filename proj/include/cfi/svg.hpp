#pragma once

#include <string>
#include <vector>

#include "cfi/analysis.hpp"
#include "cfi/simulator.hpp"

namespace cfi::svg {

/// One plotted data set. x and y must have equal size; non-finite points
/// are dropped. Colors are CSS color strings; empty picks from a fixed
/// palette in series order.
struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;     // legend entry; empty = not listed
  std::string color;     // e.g. "#1f77b4"; empty = palette
  bool line = true;      // connect points with a polyline
  bool markers = false;  // draw a small circle at each point
};

/// Axis-labelled line plot. Rendering is deliberately plain: one fixed
/// canvas, automatic 1-2-5 ticks, a legend when any series is labelled.
struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Writes a self-contained SVG file (no external fonts, scripts, or
/// references). Throws std::runtime_error if the file cannot be written
/// or no series contains a finite point.
void write_svg(const PlotSpec& spec, const std::string& path);

/// Fringe plot: measured coincidences per phase point, plus the fitted
/// curve rate*(1 + V cos(phi + delta)) when fit is non-null. The curve is
/// scaled by the mean integration time of the scan points.
void write_fringe_svg(const sim::FringeScan& scan,
                      const analysis::FringeFit* fit,
                      const std::string& path);

/// Coincidence histogram as a step plot, delay axis in nanoseconds.
void write_histogram_svg(const analysis::CoincidenceHistogram& hist,
                         const std::string& path);

}  // namespace cfi::svg
