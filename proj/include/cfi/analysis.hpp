#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cfi/simulator.hpp"

namespace cfi::analysis {

/// Coincidence counts over signal-minus-idler arrival time. Bins are
/// centered on dt = 0: counts has odd size 2*h + 1 with h = ceil(window /
/// bin_width), and bin k covers center(k) +/- bin_width/2.
struct CoincidenceHistogram {
  double bin_width = 0.0;  // s
  double window = 0.0;     // s; histogram spans [-window, +window]
  std::vector<std::uint64_t> counts;

  std::size_t center_bin() const { return counts.size() / 2; }
  double center(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(counts.size() / 2)) *
           bin_width;
  }
  std::uint64_t total() const;
};

struct Peak {
  double center;     // s
  double area;       // background-subtracted counts
  double rms_width;  // s
};
using PeakSet = std::vector<Peak>;  // sorted by center

enum class VisibilityMethod { minmax, fit };

struct VisibilityEstimate {
  double v;
  double sigma_v;
  VisibilityMethod method;
};

struct FrequencyMapping {
  double detuning;    // rad/s
  double resolution;  // rad/s; 0 when no jitter figure was supplied
};

/// Least-squares fit of a scan to rate * (1 + v cos(phi + phase_offset)).
/// covariance is over the linear parameters (A, B, C) of the equivalent
/// form A + B cos phi + C sin phi, from which v and phase_offset derive.
struct FringeFit {
  double rate;  // counts/s
  VisibilityEstimate visibility;
  double phase_offset;  // rad
  std::array<std::array<double, 3>, 3> covariance;
};

/// Pairs each signal tag with its nearest idler tag, consuming tags in
/// time order so no tag is used twice, and bins the in-window pair
/// separations. An empty stream yields all-zero bins. bin_width below
/// the stream tick is an error (sub-tick bins would alias quantization).
CoincidenceHistogram build_histogram(const sim::TimeTagStream& stream,
                                     double window, double bin_width);

/// Local maxima above 5x the median bin count (at least 5 counts),
/// separated by at least expected_sep / 2, strongest three kept. Centers
/// and rms widths come from a background-subtracted centroid over +/-3
/// bins; areas from the same window with a linear background estimated
/// from the bins just outside it. Returned sorted by center; an empty
/// set means nothing cleared the threshold. Requires
/// expected_sep > 3 * bin_width.
PeakSet find_peaks(const CoincidenceHistogram& hist, double expected_sep);

/// Quadrature-combined tagger timing spread of a coincidence peak:
/// sqrt(2 jitter_sigma^2 + tick^2 / 6) (each channel jitters and
/// quantizes independently).
double combined_timing_jitter(double jitter_sigma, double tick);

/// detuning = dt / beta2; resolution = combined_jitter / |beta2|.
FrequencyMapping map_time_to_frequency(double dt, double beta2,
                                       double combined_jitter = 0.0);

/// Weighted (1 / max(count, 1)) least squares over the scan points.
/// Needs at least 5 points spanning at least pi of phase.
FringeFit fit_fringe(const sim::FringeScan& scan);

/// V = (max - min) / (max + min) with Poisson error propagation
/// sigma_V = 2 sqrt(max min^2 + min max^2) / (max + min)^2.
VisibilityEstimate visibility_minmax(double max_count, double min_count);

/// visibility_minmax applied to the extreme coincidence counts of a scan.
VisibilityEstimate scan_visibility_minmax(const sim::FringeScan& scan);

/// Report CSVs. Histogram rows are "dt_s,count", peak rows
/// "center_s,area,rms_s", fit reports "param,value,sigma" with params
/// rate, visibility, phase_offset_rad. Each has a reader so emitted
/// files round-trip bit-exactly.
void write_histogram_csv(const CoincidenceHistogram& hist,
                         const std::string& path);
CoincidenceHistogram read_histogram_csv(const std::string& path);

void write_peaks_csv(const PeakSet& peaks, const std::string& path);
PeakSet read_peaks_csv(const std::string& path);

struct FitReportRow {
  std::string param;
  double value;
  double sigma;
};
void write_fit_report_csv(const FringeFit& fit, const std::string& path);
void write_fit_report_rows(const std::vector<FitReportRow>& rows,
                           const std::string& path);
std::vector<FitReportRow> read_fit_report_csv(const std::string& path);

}  // namespace cfi::analysis
