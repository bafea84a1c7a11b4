#include "cfi/analysis.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace cfi::analysis {
namespace {

std::string loc(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line) + ": ";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::uint64_t tick_distance(std::uint64_t a, std::uint64_t b) {
  return a > b ? a - b : b - a;
}

double signed_tick_diff(std::uint64_t s, std::uint64_t i) {
  return s >= i ? static_cast<double>(s - i) : -static_cast<double>(i - s);
}

/// Mean count over the in-range bins of [lo, hi]; returns false when the
/// whole sample window falls outside the histogram.
bool side_mean(const std::vector<std::uint64_t>& counts, long lo, long hi,
               double& mean, double& position) {
  const long n = static_cast<long>(counts.size());
  double sum = 0.0, pos = 0.0;
  long used = 0;
  for (long k = std::max(lo, 0L); k <= std::min(hi, n - 1); ++k) {
    sum += static_cast<double>(counts[static_cast<std::size_t>(k)]);
    pos += static_cast<double>(k);
    ++used;
  }
  if (used == 0) return false;
  mean = sum / static_cast<double>(used);
  position = pos / static_cast<double>(used);
  return true;
}

struct CsvRows {
  std::vector<std::string> lines;  // data lines, CR and blanks stripped
};

CsvRows read_lines(const std::string& path, const char* expected_header) {
  std::ifstream in = open_in(path);
  CsvRows rows;
  std::string text;
  std::size_t line = 0;
  bool saw_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (!saw_header) {
      if (text != expected_header)
        throw std::invalid_argument(loc(path, line) + "expected header '" +
                                    expected_header + "', got '" + text + "'");
      saw_header = true;
      continue;
    }
    rows.lines.push_back(text);
  }
  if (!saw_header)
    throw std::invalid_argument(path + ": empty file (missing header '" +
                                std::string(expected_header) + "')");
  return rows;
}

double parse_double(const std::string& path, std::size_t line, const char*& p,
                    const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(p, &end);
  if (end == p)
    throw std::invalid_argument(loc(path, line) + "malformed number in '" +
                                text + "'");
  p = end;
  return v;
}

void expect_comma(const std::string& path, std::size_t line, const char*& p,
                  const std::string& text) {
  if (*p != ',')
    throw std::invalid_argument(loc(path, line) + "expected ',' in '" + text +
                                "'");
  ++p;
}

void expect_end(const std::string& path, std::size_t line, const char* p,
                const std::string& text) {
  if (*p != '\0')
    throw std::invalid_argument(loc(path, line) + "trailing characters in '" +
                                text + "'");
}

}  // namespace

std::uint64_t CoincidenceHistogram::total() const {
  std::uint64_t t = 0;
  for (std::uint64_t c : counts) t += c;
  return t;
}

CoincidenceHistogram build_histogram(const sim::TimeTagStream& stream,
                                     double window, double bin_width) {
  if (!(window > 0.0) || !std::isfinite(window))
    throw std::invalid_argument("build_histogram: window must be positive");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw std::invalid_argument("build_histogram: bin_width must be positive");
  if (bin_width < stream.tick)
    throw std::invalid_argument(
        "build_histogram: bin_width " + std::to_string(bin_width) +
        " s is finer than the tagger tick " + std::to_string(stream.tick) +
        " s");

  std::vector<std::uint64_t> signal, idler;
  for (const sim::TimeTag& tag : stream.tags)
    (tag.channel == 0 ? signal : idler).push_back(tag.ticks);

  const std::size_t h =
      static_cast<std::size_t>(std::ceil(window / bin_width));
  CoincidenceHistogram hist;
  hist.bin_width = bin_width;
  hist.window = window;
  hist.counts.assign(2 * h + 1, 0);

  // Nearest-idler unique pairing: both lists are time sorted, so the
  // idler nearest to each successive signal never moves backwards, and
  // an idler passed over here is farther from every later signal too.
  std::size_t ii = 0;
  for (std::size_t si = 0; si < signal.size() && ii < idler.size(); ++si) {
    while (ii + 1 < idler.size() &&
           tick_distance(idler[ii + 1], signal[si]) <=
               tick_distance(idler[ii], signal[si]))
      ++ii;
    const double dt = signed_tick_diff(signal[si], idler[ii]) * stream.tick;
    if (std::abs(dt) <= window) {
      const long long idx =
          static_cast<long long>(h) + std::llround(dt / bin_width);
      if (idx >= 0 && idx < static_cast<long long>(hist.counts.size()))
        ++hist.counts[static_cast<std::size_t>(idx)];
      ++ii;
    }
  }
  return hist;
}

PeakSet find_peaks(const CoincidenceHistogram& hist, double expected_sep) {
  if (hist.counts.empty())
    throw std::invalid_argument("find_peaks: histogram has no bins");
  if (!(expected_sep > 3.0 * hist.bin_width))
    throw std::invalid_argument(
        "find_peaks: expected_sep must exceed 3 bin widths");

  const std::vector<std::uint64_t>& c = hist.counts;
  const long n = static_cast<long>(c.size());

  std::vector<std::uint64_t> sorted = c;
  std::sort(sorted.begin(), sorted.end());
  const double median = static_cast<double>(sorted[sorted.size() / 2]);
  const double threshold = 5.0 * std::max(median, 1.0);

  std::vector<long> candidates;
  for (long k = 0; k < n; ++k) {
    const double v = static_cast<double>(c[static_cast<std::size_t>(k)]);
    if (!(v > threshold)) continue;
    const double left = k > 0 ? static_cast<double>(c[k - 1]) : 0.0;
    const double right = k + 1 < n ? static_cast<double>(c[k + 1]) : 0.0;
    if (v >= left && v >= right) candidates.push_back(k);
  }
  std::sort(candidates.begin(), candidates.end(), [&](long a, long b) {
    return c[a] != c[b] ? c[a] > c[b] : a < b;
  });

  const long radius =
      static_cast<long>(std::ceil(expected_sep / (2.0 * hist.bin_width)));
  std::vector<long> kept;
  for (long k : candidates) {
    bool clear = true;
    for (long other : kept)
      if (std::labs(k - other) < radius) clear = false;
    if (clear) {
      kept.push_back(k);
      if (kept.size() == 3) break;
    }
  }

  constexpr long kHalfWindow = 3;
  PeakSet peaks;
  for (long p : kept) {
    double bl = 0.0, xl = 0.0, br = 0.0, xr = 0.0;
    const bool has_l =
        side_mean(c, p - kHalfWindow - 3, p - kHalfWindow - 1, bl, xl);
    const bool has_r =
        side_mean(c, p + kHalfWindow + 1, p + kHalfWindow + 3, br, xr);
    if (!has_l && has_r) bl = br;
    if (!has_r && has_l) br = bl;

    double area = 0.0, first = 0.0, second = 0.0;
    for (long k = std::max(p - kHalfWindow, 0L);
         k <= std::min(p + kHalfWindow, n - 1); ++k) {
      double bg = bl;
      if (has_l && has_r && xr != xl)
        bg = bl + (br - bl) * (static_cast<double>(k) - xl) / (xr - xl);
      else if (!has_l && !has_r)
        bg = 0.0;
      const double s = std::max(
          static_cast<double>(c[static_cast<std::size_t>(k)]) - bg, 0.0);
      area += s;
      first += s * static_cast<double>(k);
      second += s * static_cast<double>(k) * static_cast<double>(k);
    }
    if (!(area > 0.0)) continue;
    const double mean = first / area;
    const double var = std::max(second / area - mean * mean, 0.0);
    peaks.push_back(
        {(mean - static_cast<double>(n / 2)) * hist.bin_width, area,
         std::sqrt(var) * hist.bin_width});
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.center < b.center; });
  return peaks;
}

double combined_timing_jitter(double jitter_sigma, double tick) {
  if (!(jitter_sigma >= 0.0) || !(tick >= 0.0))
    throw std::invalid_argument(
        "combined_timing_jitter: arguments must be non-negative");
  return std::sqrt(2.0 * jitter_sigma * jitter_sigma + tick * tick / 6.0);
}

FrequencyMapping map_time_to_frequency(double dt, double beta2,
                                       double combined_jitter) {
  if (beta2 == 0.0 || !std::isfinite(beta2))
    throw std::invalid_argument(
        "map_time_to_frequency: beta2 must be nonzero");
  if (!(combined_jitter >= 0.0))
    throw std::invalid_argument(
        "map_time_to_frequency: combined_jitter must be non-negative");
  return {dt / beta2, combined_jitter / std::abs(beta2)};
}

FringeFit fit_fringe(const sim::FringeScan& scan) {
  if (scan.points.size() < 5)
    throw std::invalid_argument("fit_fringe: need at least 5 scan points");
  double phi_lo = scan.points.front().phi_t;
  double phi_hi = phi_lo;
  for (const sim::FringePoint& pt : scan.points) {
    if (!(pt.integration > 0.0))
      throw std::invalid_argument(
          "fit_fringe: integration times must be positive");
    phi_lo = std::min(phi_lo, pt.phi_t);
    phi_hi = std::max(phi_hi, pt.phi_t);
  }
  if (!(phi_hi - phi_lo >= std::acos(-1.0) - 1e-9))
    throw std::invalid_argument(
        "fit_fringe: scan must span at least pi of phase");

  // counts ~ T (A + B cos phi + C sin phi), weights 1 / max(count, 1).
  double m[3][3] = {};
  double b[3] = {};
  for (const sim::FringePoint& pt : scan.points) {
    const double f[3] = {pt.integration, pt.integration * std::cos(pt.phi_t),
                         pt.integration * std::sin(pt.phi_t)};
    const double w =
        1.0 / std::max(static_cast<double>(pt.coincidences), 1.0);
    const double y = static_cast<double>(pt.coincidences);
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < 3; ++s) m[r][s] += w * f[r] * f[s];
      b[r] += w * y * f[r];
    }
  }

  // Solve the normal equations and invert for the covariance in one
  // elimination over [M | b I].
  double aug[3][4 + 3];
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < 3; ++s) {
      aug[r][s] = m[r][s];
      aug[r][4 + s] = r == s ? 1.0 : 0.0;
    }
    aug[r][3] = b[r];
  }
  double scale = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) scale = std::max(scale, std::abs(m[r][s]));
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    if (std::abs(aug[pivot][col]) <= 1e-12 * scale)
      throw std::invalid_argument(
          "fit_fringe: degenerate phase design (phases do not separate the "
          "fringe parameters)");
    if (pivot != col)
      for (int s = 0; s < 7; ++s) std::swap(aug[pivot][s], aug[col][s]);
    const double inv = 1.0 / aug[col][col];
    for (int s = 0; s < 7; ++s) aug[col][s] *= inv;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = aug[r][col];
      if (factor == 0.0) continue;
      for (int s = 0; s < 7; ++s) aug[r][s] -= factor * aug[col][s];
    }
  }

  const double A = aug[0][3];
  const double B = aug[1][3];
  const double C = aug[2][3];
  FringeFit fit;
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) fit.covariance[r][s] = aug[r][4 + s];

  if (!(A > 0.0))
    throw std::invalid_argument("fit_fringe: fitted mean rate is not positive");
  const double s = std::hypot(B, C);
  const double v = std::min(s / A, 1.0);

  double sigma_v;
  if (s > 0.0) {
    const double g[3] = {-s / (A * A), B / (s * A), C / (s * A)};
    double q = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int t = 0; t < 3; ++t) q += g[r] * fit.covariance[r][t] * g[t];
    sigma_v = std::sqrt(std::max(q, 0.0));
  } else {
    sigma_v =
        std::sqrt(std::max(fit.covariance[1][1] + fit.covariance[2][2], 0.0)) /
        A;
  }

  fit.rate = A;
  fit.visibility = {v, sigma_v, VisibilityMethod::fit};
  fit.phase_offset = std::atan2(-C, B);
  return fit;
}

VisibilityEstimate visibility_minmax(double max_count, double min_count) {
  if (!(max_count >= min_count) || !(min_count >= 0.0))
    throw std::invalid_argument(
        "visibility_minmax: need max_count >= min_count >= 0");
  if (!(max_count > 0.0))
    throw std::invalid_argument("visibility_minmax: max_count must be > 0");
  const double sum = max_count + min_count;
  const double v = (max_count - min_count) / sum;
  const double sigma =
      2.0 *
      std::sqrt(max_count * min_count * min_count +
                min_count * max_count * max_count) /
      (sum * sum);
  return {v, sigma, VisibilityMethod::minmax};
}

VisibilityEstimate scan_visibility_minmax(const sim::FringeScan& scan) {
  if (scan.points.empty())
    throw std::invalid_argument("scan_visibility_minmax: empty scan");
  std::uint64_t lo = scan.points.front().coincidences;
  std::uint64_t hi = lo;
  for (const sim::FringePoint& pt : scan.points) {
    lo = std::min(lo, pt.coincidences);
    hi = std::max(hi, pt.coincidences);
  }
  return visibility_minmax(static_cast<double>(hi), static_cast<double>(lo));
}

void write_histogram_csv(const CoincidenceHistogram& hist,
                         const std::string& path) {
  std::ofstream out = open_out(path);
  out << "dt_s,count\n";
  char row[64];
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    std::snprintf(row, sizeof(row), "%.17g,%llu\n", hist.center(k),
                  static_cast<unsigned long long>(hist.counts[k]));
    out << row;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

CoincidenceHistogram read_histogram_csv(const std::string& path) {
  const CsvRows rows = read_lines(path, "dt_s,count");
  const std::size_t n = rows.lines.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument(
        path + ": histogram needs an odd number of bins (>= 3), got " +
        std::to_string(n));

  std::vector<double> centers(n);
  CoincidenceHistogram hist;
  hist.counts.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::string& text = rows.lines[k];
    const std::size_t line = k + 2;
    const char* p = text.c_str();
    centers[k] = parse_double(path, line, p, text);
    expect_comma(path, line, p, text);
    char* end = nullptr;
    errno = 0;
    const unsigned long long count = std::strtoull(p, &end, 10);
    if (end == p || errno == ERANGE || *p == '-')
      throw std::invalid_argument(loc(path, line) + "malformed count in '" +
                                  text + "'");
    expect_end(path, line, end, text);
    hist.counts[k] = count;
  }

  const std::size_t h = n / 2;
  if (centers[h] != 0.0)
    throw std::invalid_argument(
        path + ": center bin must sit at dt = 0, got " +
        std::to_string(centers[h]));
  hist.bin_width = centers[h + 1];
  if (!(hist.bin_width > 0.0))
    throw std::invalid_argument(path + ": bins must increase through dt = 0");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected =
        (static_cast<double>(k) - static_cast<double>(h)) * hist.bin_width;
    if (std::abs(centers[k] - expected) > 1e-6 * hist.bin_width)
      throw std::invalid_argument(loc(path, k + 2) +
                                  "non-uniform histogram bin spacing");
  }
  hist.window = centers[n - 1];
  return hist;
}

void write_peaks_csv(const PeakSet& peaks, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "center_s,area,rms_s\n";
  char row[96];
  for (const Peak& p : peaks) {
    std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g\n", p.center, p.area,
                  p.rms_width);
    out << row;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

PeakSet read_peaks_csv(const std::string& path) {
  const CsvRows rows = read_lines(path, "center_s,area,rms_s");
  PeakSet peaks;
  for (std::size_t k = 0; k < rows.lines.size(); ++k) {
    const std::string& text = rows.lines[k];
    const std::size_t line = k + 2;
    const char* p = text.c_str();
    Peak peak;
    peak.center = parse_double(path, line, p, text);
    expect_comma(path, line, p, text);
    peak.area = parse_double(path, line, p, text);
    expect_comma(path, line, p, text);
    peak.rms_width = parse_double(path, line, p, text);
    expect_end(path, line, p, text);
    if (!peaks.empty() && peak.center < peaks.back().center)
      throw std::invalid_argument(loc(path, line) +
                                  "peak centers must be sorted");
    if (!(peak.area >= 0.0))
      throw std::invalid_argument(loc(path, line) +
                                  "peak area must be non-negative");
    peaks.push_back(peak);
  }
  return peaks;
}

void write_fit_report_csv(const FringeFit& fit, const std::string& path) {
  // Reconstruct the linear parameters to propagate the phase error.
  const double s = fit.rate * fit.visibility.v;
  const double B = s * std::cos(fit.phase_offset);
  const double C = -s * std::sin(fit.phase_offset);
  double sigma_phase = 0.0;
  if (s > 0.0) {
    const double g[3] = {0.0, C / (s * s), -B / (s * s)};
    double q = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int t = 0; t < 3; ++t) q += g[r] * fit.covariance[r][t] * g[t];
    sigma_phase = std::sqrt(std::max(q, 0.0));
  }
  write_fit_report_rows(
      {{"rate", fit.rate, std::sqrt(std::max(fit.covariance[0][0], 0.0))},
       {"visibility", fit.visibility.v, fit.visibility.sigma_v},
       {"phase_offset_rad", fit.phase_offset, sigma_phase}},
      path);
}

void write_fit_report_rows(const std::vector<FitReportRow>& rows,
                           const std::string& path) {
  std::ofstream out = open_out(path);
  out << "param,value,sigma\n";
  char buf[96];
  for (const FitReportRow& row : rows) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", row.value, row.sigma);
    out << row.param << buf;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<FitReportRow> read_fit_report_csv(const std::string& path) {
  const CsvRows rows = read_lines(path, "param,value,sigma");
  std::vector<FitReportRow> report;
  for (std::size_t k = 0; k < rows.lines.size(); ++k) {
    const std::string& text = rows.lines[k];
    const std::size_t line = k + 2;
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos || comma == 0)
      throw std::invalid_argument(loc(path, line) +
                                  "expected 'param,value,sigma' in '" + text +
                                  "'");
    FitReportRow row;
    row.param = text.substr(0, comma);
    const char* p = text.c_str() + comma + 1;
    row.value = parse_double(path, line, p, text);
    expect_comma(path, line, p, text);
    row.sigma = parse_double(path, line, p, text);
    expect_end(path, line, p, text);
    report.push_back(row);
  }
  return report;
}

}  // namespace cfi::analysis
