#include "cfi/amplitude_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace cfi::io {
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

struct Row {
  std::vector<double> cols;
  std::size_t line;
};

struct Table {
  std::string header;
  std::vector<Row> rows;
};

Table read_table(const std::string& path, std::size_t n_cols) {
  std::ifstream in = open_in(path);
  Table table;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (line == 1) {
      table.header = text;
      continue;
    }
    Row row{{}, line};
    const char* p = text.c_str();
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p)
        throw std::invalid_argument(loc(path, line) + "malformed number in '" +
                                    text + "'");
      row.cols.push_back(v);
      p = end;
      if (*p == ',') {
        ++p;
      } else if (*p == '\0') {
        break;
      } else {
        throw std::invalid_argument(loc(path, line) +
                                    "unexpected character in '" + text + "'");
      }
    }
    if (row.cols.size() != n_cols)
      throw std::invalid_argument(loc(path, line) + "expected " +
                                  std::to_string(n_cols) + " columns, got " +
                                  std::to_string(row.cols.size()));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty())
    throw std::invalid_argument(path + ": missing header row");
  if (table.rows.empty())
    throw std::invalid_argument(path + ": no data rows");
  return table;
}

/// Fits coords to a uniform grid x_k = x_0 + k*step; throws naming the
/// first row that deviates by more than 1e-6 of a step.
double uniform_step(const std::string& path, const Table& table,
                    const std::vector<double>& coords,
                    const std::vector<std::size_t>& lines) {
  const std::size_t n = coords.size();
  if (n < 2) throw std::invalid_argument(path + ": need at least 2 rows");
  const double step = (coords[n - 1] - coords[0]) / static_cast<double>(n - 1);
  if (!(step > 0.0))
    throw std::invalid_argument(path + ": coordinates must be increasing");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = coords[0] + static_cast<double>(k) * step;
    if (std::abs(coords[k] - expected) > 1e-6 * step)
      throw std::invalid_argument(loc(path, lines[k]) +
                                  "non-uniform grid spacing");
  }
  (void)table;
  return step;
}

void write_rows_1d(std::ofstream& out, const char* header, double x0,
                   double step, const std::vector<cplx>& values) {
  out << header << "\n";
  char buf[128];
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = x0 + static_cast<double>(k) * step;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x,
                  values[k].real(), values[k].imag());
    out << buf;
  }
}

template <typename Grid>
Grid grid_from_coords(const std::string& path, const Table& table,
                      const std::vector<double>& coords,
                      const std::vector<std::size_t>& lines) {
  const double step = uniform_step(path, table, coords, lines);
  const std::size_t n = coords.size();
  const double center = coords[0] + (static_cast<double>(n) / 2.0) * step;
  try {
    return Grid(n, step, center);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

struct Parsed1D {
  std::vector<double> coords;
  std::vector<cplx> values;
  std::vector<std::size_t> lines;
};

Parsed1D parse_1d(const std::string& path, const Table& table) {
  Parsed1D p;
  for (const Row& row : table.rows) {
    p.coords.push_back(row.cols[0]);
    p.values.push_back({row.cols[1], row.cols[2]});
    p.lines.push_back(row.line);
  }
  return p;
}

constexpr const char* kSpectral1DHeader = "omega_rad_s,re,im";
constexpr const char* kTemporal1DHeader = "t_sec,re,im";
constexpr const char* kSpectral2DHeader = "omega_s,omega_i,re,im";
constexpr const char* kTemporal2DHeader = "ts_sec,ti_sec,re,im";

}  // namespace

void write_csv(const SpectralAmplitude1D& amp, const std::string& path) {
  std::ofstream out = open_out(path);
  write_rows_1d(out, kSpectral1DHeader, amp.grid().point(0), amp.grid().d_omega,
                amp.values());
}

void write_csv(const TemporalAmplitude1D& amp, const std::string& path) {
  std::ofstream out = open_out(path);
  write_rows_1d(out, kTemporal1DHeader, amp.grid().point(0), amp.grid().d_t,
                amp.values());
}

namespace {

template <typename GridS, typename GridI>
void write_rows_2d(std::ofstream& out, const char* header, const GridS& gs,
                   const GridI& gi, const std::vector<cplx>& values) {
  out << header << "\n";
  char buf[160];
  for (std::size_t s = 0; s < gs.n; ++s) {
    for (std::size_t i = 0; i < gi.n; ++i) {
      const cplx v = values[s * gi.n + i];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", gs.point(s),
                    gi.point(i), v.real(), v.imag());
      out << buf;
    }
  }
}

}  // namespace

void write_csv(const JointSpectralAmplitude2D& amp, const std::string& path) {
  std::ofstream out = open_out(path);
  write_rows_2d(out, kSpectral2DHeader, amp.signal(), amp.idler(), amp.values());
}

void write_csv(const JointTemporalAmplitude2D& amp, const std::string& path) {
  std::ofstream out = open_out(path);
  write_rows_2d(out, kTemporal2DHeader, amp.signal(), amp.idler(), amp.values());
}

SpectralAmplitude1D read_spectral_csv(const std::string& path) {
  const Table table = read_table(path, 3);
  if (table.header != kSpectral1DHeader)
    throw std::invalid_argument(path + ": expected header '" +
                                std::string(kSpectral1DHeader) + "', got '" +
                                table.header + "'");
  Parsed1D p = parse_1d(path, table);
  auto grid = grid_from_coords<FrequencyGrid>(path, table, p.coords, p.lines);
  return SpectralAmplitude1D::normalized(grid, std::move(p.values));
}

TemporalAmplitude1D read_temporal_csv(const std::string& path) {
  const Table table = read_table(path, 3);
  if (table.header != kTemporal1DHeader)
    throw std::invalid_argument(path + ": expected header '" +
                                std::string(kTemporal1DHeader) + "', got '" +
                                table.header + "'");
  Parsed1D p = parse_1d(path, table);
  auto grid = grid_from_coords<TimeGrid>(path, table, p.coords, p.lines);
  return TemporalAmplitude1D::normalized(grid, std::move(p.values));
}

JointSpectralAmplitude2D read_joint_spectral_csv(const std::string& path) {
  const Table table = read_table(path, 4);
  if (table.header != kSpectral2DHeader)
    throw std::invalid_argument(path + ": expected header '" +
                                std::string(kSpectral2DHeader) + "', got '" +
                                table.header + "'");
  const std::size_t total = table.rows.size();
  std::size_t ni = 0;
  while (ni < total && table.rows[ni].cols[0] == table.rows[0].cols[0]) ++ni;
  if (ni == 0 || total % ni != 0)
    throw std::invalid_argument(path + ": rows do not form a full 2-D grid");
  const std::size_t ns = total / ni;

  std::vector<double> signal_coords, idler_coords;
  std::vector<std::size_t> signal_lines, idler_lines;
  std::vector<cplx> values(total);
  for (std::size_t s = 0; s < ns; ++s) {
    const Row& first = table.rows[s * ni];
    signal_coords.push_back(first.cols[0]);
    signal_lines.push_back(first.line);
    for (std::size_t i = 0; i < ni; ++i) {
      const Row& row = table.rows[s * ni + i];
      if (row.cols[0] != first.cols[0])
        throw std::invalid_argument(loc(path, row.line) +
                                    "signal coordinate changes inside a block");
      if (s == 0) {
        idler_coords.push_back(row.cols[1]);
        idler_lines.push_back(row.line);
      } else if (row.cols[1] != idler_coords[i]) {
        throw std::invalid_argument(loc(path, row.line) +
                                    "idler coordinates differ between blocks");
      }
      values[s * ni + i] = {row.cols[2], row.cols[3]};
    }
  }
  auto gs = grid_from_coords<FrequencyGrid>(path, table, signal_coords, signal_lines);
  auto gi = grid_from_coords<FrequencyGrid>(path, table, idler_coords, idler_lines);
  return JointSpectralAmplitude2D::normalized(gs, gi, std::move(values));
}

AnyAmplitude read_amplitude_csv(const std::string& path) {
  std::string header;
  {
    std::ifstream in = open_in(path);
    if (!std::getline(in, header))
      throw std::invalid_argument(path + ": missing header row");
    if (!header.empty() && header.back() == '\r') header.pop_back();
  }
  if (header == kSpectral1DHeader) return read_spectral_csv(path);
  if (header == kSpectral2DHeader) return read_joint_spectral_csv(path);
  throw std::invalid_argument(path + ": unrecognized header '" + header + "'");
}

namespace {

template <typename Grid>
void write_density(const Grid& grid, const std::vector<double>& values,
                   const char* header, const std::string& path) {
  if (values.size() != grid.n)
    throw std::invalid_argument("write_density_csv: size mismatch");
  std::ofstream out = open_out(path);
  out << header << "\n";
  char buf[96];
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid.point(k), values[k]);
    out << buf;
  }
}

template <typename Grid>
std::pair<Grid, std::vector<double>> read_density(const std::string& path,
                                                  const char* header) {
  const Table table = read_table(path, 2);
  if (table.header != header)
    throw std::invalid_argument(path + ": expected header '" +
                                std::string(header) + "', got '" +
                                table.header + "'");
  std::vector<double> coords, values;
  std::vector<std::size_t> lines;
  for (const Row& row : table.rows) {
    coords.push_back(row.cols[0]);
    values.push_back(row.cols[1]);
    lines.push_back(row.line);
  }
  auto grid = grid_from_coords<Grid>(path, table, coords, lines);
  return {grid, std::move(values)};
}

}  // namespace

void write_density_csv(const FrequencyGrid& grid,
                       const std::vector<double>& values,
                       const std::string& path) {
  write_density(grid, values, "omega_rad_s,value", path);
}

void write_density_csv(const TimeGrid& grid, const std::vector<double>& values,
                       const std::string& path) {
  write_density(grid, values, "t_sec,value", path);
}

std::pair<FrequencyGrid, std::vector<double>> read_spectral_density_csv(
    const std::string& path) {
  return read_density<FrequencyGrid>(path, "omega_rad_s,value");
}

std::pair<TimeGrid, std::vector<double>> read_temporal_density_csv(
    const std::string& path) {
  return read_density<TimeGrid>(path, "t_sec,value");
}

}  // namespace cfi::io
