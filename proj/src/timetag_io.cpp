#include "cfi/timetag_io.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace cfi::io {
namespace {

constexpr char kMagic[8] = {'C', 'F', 'I', 'T', 'A', 'G', '0', '1'};
constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kRecordBytes = 9;
constexpr const char* kTagCsvHeader = "channel,tick";
constexpr const char* kScanCsvHeader = "phi_t_rad,coincidences,integration_s";

std::string loc(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line) + ": ";
}

std::string at_byte(const std::string& path, std::size_t offset) {
  return path + ": byte " + std::to_string(offset) + ": ";
}

void put_u64_le(unsigned char* out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>(v >> (8 * b));
}

std::uint64_t get_u64_le(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[b]) << (8 * b);
  return v;
}

std::uint64_t tick_to_picoseconds(double tick) {
  const double ps = tick * 1e12;
  const double rounded = std::round(ps);
  if (!(rounded >= 1.0) || std::abs(ps - rounded) > 1e-6 * ps)
    throw std::invalid_argument(
        "time-tag tick of " + std::to_string(tick) +
        " s is not a whole number of picoseconds; the binary header stores "
        "integer picoseconds");
  return static_cast<std::uint64_t>(rounded);
}

void check_per_channel_order(const sim::TimeTagStream& stream) {
  std::array<bool, 2> seen = {false, false};
  std::array<std::uint64_t, 2> last = {0, 0};
  for (const sim::TimeTag& tag : stream.tags) {
    if (tag.channel > 1)
      throw std::invalid_argument("time-tag stream contains channel " +
                                  std::to_string(tag.channel) +
                                  " (only 0 and 1 exist)");
    if (seen[tag.channel] && tag.ticks < last[tag.channel])
      throw std::invalid_argument(
          "time-tag stream is not time-ordered on channel " +
          std::to_string(tag.channel));
    seen[tag.channel] = true;
    last[tag.channel] = tag.ticks;
  }
}

double inferred_duration(const std::vector<sim::TimeTag>& tags, double tick) {
  std::uint64_t last = 0;
  bool any = false;
  for (const sim::TimeTag& tag : tags) {
    if (!any || tag.ticks > last) last = tag.ticks;
    any = true;
  }
  return any ? static_cast<double>(last + 1) * tick : 0.0;
}

std::vector<unsigned char> slurp_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

/// Parses a strict non-negative decimal integer; returns false if the
/// field is empty, overflows, or starts with anything but a digit.
bool parse_u64(const char*& p, std::uint64_t& out) {
  if (*p < '0' || *p > '9') return false;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(p, &end, 10);
  if (errno == ERANGE) return false;
  p = end;
  out = v;
  return true;
}

}  // namespace

void write_timetags_binary(const sim::TimeTagStream& stream,
                           const std::string& path) {
  const std::uint64_t tick_ps = tick_to_picoseconds(stream.tick);
  check_per_channel_order(stream);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");

  unsigned char header[kHeaderBytes];
  std::memcpy(header, kMagic, sizeof(kMagic));
  put_u64_le(header + 8, tick_ps);
  out.write(reinterpret_cast<const char*>(header), kHeaderBytes);

  unsigned char record[kRecordBytes];
  for (const sim::TimeTag& tag : stream.tags) {
    record[0] = tag.channel;
    put_u64_le(record + 1, tag.ticks);
    out.write(reinterpret_cast<const char*>(record), kRecordBytes);
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

sim::TimeTagStream read_timetags_binary(const std::string& path) {
  const std::vector<unsigned char> bytes = slurp_binary(path);
  if (bytes.size() < kHeaderBytes)
    throw std::invalid_argument(
        at_byte(path, bytes.size()) + "truncated header (need " +
        std::to_string(kHeaderBytes) + " bytes, file has " +
        std::to_string(bytes.size()) + ")");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw std::invalid_argument(at_byte(path, 0) +
                                "bad magic (expected \"CFITAG01\")");
  const std::uint64_t tick_ps = get_u64_le(bytes.data() + 8);
  if (tick_ps == 0)
    throw std::invalid_argument(at_byte(path, 8) +
                                "tick of 0 picoseconds is invalid");

  const std::size_t payload = bytes.size() - kHeaderBytes;
  if (payload % kRecordBytes != 0)
    throw std::invalid_argument(
        at_byte(path, kHeaderBytes + payload - payload % kRecordBytes) +
        "truncated record (" + std::to_string(payload % kRecordBytes) +
        " trailing bytes, records are " + std::to_string(kRecordBytes) +
        " bytes)");

  sim::TimeTagStream stream;
  stream.tick = static_cast<double>(tick_ps) * 1e-12;
  stream.tags.reserve(payload / kRecordBytes);
  std::array<bool, 2> seen = {false, false};
  std::array<std::uint64_t, 2> last = {0, 0};
  for (std::size_t off = kHeaderBytes; off < bytes.size();
       off += kRecordBytes) {
    const std::uint8_t channel = bytes[off];
    if (channel > 1)
      throw std::invalid_argument(at_byte(path, off) + "invalid channel " +
                                  std::to_string(channel) +
                                  " (only 0 and 1 exist)");
    const std::uint64_t ticks = get_u64_le(bytes.data() + off + 1);
    if (seen[channel] && ticks < last[channel])
      throw std::invalid_argument(at_byte(path, off) +
                                  "time tags decrease on channel " +
                                  std::to_string(channel));
    seen[channel] = true;
    last[channel] = ticks;
    stream.tags.push_back({channel, ticks});
  }
  stream.duration = inferred_duration(stream.tags, stream.tick);
  return stream;
}

void write_timetags_csv(const sim::TimeTagStream& stream,
                        const std::string& path) {
  check_per_channel_order(stream);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << kTagCsvHeader << "\n";
  char row[48];
  for (const sim::TimeTag& tag : stream.tags) {
    std::snprintf(row, sizeof(row), "%u,%llu\n", unsigned(tag.channel),
                  static_cast<unsigned long long>(tag.ticks));
    out << row;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

sim::TimeTagStream read_timetags_csv(const std::string& path, double tick) {
  if (!(tick > 0.0))
    throw std::invalid_argument("read_timetags_csv: tick must be positive");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");

  sim::TimeTagStream stream;
  stream.tick = tick;
  std::array<bool, 2> seen = {false, false};
  std::array<std::uint64_t, 2> last = {0, 0};
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (line == 1) {
      if (text != kTagCsvHeader)
        throw std::invalid_argument(loc(path, line) + "expected header '" +
                                    kTagCsvHeader + "', got '" + text + "'");
      continue;
    }
    const char* p = text.c_str();
    std::uint64_t channel = 0;
    std::uint64_t ticks = 0;
    if (!parse_u64(p, channel) || channel > 1)
      throw std::invalid_argument(loc(path, line) +
                                  "invalid channel in '" + text + "'");
    if (*p != ',')
      throw std::invalid_argument(loc(path, line) + "expected ',' in '" +
                                  text + "'");
    ++p;
    if (!parse_u64(p, ticks) || *p != '\0')
      throw std::invalid_argument(loc(path, line) + "invalid tick in '" +
                                  text + "'");
    if (seen[channel] && ticks < last[channel])
      throw std::invalid_argument(loc(path, line) +
                                  "time tags decrease on channel " +
                                  std::to_string(channel));
    seen[channel] = true;
    last[channel] = ticks;
    stream.tags.push_back(
        {static_cast<std::uint8_t>(channel), ticks});
  }
  stream.duration = inferred_duration(stream.tags, stream.tick);
  return stream;
}

sim::TimeTagStream read_timetags(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open " + path + " for reading");
  char head[sizeof(kMagic)] = {};
  probe.read(head, sizeof(head));
  const bool binary = probe.gcount() == sizeof(kMagic) &&
                      std::memcmp(head, kMagic, sizeof(kMagic)) == 0;
  probe.close();
  return binary ? read_timetags_binary(path) : read_timetags_csv(path);
}

void write_fringe_scan_csv(const sim::FringeScan& scan,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << kScanCsvHeader << "\n";
  char row[96];
  for (const sim::FringePoint& pt : scan.points) {
    std::snprintf(row, sizeof(row), "%.17g,%llu,%.17g\n", pt.phi_t,
                  static_cast<unsigned long long>(pt.coincidences),
                  pt.integration);
    out << row;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

sim::FringeScan read_fringe_scan_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  sim::FringeScan scan;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (line == 1) {
      if (text != kScanCsvHeader)
        throw std::invalid_argument(loc(path, line) + "expected header '" +
                                    kScanCsvHeader + "', got '" + text + "'");
      continue;
    }
    const char* p = text.c_str();
    char* end = nullptr;
    const double phi = std::strtod(p, &end);
    if (end == p || *end != ',')
      throw std::invalid_argument(loc(path, line) + "malformed phase in '" +
                                  text + "'");
    p = end + 1;
    std::uint64_t counts = 0;
    if (!parse_u64(p, counts) || *p != ',')
      throw std::invalid_argument(loc(path, line) +
                                  "malformed coincidence count in '" + text +
                                  "'");
    ++p;
    const double integration = std::strtod(p, &end);
    if (end == p || *end != '\0' || !(integration > 0.0))
      throw std::invalid_argument(loc(path, line) +
                                  "malformed integration time in '" + text +
                                  "'");
    scan.points.push_back({phi, counts, integration});
  }
  return scan;
}

}  // namespace cfi::io
