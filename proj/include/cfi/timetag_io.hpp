#pragma once

#include <string>

#include "cfi/simulator.hpp"

namespace cfi::io {

/// Time-tag file formats.
///
/// Binary: 16-byte header — the 8 ASCII bytes "CFITAG01" followed by the
/// tagger tick in integer picoseconds as a little-endian u64 — then one
/// 9-byte little-endian record (u8 channel, u64 ticks) per tag. Writing a
/// stream whose tick is not a whole number of picoseconds is an error.
/// The file stores no duration; the reader infers the smallest duration
/// consistent with the tags, (last tick + 1) * tick.
///
/// CSV (debug form): header "channel,tick" and one integer pair per row.
/// The CSV carries no tick resolution, so the reader takes it as an
/// argument (default 128 ps).
///
/// Read errors name the byte offset (binary) or line number (CSV) of the
/// first violation.
void write_timetags_binary(const sim::TimeTagStream& stream,
                           const std::string& path);
sim::TimeTagStream read_timetags_binary(const std::string& path);

void write_timetags_csv(const sim::TimeTagStream& stream,
                        const std::string& path);
sim::TimeTagStream read_timetags_csv(const std::string& path,
                                     double tick = 128e-12);

/// Sniffs the leading bytes: "CFITAG01" selects the binary reader,
/// anything else the CSV reader (with the default tick).
sim::TimeTagStream read_timetags(const std::string& path);

/// Fringe scans travel as CSV with header
/// "phi_t_rad,coincidences,integration_s". The scan source is not
/// persisted; reads default it to drift.
void write_fringe_scan_csv(const sim::FringeScan& scan,
                           const std::string& path);
sim::FringeScan read_fringe_scan_csv(const std::string& path);

}  // namespace cfi::io
